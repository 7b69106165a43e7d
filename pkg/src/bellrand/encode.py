"""Encoders that turn event and code streams into bit sequences.

Every BinarySequence records which encoder produced it; complexity and
battery figures are meaningless without that provenance, so reports must
surface it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from bellrand.errors import TooShortError

ENCODING_CODES = "codes-2bit"
ENCODING_JOINT = "joint-4bit"
ENCODING_DT = "dt-median"


@dataclass(frozen=True)
class BinarySequence:
    """A bit string plus the name of the encoding that produced it."""

    bits: np.ndarray = field(repr=False)
    encoding: str

    def __post_init__(self):
        arr = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("BinarySequence needs at least one bit")
        if arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "bits", arr)

    @property
    def n(self) -> int:
        return int(self.bits.size)

    def to01(self) -> str:
        return "".join("01"[b] for b in self.bits)

    @classmethod
    def from01(cls, text: str, encoding: str = "raw") -> "BinarySequence":
        stripped = "".join(text.split())
        if not set(stripped) <= {"0", "1"}:
            raise ValueError("expected a string of 0/1 characters")
        bits = np.frombuffer(stripped.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls(bits=bits, encoding=encoding)

    def __len__(self) -> int:
        return self.n


def encode_codes(codes) -> BinarySequence:
    """Expand two-bit codes, most-significant bit first: 2 emits '10'."""
    arr = np.asarray(codes, dtype=np.uint8)
    if arr.size == 0:
        raise TooShortError("no codes to encode")
    if arr.max() > 3:
        raise ValueError("codes must lie in 0..3")
    bits = np.empty(2 * arr.size, dtype=np.uint8)
    bits[0::2] = (arr >> 1) & 1
    bits[1::2] = arr & 1
    return BinarySequence(bits=bits, encoding=ENCODING_CODES)


def decode_codes(seq: BinarySequence) -> np.ndarray:
    """Inverse of encode_codes: 2-bit chunking, MSB first."""
    bits = seq.bits
    if bits.size % 2:
        raise ValueError("bit count not a multiple of 2")
    return (bits[0::2] << 1) | bits[1::2]


def encode_joint(seq) -> BinarySequence:
    """Four bits per coincidence: Alice's code then Bob's, MSB first."""
    code_a = np.asarray(seq.code_a, dtype=np.uint8)
    code_b = np.asarray(seq.code_b, dtype=np.uint8)
    if code_a.size == 0:
        raise TooShortError("no coincidences to encode")
    bits = np.empty(4 * code_a.size, dtype=np.uint8)
    bits[0::4] = (code_a >> 1) & 1
    bits[1::4] = code_a & 1
    bits[2::4] = (code_b >> 1) & 1
    bits[3::4] = code_b & 1
    return BinarySequence(bits=bits, encoding=ENCODING_JOINT)


def binarize_times(times) -> BinarySequence:
    """Threshold inter-arrival gaps at their median: above -> 1, else 0.

    The median split keeps the bit balance near 1/2 regardless of the
    gap distribution, so complexity deficits reflect temporal structure
    rather than bias.  Ties go to 0.
    """
    t = np.asarray(times, dtype=np.float64)
    if t.size < 3:
        raise TooShortError(f"need at least 3 times, got {t.size}")
    deltas = np.diff(t)
    median = np.median(deltas)
    bits = (deltas > median).astype(np.uint8)
    return BinarySequence(bits=bits, encoding=ENCODING_DT)
