"""Lempel-Ziv production complexity and its log-normalized form.

The word count c is the size of the exhaustive copy-production parse:
scanning left to right, the current word is extended for as long as it can
be copied from somewhere in the already-seen prefix (the copy source may
overlap the word being built); when extension fails the word is closed,
one innovative character is consumed, and the counter increments.  The
terminal word counts even when it is copy-reproducible to the end.

The normalized measure is k = c * log2(n) / n: near 0 for periodic input,
near 1 for random input at large n, and above 1 for short random strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from bellrand import _backend
from bellrand.errors import BadCheckpointError, EmptySequenceError, LengthTooShortError


@dataclass(frozen=True)
class ComplexityResult:
    """Word count c, sequence length n, and k = c * log2(n) / n."""

    c: int
    n: int
    k: float


def as_bit_array(bits) -> np.ndarray:
    """Coerce a bit container to a uint8 array of 0/1 values.

    Accepts anything with a ``.bits`` array attribute, a string of '0'/'1'
    characters, or any sequence of 0/1 integers.
    """
    if hasattr(bits, "bits"):
        bits = bits.bits
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence may only contain 0 and 1")
    return np.ascontiguousarray(arr)


def lz76_count(bits) -> int:
    """Production word count of a bit sequence (fast longest-copy search)."""
    arr = as_bit_array(bits)
    if arr.size == 0:
        raise EmptySequenceError("cannot parse an empty sequence")
    return int(_backend.lz76_parse_positions(arr).size)


def lz76_count_reference(bits) -> int:
    """Quadratic reference counter used as the correctness oracle.

    Tests copy-reproducibility by explicit substring search: the word at
    position p grows while s[p:p+l] occurs inside s[:p+l-1], i.e. while it
    can be copied from a start strictly before p.  Independent of the
    suffix-structure implementation behind :func:`lz76_count`.
    """
    arr = as_bit_array(bits)
    n = int(arr.size)
    if n == 0:
        raise EmptySequenceError("cannot parse an empty sequence")
    s = arr.tobytes()
    c = 0
    p = 0
    while p < n:
        l = 1
        while p + l <= n and s[p : p + l] in s[: p + l - 1]:
            l += 1
        c += 1
        p += l
    return c


def lz76_parse_positions(bits) -> np.ndarray:
    """Start index of every word in the parse (int64 array)."""
    arr = as_bit_array(bits)
    if arr.size == 0:
        raise EmptySequenceError("cannot parse an empty sequence")
    return _backend.lz76_parse_positions(arr)


def normalized_k(c: int, n: int) -> float:
    """k = c * log2(n) / n, the length-normalized word count."""
    if n < 2:
        raise LengthTooShortError(f"need n >= 2, got {n}")
    return c * math.log2(n) / n


def analyze(bits) -> ComplexityResult:
    """Word count and normalized complexity of one bit sequence."""
    arr = as_bit_array(bits)
    c = lz76_count(arr)
    return ComplexityResult(c=c, n=int(arr.size), k=normalized_k(c, int(arr.size)))


def complexity_profile(bits, checkpoints: Sequence[int]) -> list[tuple[int, int, float]]:
    """Evaluate (n, c, k) on each prefix length in ``checkpoints``.

    Checkpoints must be increasing, each in [2, len(bits)].  A single
    left-to-right parse of the full sequence serves all prefixes: a word
    start at position q belongs to the parse of every prefix that contains
    position q, so c(m) is the number of word starts below m.
    """
    arr = as_bit_array(bits)
    n = int(arr.size)
    if n == 0:
        raise EmptySequenceError("cannot parse an empty sequence")
    pts = [int(m) for m in checkpoints]
    if not pts:
        raise BadCheckpointError("no checkpoints given")
    for i, m in enumerate(pts):
        if not 2 <= m <= n:
            raise BadCheckpointError(f"checkpoint {m} outside [2, {n}]")
        if i > 0 and m <= pts[i - 1]:
            raise BadCheckpointError(f"checkpoint {m} not increasing")
    positions = _backend.lz76_parse_positions(arr)
    out = []
    for m in pts:
        c = int(np.searchsorted(positions, m, side="left"))
        out.append((m, c, normalized_k(c, m)))
    return out
