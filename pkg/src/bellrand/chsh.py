"""Joint-outcome tallies, setting-pair correlations, and the CHSH parameter.

Each two-bit event code carries the analyzer setting in one bit and the
fired detector (the +-1 outcome) in the other.  Which bit is which is not
standardized, so CodeMap makes it explicit; outcome bit 0 maps to +1.
Because the labeling is ambiguous, the default CHSH mode tries the four
canonical sign placements and reports the largest |S|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bellrand.coincidence import CoincidenceSequence
from bellrand.errors import EmptySequenceError, NoDataForPairError

FIXED_COMBINATION = "minus-01"

# descriptor -> per-term signs for (E00, E01, E10, E11)
SIGN_COMBINATIONS = {
    "minus-00": (-1.0, 1.0, 1.0, 1.0),
    "minus-01": (1.0, -1.0, 1.0, 1.0),
    "minus-10": (1.0, 1.0, -1.0, 1.0),
    "minus-11": (1.0, 1.0, 1.0, -1.0),
}


@dataclass(frozen=True)
class CodeMap:
    """Bit positions of the setting and the detector within a code.

    Bit index b is extracted as ``(code >> b) & 1``; index 1 is the
    most-significant bit of the two.
    """

    setting_bit: int = 1
    outcome_bit: int = 0

    def __post_init__(self):
        if {self.setting_bit, self.outcome_bit} != {0, 1}:
            raise ValueError("setting_bit and outcome_bit must be 0 and 1 in some order")

    def split(self, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(settings, outcome indices); outcome index 0 means +1, 1 means -1."""
        c = np.asarray(codes)
        return (c >> self.setting_bit) & 1, (c >> self.outcome_bit) & 1


DEFAULT_CODE_MAP = CodeMap()


@dataclass(frozen=True)
class JointCounts:
    """16-cell tally n[a_setting][b_setting][a_outcome][b_outcome].

    Outcome axis index 0 corresponds to +1 and index 1 to -1.
    """

    n: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.n, dtype=np.int64)
        if arr.shape != (2, 2, 2, 2):
            raise ValueError("joint counts must have shape (2, 2, 2, 2)")
        if (arr < 0).any():
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "n", arr)

    @property
    def total(self) -> int:
        return int(self.n.sum())

    def pair_total(self, a: int, b: int) -> int:
        return int(self.n[a, b].sum())


@dataclass(frozen=True)
class ChshResult:
    """Correlation matrix, S value, and the sign placement that produced it."""

    e: np.ndarray
    s: float
    sign_combination: str
    pair_counts: np.ndarray


def tally(seq: CoincidenceSequence, code_map: CodeMap = DEFAULT_CODE_MAP) -> JointCounts:
    """Decode every coincidence and accumulate the 16-cell joint tally."""
    if seq.n == 0:
        raise EmptySequenceError("cannot tally an empty coincidence sequence")
    a_set, a_out = code_map.split(seq.code_a)
    b_set, b_out = code_map.split(seq.code_b)
    idx = ((a_set.astype(np.int64) * 2 + b_set) * 2 + a_out) * 2 + b_out
    counts = np.bincount(idx, minlength=16).reshape(2, 2, 2, 2)
    return JointCounts(n=counts)


def correlation(counts: JointCounts, a: int, b: int) -> float:
    """E(a,b) = (N++ + N-- - N+- - N-+) / N for one setting pair."""
    cell = counts.n[a, b]
    total = int(cell.sum())
    if total == 0:
        raise NoDataForPairError(a, b)
    same = int(cell[0, 0] + cell[1, 1])
    diff = int(cell[0, 1] + cell[1, 0])
    return (same - diff) / total


def chsh(counts: JointCounts, sign_combination: str = "auto") -> ChshResult:
    """CHSH parameter from the four setting-pair correlations.

    'fixed' evaluates S = E00 - E01 + E10 + E11.  'auto' places the minus
    sign on each term in turn and keeps the placement with the largest
    |S| (ties keep the first in minus-00..minus-11 order); the chosen
    placement is recorded in the result.
    """
    e = np.empty((2, 2), dtype=np.float64)
    pair_counts = np.empty((2, 2), dtype=np.int64)
    for a in (0, 1):
        for b in (0, 1):
            e[a, b] = correlation(counts, a, b)
            pair_counts[a, b] = counts.pair_total(a, b)

    if sign_combination == "fixed":
        chosen = FIXED_COMBINATION
    elif sign_combination == "auto":
        best = None
        for name, signs in SIGN_COMBINATIONS.items():
            s_val = sum(sg * ev for sg, ev in zip(signs, e.ravel()))
            if best is None or abs(s_val) > abs(best[1]):
                best = (name, s_val)
        chosen = best[0]
    elif sign_combination in SIGN_COMBINATIONS:
        chosen = sign_combination
    else:
        raise ValueError(f"unknown sign_combination {sign_combination!r}")

    signs = SIGN_COMBINATIONS[chosen]
    s = float(sum(sg * ev for sg, ev in zip(signs, e.ravel())))
    return ChshResult(e=e, s=s, sign_combination=chosen, pair_counts=pair_counts)
