"""Six-test statistical randomness battery.

Monobit frequency, block frequency, runs, longest run of ones, binary
matrix rank, and spectral (DFT).  Each test returns a p-value compared
against a significance level alpha (default 0.01); the battery verdict is
positive only when all six pass.  Sequences below a test's minimum length
yield a distinct 'too-short' status inside the battery instead of a
fabricated p-value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc, gammaincc

from bellrand.complexity import as_bit_array
from bellrand.errors import BlockTooSmallError, EmptySequenceError, SequenceTooShortError

DEFAULT_ALPHA = 0.01

TEST_NAMES = (
    "monobit",
    "block_frequency",
    "runs",
    "longest_run",
    "matrix_rank",
    "dft_spectral",
)


@dataclass(frozen=True)
class TestResult:
    name: str
    p_value: float | None
    passed: bool
    statistic: float | None
    params: dict = field(default_factory=dict)
    status: str = "ok"  # "ok" or "too-short"


@dataclass(frozen=True)
class BatteryVerdict:
    """Six results plus their conjunction."""

    results: tuple[TestResult, ...]
    overall: bool

    def __getitem__(self, name: str) -> TestResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def _bits(bits) -> np.ndarray:
    arr = as_bit_array(bits)
    if arr.size == 0:
        raise EmptySequenceError("empty bit sequence")
    return arr


def monobit(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Frequency test: p = erfc(|#ones - #zeros| / sqrt(2 n))."""
    arr = _bits(bits)
    n = arr.size
    if n < 100:
        warnings.warn(f"monobit on n={n} < 100 bits is unreliable", stacklevel=2)
    s_n = int(2 * np.count_nonzero(arr)) - n
    p = float(erfc(abs(s_n) / math.sqrt(2.0 * n)))
    return TestResult(
        name="monobit",
        p_value=p,
        passed=p >= alpha,
        statistic=float(s_n),
        params={"alpha": alpha, "n": n},
    )


def block_frequency(bits, block_size: int = 128, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Chi-square of per-block ones fractions against 1/2.

    The trailing partial block is discarded.  block_size must be >= 20;
    guidance also wants block_size above n/100, enforced as a warning.
    """
    arr = _bits(bits)
    n = arr.size
    m = int(block_size)
    if m < 20:
        raise BlockTooSmallError(f"block size {m} below minimum 20")
    n_blocks = n // m
    if n_blocks < 1:
        raise SequenceTooShortError(n, m, "block_frequency")
    if m <= 0.01 * n:
        warnings.warn(f"block size {m} <= n/100 = {0.01 * n:.0f}; consider a larger block", stacklevel=2)
    pi = arr[: n_blocks * m].reshape(n_blocks, m).mean(axis=1)
    chi2 = 4.0 * m * float(np.sum((pi - 0.5) ** 2))
    p = float(gammaincc(n_blocks / 2.0, chi2 / 2.0))
    return TestResult(
        name="block_frequency",
        p_value=p,
        passed=p >= alpha,
        statistic=chi2,
        params={"alpha": alpha, "n": n, "block_size": m, "n_blocks": n_blocks},
    )


def runs(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Total-runs test; requires the monobit prerequisite |pi - 1/2| < 2/sqrt(n).

    The statistic is built from the integer k(n - k) with k = #ones, so
    complement and reversal invariance hold bit-exactly in float.
    """
    arr = _bits(bits)
    n = int(arr.size)
    k = int(np.count_nonzero(arr))
    v_n = int(np.count_nonzero(np.diff(arr))) + 1
    params = {"alpha": alpha, "n": n, "ones_fraction": k / n}
    if abs(2 * k - n) / (2.0 * n) >= 2.0 / math.sqrt(n) or k == 0 or k == n:
        params["prerequisite_failed"] = True
        return TestResult(
            name="runs", p_value=0.0, passed=False, statistic=float(v_n), params=params
        )
    w = k * (n - k)  # n^2 * pi * (1 - pi)
    p = float(erfc(abs(v_n - 2.0 * w / n) / (2.0 * math.sqrt(2.0 * n) * w / (float(n) * n))))
    return TestResult(
        name="runs", p_value=p, passed=p >= alpha, statistic=float(v_n), params=params
    )


# longest-run-of-ones parameterization: (block size, category upper edges
# where the last is open-ended, category probabilities)
_LONGEST_RUN_TABLES = (
    (8, (1, 2, 3), (0.21484375, 0.3671875, 0.23046875, 0.1875)),
    (128, (4, 5, 6, 7, 8), (0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847)),
    (10_000, (10, 11, 12, 13, 14, 15), (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
)


def _longest_run_table(n: int):
    if n < 6272:
        return _LONGEST_RUN_TABLES[0]
    if n < 750_000:
        return _LONGEST_RUN_TABLES[1]
    return _LONGEST_RUN_TABLES[2]


def _longest_one_run_per_block(blocks: np.ndarray) -> np.ndarray:
    """Longest run of ones in each row of a 2-d 0/1 array."""
    z = np.cumsum(blocks, axis=1)
    anchor = np.where(blocks == 0, z, 0)
    floor = np.maximum.accumulate(anchor, axis=1)
    return (z - floor).max(axis=1)


def longest_run(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Distribution of the per-block longest run of ones (chi-square)."""
    arr = _bits(bits)
    n = arr.size
    if n < 128:
        raise SequenceTooShortError(n, 128, "longest_run")
    m, edges, probs = _longest_run_table(n)
    n_blocks = n // m
    blocks = arr[: n_blocks * m].reshape(n_blocks, m)
    longest = _longest_one_run_per_block(blocks)
    categories = np.searchsorted(np.asarray(edges), longest, side="left")
    nu = np.bincount(categories, minlength=len(probs))
    expected = n_blocks * np.asarray(probs)
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    k = len(probs) - 1
    p = float(gammaincc(k / 2.0, chi2 / 2.0))
    return TestResult(
        name="longest_run",
        p_value=p,
        passed=p >= alpha,
        statistic=chi2,
        params={"alpha": alpha, "n": n, "block_size": m, "n_blocks": n_blocks},
    )


def _gf2_rank(rows: list[int]) -> int:
    """Rank over the two-element field; rows are bit-packed integers."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        cur = row
        while cur:
            top = cur.bit_length() - 1
            piv = pivots.get(top)
            if piv is None:
                pivots[top] = cur
                rank += 1
                break
            cur ^= piv
    return rank


def _rank_probabilities(m: int, q: int) -> tuple[float, float, float]:
    """(full-rank, full-minus-one, remainder) for random m x q GF(2) matrices."""

    def prob(r: int) -> float:
        p = 2.0 ** (r * (m + q - r) - m * q)
        for i in range(r):
            p *= (1 - 2.0 ** (i - q)) * (1 - 2.0 ** (i - m)) / (1 - 2.0 ** (i - r))
        return p

    full = prob(min(m, q))
    one_less = prob(min(m, q) - 1)
    return full, one_less, 1.0 - full - one_less


def matrix_rank(bits, m: int = 32, q: int = 32, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """GF(2) rank distribution over disjoint m x q bit matrices.

    Categories: full rank, full rank minus one, everything lower; two
    degrees of freedom, so p = exp(-chi2 / 2).  Needs at least 38
    matrices (38 * m * q bits); leftover bits are discarded.
    """
    arr = _bits(bits)
    n = arr.size
    cell = m * q
    minimum = 38 * cell
    if n < minimum:
        raise SequenceTooShortError(n, minimum, "matrix_rank")
    n_mat = n // cell
    mats = arr[: n_mat * cell].reshape(n_mat, m, q).astype(np.int64)
    weights = 1 << np.arange(q - 1, -1, -1, dtype=np.int64)
    packed = mats @ weights  # (n_mat, m) row integers
    full_r = min(m, q)
    nu = np.zeros(3, dtype=np.int64)
    for rows in packed:
        r = _gf2_rank([int(x) for x in rows])
        if r == full_r:
            nu[0] += 1
        elif r == full_r - 1:
            nu[1] += 1
        else:
            nu[2] += 1
    probs = np.asarray(_rank_probabilities(m, q))
    expected = n_mat * probs
    chi2 = float(np.sum((nu - expected) ** 2 / expected))
    p = float(math.exp(-chi2 / 2.0))
    return TestResult(
        name="matrix_rank",
        p_value=p,
        passed=p >= alpha,
        statistic=chi2,
        params={"alpha": alpha, "n": n, "m": m, "q": q, "n_matrices": n_mat},
    )


def dft_spectral(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Spectral test with the revised threshold sqrt(n ln(1/0.05)).

    Bits map to +-1; the count of magnitude peaks below the threshold in
    the first n/2 bins is compared with the expected 95%.
    """
    arr = _bits(bits)
    n = arr.size
    if n < 1000:
        warnings.warn(f"dft_spectral on n={n} < 1000 bits is unreliable", stacklevel=2)
    x = 2.0 * arr.astype(np.float64) - 1.0
    spectrum = np.abs(np.fft.rfft(x))[: n // 2]
    threshold = math.sqrt(n * math.log(1.0 / 0.05))
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(spectrum < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    p = float(erfc(abs(d) / math.sqrt(2.0)))
    return TestResult(
        name="dft_spectral",
        p_value=p,
        passed=p >= alpha,
        statistic=float(d),
        params={
            "alpha": alpha,
            "n": n,
            "threshold": threshold,
            "expected_below": n0,
            "observed_below": n1,
            "variant": "revised",
        },
    )


def battery(bits, alpha: float = DEFAULT_ALPHA, block_size: int = 128) -> BatteryVerdict:
    """Run all six tests; overall verdict is their conjunction.

    A test whose minimum length is not met contributes a 'too-short'
    result, which counts as not passed but is flagged distinctly.
    """
    arr = _bits(bits)
    runners = (
        lambda: monobit(arr, alpha),
        lambda: block_frequency(arr, block_size, alpha),
        lambda: runs(arr, alpha),
        lambda: longest_run(arr, alpha),
        lambda: matrix_rank(arr, alpha=alpha),
        lambda: dft_spectral(arr, alpha),
    )
    results = []
    for name, run in zip(TEST_NAMES, runners):
        try:
            results.append(run())
        except (SequenceTooShortError, BlockTooSmallError) as exc:
            results.append(
                TestResult(
                    name=name,
                    p_value=None,
                    passed=False,
                    statistic=None,
                    params={"alpha": alpha, "n": int(arr.size), "reason": str(exc)},
                    status="too-short",
                )
            )
    return BatteryVerdict(results=tuple(results), overall=all(r.passed for r in results))
