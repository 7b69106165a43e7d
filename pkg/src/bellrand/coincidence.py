"""Delay search, coincidence matching, and per-setting subsets.

A coincidence is an Alice/Bob pair whose delay-corrected detection times
differ by at most the window half-width t_w.  The delay is ADDED to Bob's
times before comparison; when it is unknown, ``scan_delay`` recovers it by
maximizing the coincidence count over a grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from bellrand import _backend
from bellrand.errors import EmptyScanGridError
from bellrand.ingest import StationStream

TIME_REFS = ("alice", "bob", "midpoint")


@dataclass(frozen=True)
class CoincidenceConfig:
    """Matching parameters; scan fields may stay None for fixed-delay use."""

    t_w: float
    delay: float = 0.0
    scan_range: tuple[float, float] | None = None
    scan_step: float | None = None
    time_ref: str = "alice"

    def __post_init__(self):
        if self.t_w <= 0:
            raise ValueError("window half-width t_w must be positive")
        if self.scan_step is not None and self.scan_step <= 0:
            raise ValueError("scan_step must be positive")
        if self.scan_range is not None and not self.scan_range[0] < self.scan_range[1]:
            raise ValueError("scan_range must satisfy min < max")
        if self.time_ref not in TIME_REFS:
            raise ValueError(f"time_ref must be one of {TIME_REFS}")


@dataclass(frozen=True)
class CoincidenceEvent:
    """A matched pair: representative time plus both station codes."""

    t: float
    code_a: int
    code_b: int


class CoincidenceSequence:
    """Ordered coincidences, backed by NumPy arrays."""

    __slots__ = ("times", "code_a", "code_b", "config")

    def __init__(
        self,
        times: np.ndarray,
        code_a: np.ndarray,
        code_b: np.ndarray,
        config: CoincidenceConfig,
    ):
        self.times = np.ascontiguousarray(times, dtype=np.float64)
        self.code_a = np.ascontiguousarray(code_a, dtype=np.uint8)
        self.code_b = np.ascontiguousarray(code_b, dtype=np.uint8)
        if not (self.times.size == self.code_a.size == self.code_b.size):
            raise ValueError("times and codes must have equal length")
        if self.times.size and np.any(np.diff(self.times) <= 0):
            raise ValueError("coincidence times must be strictly increasing")
        self.config = config

    @property
    def n(self) -> int:
        return int(self.times.size)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> CoincidenceEvent:
        return CoincidenceEvent(float(self.times[i]), int(self.code_a[i]), int(self.code_b[i]))

    def __iter__(self) -> Iterator[CoincidenceEvent]:
        for t, a, b in zip(self.times, self.code_a, self.code_b):
            yield CoincidenceEvent(float(t), int(a), int(b))

    def __repr__(self) -> str:
        return f"CoincidenceSequence(n={self.n}, t_w={self.config.t_w}, delay={self.config.delay})"


@dataclass
class DelayScanResult:
    """Count-vs-delay curve and its argmax."""

    delays: np.ndarray
    counts: np.ndarray
    best_delay: float
    best_count: int

    @property
    def curve(self) -> list[tuple[float, int]]:
        return [(float(d), int(c)) for d, c in zip(self.delays, self.counts)]


def match(
    alice: StationStream,
    bob: StationStream,
    t_w: float,
    delay: float = 0.0,
    time_ref: str = "alice",
) -> CoincidenceSequence:
    """Pair events greedily within the window |t_a - (t_b + delay)| <= t_w.

    Two-pointer rule over the sorted streams: accept and advance both on a
    hit, otherwise advance the stream at the smaller shifted time.  Each
    event joins at most one coincidence.  Output ordered by Alice time.
    """
    config = CoincidenceConfig(t_w=t_w, delay=delay, time_ref=time_ref)
    ia, ib = _backend.match_indices(alice.times, bob.times, t_w, delay)
    t_a = alice.times[ia]
    if time_ref == "alice":
        times = t_a
    elif time_ref == "bob":
        times = bob.times[ib] + delay
    else:
        times = 0.5 * (t_a + bob.times[ib] + delay)
    return CoincidenceSequence(
        times=times,
        code_a=alice.codes[ia],
        code_b=bob.codes[ib],
        config=config,
    )


def match_count(alice: StationStream, bob: StationStream, t_w: float, delay: float = 0.0) -> int:
    """Coincidence count under the same greedy rule, without materializing."""
    return int(_backend.match_count(alice.times, bob.times, t_w, delay))


def scan_grid(scan_range: tuple[float, float], scan_step: float) -> np.ndarray:
    """Inclusive delay grid from min to max in steps of scan_step.

    When the range start is an integer multiple of the step, grid points
    are generated as step * k so that zero (and other exact multiples)
    land on the grid without accumulated rounding.
    """
    lo, hi = scan_range
    if scan_step <= 0 or hi < lo:
        raise EmptyScanGridError(f"range {scan_range} with step {scan_step} has no points")
    n_steps = int(np.floor((hi - lo) / scan_step * (1 + 1e-12) + 1e-9)) + 1
    k0 = np.round(lo / scan_step)
    if abs(k0 * scan_step - lo) <= 1e-9 * scan_step:
        return scan_step * (k0 + np.arange(n_steps))
    return lo + scan_step * np.arange(n_steps)


def scan_delay(
    alice: StationStream,
    bob: StationStream,
    t_w: float,
    scan_range: tuple[float, float],
    scan_step: float,
) -> DelayScanResult:
    """Evaluate the match count on a delay grid and return the argmax.

    Ties break toward the delay of smallest absolute value, then toward
    the smallest value.
    """
    delays = scan_grid(scan_range, scan_step)
    counts = np.empty(delays.size, dtype=np.int64)
    for i, d in enumerate(delays):
        counts[i] = _backend.match_count(alice.times, bob.times, t_w, float(d))
    best_count = int(counts.max())
    candidates = delays[counts == best_count]
    order = np.lexsort((candidates, np.abs(candidates)))
    best_delay = float(candidates[order[0]])
    return DelayScanResult(
        delays=delays, counts=counts, best_delay=best_delay, best_count=best_count
    )


def subset(seq: CoincidenceSequence, code_a: int, code_b: int) -> CoincidenceSequence:
    """Coincidences whose codes equal (code_a, code_b), order preserved."""
    if not (0 <= code_a <= 3 and 0 <= code_b <= 3):
        raise ValueError("codes must lie in 0..3")
    mask = (seq.code_a == code_a) & (seq.code_b == code_b)
    return CoincidenceSequence(
        times=seq.times[mask],
        code_a=seq.code_a[mask],
        code_b=seq.code_b[mask],
        config=seq.config,
    )
