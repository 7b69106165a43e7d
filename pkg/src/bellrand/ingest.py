"""Parsing and validation of station files.

A run consists of four plain-text files, two per station: ``*_V.dat`` holds
one detection time per line (seconds, strictly increasing) and ``*_C.dat``
holds one two-bit setting/detector code per line (0..3).  The two files of
a station have equal line counts.  Lines are trimmed; blank lines are
ignored; LF and CRLF both work.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from bellrand.errors import (
    CodeOutOfRangeError,
    EmptyFileError,
    LengthMismatchError,
    MalformedLineError,
    NonMonotonicTimeError,
)

CONDITIONS = ("remote-switched", "local-switched", "local-static", "uncorrelated", "synthetic")

# Condition of historical runs is encoded in their names.
_CONDITION_PREFIXES = (
    ("longdist", "remote-switched"),
    ("longtime", "remote-switched"),
    ("newlongtime", "remote-switched"),
    ("loccorr", "local-switched"),
    ("bluesin", "local-static"),
    ("sl", "local-static"),
    ("conlt", "uncorrelated"),
)


@dataclass(frozen=True)
class DetectionEvent:
    """One time-tagged single-photon detection."""

    t: float
    code: int


class StationStream:
    """Ordered detections of one station, backed by NumPy arrays."""

    __slots__ = ("station", "times", "codes")

    def __init__(self, station: str, times: np.ndarray, codes: np.ndarray):
        times = np.ascontiguousarray(times, dtype=np.float64)
        codes = np.ascontiguousarray(codes, dtype=np.uint8)
        if times.shape != codes.shape:
            raise ValueError("times and codes must have equal length")
        if times.size and np.any(np.diff(times) <= 0):
            raise ValueError("detection times must be strictly increasing")
        if codes.size and codes.max() > 3:
            raise ValueError("codes must lie in 0..3")
        self.station = station
        self.times = times
        self.codes = codes

    def __len__(self) -> int:
        return int(self.times.size)

    def __getitem__(self, i: int) -> DetectionEvent:
        return DetectionEvent(float(self.times[i]), int(self.codes[i]))

    def __iter__(self) -> Iterator[DetectionEvent]:
        for t, c in zip(self.times, self.codes):
            yield DetectionEvent(float(t), int(c))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StationStream)
            and self.station == other.station
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.codes, other.codes)
        )

    def __repr__(self) -> str:
        return f"StationStream({self.station!r}, n={len(self)})"


@dataclass
class RunBundle:
    """One run: the Alice and Bob streams plus a condition label."""

    name: str
    alice: StationStream
    bob: StationStream
    condition: str = "unknown"


def infer_condition(name: str) -> str:
    """Condition label from a historical run-name prefix, else 'unknown'."""
    low = name.lower()
    for prefix, condition in _CONDITION_PREFIXES:
        if low.startswith(prefix):
            return condition
    return "unknown"


def _split_entries(text: str) -> tuple[list[str], list[int] | None]:
    """Trimmed non-blank lines plus their 1-based numbers.

    The line-number list is materialized only when a blank line was
    skipped; otherwise entry i sits on line i + 1.
    """
    vals: list[str] = []
    line_nos: list[int] | None = None
    for i, raw in enumerate(text.splitlines()):
        s = raw.strip()
        if not s:
            if line_nos is None:
                line_nos = list(range(1, len(vals) + 1))
            continue
        vals.append(s)
        if line_nos is not None:
            line_nos.append(i + 1)
    return vals, line_nos


def _line_no(idx: int, line_nos: list[int] | None) -> int:
    return idx + 1 if line_nos is None else line_nos[idx]


def parse_time_file(text: str) -> np.ndarray:
    """Detection times (seconds) from ``*_V.dat`` content.

    Raises MalformedLineError, NonMonotonicTimeError or EmptyFileError,
    each carrying the 1-based line number of the offence.
    """
    vals, line_nos = _split_entries(text)
    if not vals:
        raise EmptyFileError("time file holds no events")
    try:
        times = np.asarray(vals, dtype=np.float64)
    except ValueError:
        _diagnose_bad_line(vals, line_nos, float)
        raise  # unreachable; _diagnose_bad_line always raises
    if not np.all(np.isfinite(times)):
        idx = int(np.flatnonzero(~np.isfinite(times))[0])
        raise MalformedLineError(_line_no(idx, line_nos), "non-finite value")
    _check_monotonic(times, line_nos)
    return times


def parse_code_file(text: str) -> np.ndarray:
    """Setting/detector codes from ``*_C.dat`` content (integers 0..3)."""
    vals, line_nos = _split_entries(text)
    if not vals:
        raise EmptyFileError("code file holds no events")
    try:
        codes = np.asarray(vals, dtype=np.int64)
    except (ValueError, OverflowError):
        _diagnose_bad_line(vals, line_nos, int)
        raise
    bad = np.flatnonzero((codes < 0) | (codes > 3))
    if bad.size:
        idx = int(bad[0])
        raise CodeOutOfRangeError(_line_no(idx, line_nos), int(codes[idx]))
    return codes.astype(np.uint8)


def _diagnose_bad_line(vals: list[str], line_nos: list[int] | None, convert) -> None:
    """Locate the offending line after a failed bulk conversion."""
    for idx, s in enumerate(vals):
        if len(s.split()) != 1:
            raise MalformedLineError(_line_no(idx, line_nos), "expected one value per line")
        try:
            convert(s)
        except (ValueError, OverflowError):
            raise MalformedLineError(_line_no(idx, line_nos), repr(s)) from None
    # bulk conversion failed but every line converts individually
    raise MalformedLineError(_line_no(0, line_nos), "unparsable file content")


def _check_monotonic(times: np.ndarray, line_nos: list[int] | None) -> None:
    if times.size < 2:
        return
    diffs = np.diff(times)
    if np.all(diffs > 0):
        return
    idx = int(np.flatnonzero(diffs <= 0)[0]) + 1
    raise NonMonotonicTimeError(_line_no(idx, line_nos))


def station_from_texts(v_text: str, c_text: str, station: str) -> StationStream:
    """Zip parsed time and code file contents into one stream."""
    times = parse_time_file(v_text)
    codes = parse_code_file(c_text)
    if times.size != codes.size:
        raise LengthMismatchError(int(times.size), int(codes.size))
    return StationStream(station, times, codes)


def load_station(v_path: str | Path, c_path: str | Path, station: str) -> StationStream:
    """Read and zip one station's ``*_V.dat`` and ``*_C.dat`` files."""
    v_text = Path(v_path).read_text()
    c_text = Path(c_path).read_text()
    return station_from_texts(v_text, c_text, station)


def run_file_paths(directory: str | Path, name: str) -> dict[str, Path]:
    """The four canonical file paths of a run."""
    d = Path(directory)
    return {
        "alice_v": d / f"{name}_alice_V.dat",
        "alice_c": d / f"{name}_alice_C.dat",
        "bob_v": d / f"{name}_bob_V.dat",
        "bob_c": d / f"{name}_bob_C.dat",
    }


def load_run(directory: str | Path, name: str, condition: str | None = None) -> RunBundle:
    """Load the four files ``<name>_{alice,bob}_{V,C}.dat`` from a directory."""
    paths = run_file_paths(directory, name)
    alice = load_station(paths["alice_v"], paths["alice_c"], "alice")
    bob = load_station(paths["bob_v"], paths["bob_c"], "bob")
    return RunBundle(
        name=name,
        alice=alice,
        bob=bob,
        condition=condition if condition is not None else infer_condition(name),
    )


def format_times(times: np.ndarray) -> str:
    """Serialize times, 17 significant digits in scientific notation."""
    return "".join("%.16e\n" % t for t in np.asarray(times, dtype=np.float64))


def format_codes(codes: np.ndarray) -> str:
    """Serialize codes, one integer per line."""
    return "".join("%d\n" % c for c in np.asarray(codes))
