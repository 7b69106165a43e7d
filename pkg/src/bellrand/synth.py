"""Synthetic two-station runs and reference bit sequences.

The generator emits polarization-entangled pair statistics with the
correlation model E(a, b) = visibility * cos 2(a - b), per-station
detection efficiency, Gaussian time jitter, and a linear error on Bob's
clock (recorded time = t * (1 + drift_rate) + drift_offset).  Runs are
written in the station-file format that ``bellrand.ingest`` reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from bellrand.chsh import DEFAULT_CODE_MAP, CodeMap
from bellrand.encode import BinarySequence
from bellrand.errors import BadParametersError, EmptySequenceError, InvalidConfigError
from bellrand.ingest import RunBundle, StationStream, format_codes, format_times

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of one synthetic run; deterministic for a fixed seed."""

    pair_rate: float  # entangled pairs per second
    duration: float  # seconds
    visibility: float = 1.0
    angles_a: tuple[float, float] = (0.0, 45.0)  # degrees
    angles_b: tuple[float, float] = (22.5, 67.5)
    efficiency: float = 1.0  # per-station detection probability
    jitter_sigma: float = 0.0  # seconds
    drift_rate: float = 0.0  # Bob clock scale error
    drift_offset: float = 0.0  # seconds added to Bob's clock
    background_rate: float = 0.0  # uncorrelated singles per second, per station
    seed: int = 0
    name: str = "synthetic"

    def __post_init__(self):
        if self.pair_rate <= 0 or self.duration <= 0:
            raise InvalidConfigError("pair_rate and duration must be positive")
        if not 0.0 <= self.visibility <= 1.0:
            raise InvalidConfigError("visibility must lie in [0, 1]")
        if not 0.0 < self.efficiency <= 1.0:
            raise InvalidConfigError("efficiency must lie in (0, 1]")
        if self.jitter_sigma < 0 or self.background_rate < 0:
            raise InvalidConfigError("jitter_sigma and background_rate must be non-negative")


def _strictly_increasing(times: np.ndarray) -> np.ndarray:
    """Bump duplicate float timestamps by one ulp so ordering is strict."""
    if times.size < 2 or np.all(np.diff(times) > 0):
        return times
    out = times.copy()
    for i in range(1, out.size):
        if out[i] <= out[i - 1]:
            out[i] = np.nextafter(out[i - 1], np.inf)
    return out


def gen_bell_run(config: SynthConfig, code_map: CodeMap = DEFAULT_CODE_MAP) -> RunBundle:
    """Generate one run: Poisson pair times, fair settings, correlated outcomes.

    Per pair, each station draws a fair setting bit; Alice's outcome is a
    fair coin and Bob's matches hers with probability (1 + E)/2 where
    E = visibility * cos 2(angle_a - angle_b).  Station losses, jitter,
    background singles and Bob's clock transform are applied afterwards.
    """
    rng = np.random.default_rng(config.seed)
    n_pairs = int(rng.poisson(config.pair_rate * config.duration))
    t_pair = np.sort(rng.uniform(0.0, config.duration, n_pairs))

    a_set = rng.integers(0, 2, n_pairs)
    b_set = rng.integers(0, 2, n_pairs)
    a_out = rng.integers(0, 2, n_pairs)  # outcome bit: 0 -> +1, 1 -> -1

    angles_a = np.deg2rad(np.asarray(config.angles_a))
    angles_b = np.deg2rad(np.asarray(config.angles_b))
    corr = config.visibility * np.cos(2.0 * (angles_a[:, None] - angles_b[None, :]))
    p_same = (1.0 + corr[a_set, b_set]) / 2.0
    same = rng.random(n_pairs) < p_same
    b_out = np.where(same, a_out, 1 - a_out)

    keep_a = rng.random(n_pairs) < config.efficiency
    keep_b = rng.random(n_pairs) < config.efficiency
    jit_a = rng.normal(0.0, config.jitter_sigma, n_pairs) if config.jitter_sigma else 0.0
    jit_b = rng.normal(0.0, config.jitter_sigma, n_pairs) if config.jitter_sigma else 0.0

    t_a = (t_pair + jit_a)[keep_a]
    t_b_true = (t_pair + jit_b)[keep_b]

    code_a = _assemble_codes(a_set[keep_a], a_out[keep_a], code_map)
    code_b = _assemble_codes(b_set[keep_b], b_out[keep_b], code_map)

    if config.background_rate > 0:
        t_a, code_a = _add_background(rng, t_a, code_a, config, code_map)
        t_b_true, code_b = _add_background(rng, t_b_true, code_b, config, code_map)

    t_b = t_b_true * (1.0 + config.drift_rate) + config.drift_offset

    order_a = np.argsort(t_a, kind="stable")
    order_b = np.argsort(t_b, kind="stable")
    alice = StationStream(
        "alice", _strictly_increasing(t_a[order_a]), code_a[order_a]
    )
    bob = StationStream("bob", _strictly_increasing(t_b[order_b]), code_b[order_b])
    return RunBundle(name=config.name, alice=alice, bob=bob, condition="synthetic")


def _assemble_codes(setting: np.ndarray, out_bit: np.ndarray, code_map: CodeMap) -> np.ndarray:
    return ((setting << code_map.setting_bit) | (out_bit << code_map.outcome_bit)).astype(np.uint8)


def _add_background(rng, times, codes, config: SynthConfig, code_map: CodeMap):
    n_bg = int(rng.poisson(config.background_rate * config.duration))
    t_bg = rng.uniform(0.0, config.duration, n_bg)
    c_bg = _assemble_codes(rng.integers(0, 2, n_bg), rng.integers(0, 2, n_bg), code_map)
    return np.concatenate([times, t_bg]), np.concatenate([codes, c_bg])


@dataclass(frozen=True)
class ReferenceKind:
    """Recipe for a calibration bit sequence."""

    kind: str
    pattern: str | None = None
    f1: float | None = None
    f2: float | None = None
    threshold: float | None = None
    r: float | None = None
    x0: float | None = None
    seed: int | None = None

    @classmethod
    def periodic(cls, pattern: str = "01") -> "ReferenceKind":
        return cls(kind="periodic", pattern=pattern)

    @classmethod
    def quasiperiodic(
        cls,
        f1: float = 0.03,
        f2: float = 0.03 / GOLDEN_RATIO,
        threshold: float = 0.0,
    ) -> "ReferenceKind":
        return cls(kind="quasiperiodic", f1=f1, f2=f2, threshold=threshold)

    @classmethod
    def logistic(cls, r: float = 4.0, x0: float = 0.4, threshold: float = 0.5) -> "ReferenceKind":
        return cls(kind="logistic", r=r, x0=x0, threshold=threshold)

    @classmethod
    def prng(cls, seed: int = 0) -> "ReferenceKind":
        return cls(kind="prng", seed=seed)


def gen_reference(kind: ReferenceKind, n: int) -> BinarySequence:
    """Generate n reference bits of the requested regime."""
    if n < 2:
        raise BadParametersError("need n >= 2")
    if kind.kind == "periodic":
        if not kind.pattern or set(kind.pattern) - {"0", "1"}:
            raise BadParametersError("periodic pattern must be a non-empty 0/1 string")
        unit = np.frombuffer(kind.pattern.encode("ascii"), dtype=np.uint8) - ord("0")
        reps = -(-n // unit.size)
        bits = np.tile(unit, reps)[:n]
        return BinarySequence(bits=bits, encoding=f"periodic[{kind.pattern}]")
    if kind.kind == "quasiperiodic":
        if not (0 < kind.f1 < 0.5 and 0 < kind.f2 < 0.5):
            raise BadParametersError("tone frequencies must lie in (0, 0.5)")
        i = np.arange(n)
        x = np.sin(2 * np.pi * kind.f1 * i) + np.sin(2 * np.pi * kind.f2 * i)
        bits = (x > kind.threshold).astype(np.uint8)
        return BinarySequence(bits=bits, encoding=f"quasiperiodic[{kind.f1:g},{kind.f2:g}]")
    if kind.kind == "logistic":
        if not (0 < kind.r <= 4.0) or not (0 < kind.x0 < 1):
            raise BadParametersError("need 0 < r <= 4 and 0 < x0 < 1")
        bits = np.empty(n, dtype=np.uint8)
        x = kind.x0
        for j in range(n):
            x = kind.r * x * (1.0 - x)
            bits[j] = x > kind.threshold
        return BinarySequence(bits=bits, encoding=f"logistic[r={kind.r:g}]")
    if kind.kind == "prng":
        rng = np.random.default_rng(kind.seed)
        bits = rng.integers(0, 2, n, dtype=np.uint8)
        return BinarySequence(bits=bits, encoding=f"prng[seed={kind.seed}]")
    raise BadParametersError(f"unknown reference kind {kind.kind!r}")


def write_run(bundle: RunBundle, directory: str | Path) -> list[Path]:
    """Write the four station files; times carry 17 significant digits."""
    if len(bundle.alice) == 0 or len(bundle.bob) == 0:
        raise EmptySequenceError("refusing to write a run with an empty station")
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for station in (bundle.alice, bundle.bob):
        v_path = d / f"{bundle.name}_{station.station}_V.dat"
        c_path = d / f"{bundle.name}_{station.station}_C.dat"
        v_path.write_text(format_times(station.times))
        c_path.write_text(format_codes(station.codes))
        paths.extend([v_path, c_path])
    return paths


# Fixed-seed demonstration of the clock-drift artifact.  With drift on,
# the effective inter-station delay sweeps across the coincidence window
# early in the run; afterwards only accidental coincidences remain, at a
# rate ~100x below the true-pair rate, and they supply about half of the
# events.  The median-threshold encoding of the inter-arrival gaps then
# degenerates into two long near-homogeneous stretches (short gaps early,
# long gaps late) and the normalized complexity collapses.  With drift off
# (all else equal) the gaps are exchangeable and the same encoding scores
# near 1.
DRIFT_DEMO_CONFIG = SynthConfig(
    pair_rate=2000.0,
    duration=240.0,
    visibility=1.0,
    efficiency=0.9,
    jitter_sigma=0.3e-6,
    drift_rate=1.55e-6,
    drift_offset=0.0,
    seed=20180518,
    name="drift-demo",
)
DRIFT_DEMO_T_W = 2.5e-6
DRIFT_DEMO_DELAY = 0.0


def drift_demo_config(drift: bool) -> SynthConfig:
    """The shipped drift-artifact configuration, with drift on or off."""
    if drift:
        return DRIFT_DEMO_CONFIG
    return replace(DRIFT_DEMO_CONFIG, drift_rate=0.0, drift_offset=0.0)
