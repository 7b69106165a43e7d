"""Kernel internals against brute-force oracles, and backend parity."""

import subprocess
import sys

import numpy as np
import pytest

from bellrand import _kernels_py

try:
    from bellrand import _kernels
except ImportError:
    _kernels = None


def brute_suffix_array(s: bytes) -> list[int]:
    return sorted(range(len(s)), key=lambda i: s[i:])


def brute_lpf(s: bytes) -> list[int]:
    """lpf[p] = longest m with s[p:p+m] occurring at some start j < p."""
    n = len(s)
    out = [0] * n
    for p in range(n):
        best = 0
        for j in range(p):
            m = 0
            while p + m < n and s[j + m] == s[p + m]:
                m += 1
            best = max(best, m)
        out[p] = best
    return out


def cases(rng, count=60, max_n=160):
    yield np.array([0], dtype=np.uint8)
    yield np.array([1, 1], dtype=np.uint8)
    yield np.zeros(40, dtype=np.uint8)
    yield np.tile(np.array([0, 1], dtype=np.uint8), 30)
    yield np.tile(np.array([0, 0, 1], dtype=np.uint8), 25)
    for _ in range(count):
        n = int(rng.integers(1, max_n))
        yield (rng.random(n) < rng.uniform(0.1, 0.9)).astype(np.uint8)


class TestPureInternals:
    def test_suffix_array_matches_brute_force(self, rng):
        for bits in cases(rng):
            sa = _kernels_py._suffix_array(bits)
            assert sa.tolist() == brute_suffix_array(bits.tobytes())

    def test_lpf_matches_brute_force(self, rng):
        for bits in cases(rng):
            sym = bits.tolist()
            sa = _kernels_py._suffix_array(bits).tolist()
            lcp = _kernels_py._lcp_kasai(sym, sa)
            lpf = _kernels_py._lpf(sa, lcp, len(sym))
            assert lpf == brute_lpf(bits.tobytes())

    def test_lcp_matches_brute_force(self, rng):
        for bits in cases(rng, count=30):
            s = bits.tobytes()
            sa = _kernels_py._suffix_array(bits).tolist()
            lcp = _kernels_py._lcp_kasai(bits.tolist(), sa)
            for r in range(1, len(s)):
                a, b = s[sa[r - 1] :], s[sa[r] :]
                expected = next(
                    (i for i, (x, y) in enumerate(zip(a, b)) if x != y), min(len(a), len(b))
                )
                assert lcp[r] == expected


@pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
class TestCompiledParity:
    def test_parse_positions_agree(self, rng):
        for bits in cases(rng, count=120, max_n=3000):
            assert np.array_equal(
                _kernels.lz76_parse_positions(bits), _kernels_py.lz76_parse_positions(bits)
            )

    def test_parse_positions_agree_on_larger_alphabet(self, rng):
        # the kernels accept any byte values, not just bits
        for _ in range(25):
            n = int(rng.integers(2, 2000))
            sym = rng.integers(0, int(rng.choice([3, 4, 17, 256])), n).astype(np.uint8)
            assert np.array_equal(
                _kernels.lz76_parse_positions(sym), _kernels_py.lz76_parse_positions(sym)
            )

    def test_match_agrees(self, rng):
        for _ in range(40):
            na, nb = int(rng.integers(0, 400)), int(rng.integers(0, 400))
            a = np.sort(rng.uniform(0, 1.0, na))
            b = np.sort(rng.uniform(0, 1.0, nb))
            t_w = float(rng.uniform(1e-4, 5e-2))
            delay = float(rng.uniform(-0.1, 0.1))
            ca = _kernels.match_indices(a, b, t_w, delay)
            cp = _kernels_py.match_indices(a, b, t_w, delay)
            assert np.array_equal(ca[0], cp[0]) and np.array_equal(ca[1], cp[1])
            assert _kernels.match_count(a, b, t_w, delay) == _kernels_py.match_count(
                a, b, t_w, delay
            )

    def test_empty_input_rejected_identically(self):
        empty = np.array([], dtype=np.uint8)
        with pytest.raises(ValueError):
            _kernels.lz76_parse_positions(empty)
        with pytest.raises(ValueError):
            _kernels_py.lz76_parse_positions(empty)


class TestBackendSelection:
    def test_pure_env_var_forces_fallback(self):
        out = subprocess.run(
            [sys.executable, "-c", "import bellrand; print(bellrand.BACKEND)"],
            env={"BELLRAND_PURE": "1", "PATH": "/usr/bin:/bin:/usr/local/bin"},
            capture_output=True,
            text=True,
            check=True,
        )
        assert out.stdout.strip() == "pure"
