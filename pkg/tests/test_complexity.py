"""Word-count parser: hand parses, oracle equivalence, invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellrand import complexity
from bellrand.errors import BadCheckpointError, EmptySequenceError, LengthTooShortError


def bits_of(s: str) -> np.ndarray:
    return complexity.as_bit_array(s)


class TestHandParses:
    def test_alternation_parses_into_three_words(self):
        # 0 | 1 | 01010101
        assert complexity.lz76_count("0101010101") == 3

    def test_all_zeros_parses_into_two_words(self):
        # 0 | 0000000
        assert complexity.lz76_count("00000000") == 2

    def test_single_symbol(self):
        assert complexity.lz76_count("0") == 1
        assert complexity.lz76_count("1") == 1

    def test_reference_agrees_on_hand_cases(self):
        for s in ("0101010101", "00000000", "0", "1", "01", "10", "0010", "001"):
            assert complexity.lz76_count_reference(s) == complexity.lz76_count(s)

    def test_empty_rejected(self):
        with pytest.raises(EmptySequenceError):
            complexity.lz76_count("")
        with pytest.raises(EmptySequenceError):
            complexity.lz76_count_reference("")


class TestNormalizedK:
    def test_arithmetic(self):
        k = complexity.normalized_k(3, 10)
        assert abs(k - 3 * math.log2(10) / 10) < 1e-15
        assert abs(k - 0.9966) < 5e-4

    def test_n_two(self):
        assert complexity.normalized_k(2, 2) == 1.0

    def test_too_short(self):
        with pytest.raises(LengthTooShortError):
            complexity.normalized_k(1, 1)


class TestOracleEquivalence:
    @given(st.binary(min_size=1, max_size=96))
    @settings(max_examples=300, deadline=None)
    def test_matches_reference_on_random_bytes(self, raw):
        bits = np.frombuffer(raw, dtype=np.uint8) % 2
        assert complexity.lz76_count(bits) == complexity.lz76_count_reference(bits)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_reference_on_longer_strings(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(20):
            n = int(rng.integers(1, 513))
            p = rng.uniform(0.05, 0.95)
            bits = (rng.random(n) < p).astype(np.uint8)
            assert complexity.lz76_count(bits) == complexity.lz76_count_reference(bits)

    def test_matches_reference_on_structured_strings(self):
        cases = [
            "0" * 300,
            "1" * 300,
            "01" * 200,
            "0011" * 80,
            "0" * 100 + "1" * 100,
            "0001011100101001111010110" * 12,
        ]
        for s in cases:
            assert complexity.lz76_count(s) == complexity.lz76_count_reference(s)


class TestInvariants:
    @pytest.mark.parametrize("seed", range(6))
    def test_prefix_counts_non_decreasing(self, seed):
        rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, 400, dtype=np.uint8)
        counts = [complexity.lz76_count(bits[:m]) for m in range(1, 401)]
        assert all(c2 >= c1 for c1, c2 in zip(counts, counts[1:]))
        assert counts[-1] <= 400

    @given(st.binary(min_size=1, max_size=64))
    @settings(max_examples=150, deadline=None)
    def test_doubling_adds_at_most_one_word(self, raw):
        bits = np.frombuffer(raw, dtype=np.uint8) % 2
        doubled = np.concatenate([bits, bits])
        assert complexity.lz76_count(doubled) <= complexity.lz76_count(bits) + 1

    @given(st.binary(min_size=1, max_size=128))
    @settings(max_examples=150, deadline=None)
    def test_complement_invariance(self, raw):
        bits = np.frombuffer(raw, dtype=np.uint8) % 2
        assert complexity.lz76_count(bits) == complexity.lz76_count(1 - bits)

    def test_count_bounded_by_length(self):
        rng = np.random.default_rng(7)
        for n in (1, 2, 3, 10, 100):
            bits = rng.integers(0, 2, n, dtype=np.uint8)
            assert 1 <= complexity.lz76_count(bits) <= n


class TestRegimes:
    def test_periodic_low_k(self):
        bits = np.tile(np.array([0, 1], dtype=np.uint8), 5000)
        res = complexity.analyze(bits)
        assert res.k < 0.1

    def test_prng_k_near_one(self):
        bits = np.random.default_rng(42).integers(0, 2, 100_000, dtype=np.uint8)
        res = complexity.analyze(bits)
        assert 0.9 <= res.k <= 1.2

    def test_short_random_k_above_one(self):
        # at n = 2 any two-word string already reaches k = 1
        assert complexity.normalized_k(2, 2) == 1.0
        bits = np.random.default_rng(3).integers(0, 2, 32, dtype=np.uint8)
        assert complexity.analyze(bits).k > 1.0


class TestProfile:
    def test_single_checkpoint_matches_direct(self):
        rng = np.random.default_rng(11)
        bits = rng.integers(0, 2, 5000, dtype=np.uint8)
        (m, c, k), = complexity.complexity_profile(bits, [5000])
        direct = complexity.analyze(bits)
        assert (m, c) == (5000, direct.c)
        assert k == direct.k

    def test_periodic_k_strictly_decreasing(self):
        bits = np.tile(np.array([0, 1, 1], dtype=np.uint8), 4000)
        prof = complexity.complexity_profile(bits, [100, 1000, 10_000])
        ks = [k for _, _, k in prof]
        assert ks[0] > ks[1] > ks[2]

    def test_profile_counts_match_prefix_counts(self):
        rng = np.random.default_rng(5)
        bits = rng.integers(0, 2, 700, dtype=np.uint8)
        checkpoints = [2, 10, 100, 350, 700]
        prof = complexity.complexity_profile(bits, checkpoints)
        for m, c, k in prof:
            assert c == complexity.lz76_count(bits[:m])
            assert k == complexity.normalized_k(c, m)

    def test_prng_profile_stays_near_one(self):
        bits = np.random.default_rng(23).integers(0, 2, 100_000, dtype=np.uint8)
        prof = complexity.complexity_profile(bits, [1000, 10_000, 100_000])
        for _, _, k in prof:
            assert 0.9 <= k <= 1.2

    def test_bad_checkpoints(self):
        bits = np.zeros(50, dtype=np.uint8)
        with pytest.raises(BadCheckpointError):
            complexity.complexity_profile(bits, [10, 10])
        with pytest.raises(BadCheckpointError):
            complexity.complexity_profile(bits, [60])
        with pytest.raises(BadCheckpointError):
            complexity.complexity_profile(bits, [])


class TestBackendParity:
    def test_pure_backend_matches_active(self):
        from bellrand import _kernels_py

        rng = np.random.default_rng(1234)
        for _ in range(40):
            n = int(rng.integers(1, 800))
            bits = rng.integers(0, 2, n, dtype=np.uint8)
            pure = _kernels_py.lz76_parse_positions(bits)
            active = complexity.lz76_parse_positions(bits)
            assert np.array_equal(pure, active)
