"""Tallying, correlations, CHSH sign placements, labeling invariances."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellrand import chsh
from bellrand.coincidence import CoincidenceConfig, CoincidenceSequence
from bellrand.errors import EmptySequenceError, NoDataForPairError

CONFIG = CoincidenceConfig(t_w=1e-6)


def seq_from_codes(code_a, code_b):
    n = len(code_a)
    return CoincidenceSequence(
        times=np.arange(1, n + 1, dtype=np.float64),
        code_a=np.asarray(code_a, dtype=np.uint8),
        code_b=np.asarray(code_b, dtype=np.uint8),
        config=CONFIG,
    )


def counts_from_cells(cells: dict) -> chsh.JointCounts:
    n = np.zeros((2, 2, 2, 2), dtype=np.int64)
    for key, v in cells.items():
        n[key] = v
    return chsh.JointCounts(n=n)


class TestTally:
    def test_single_coincidence_decodes_into_one_cell(self):
        # codes (0, 3) with setting in bit 1, outcome in bit 0:
        # a: setting 0, outcome +1; b: setting 1, outcome -1
        counts = chsh.tally(seq_from_codes([0], [3]), chsh.CodeMap(setting_bit=1, outcome_bit=0))
        assert counts.n[0, 1, 0, 1] == 1
        assert counts.total == 1

    def test_all_sixteen_pairs_once(self):
        pairs = [(a, b) for a in range(4) for b in range(4)]
        counts = chsh.tally(seq_from_codes([p[0] for p in pairs], [p[1] for p in pairs]))
        assert counts.total == 16
        assert np.all(counts.n == 1)

    def test_empty_sequence_rejected(self):
        empty = CoincidenceSequence(np.array([]), np.array([]), np.array([]), CONFIG)
        with pytest.raises(EmptySequenceError):
            chsh.tally(empty)

    def test_swapped_code_map(self):
        # with setting in bit 0: code 1 means setting 1, outcome bit (bit 1) 0
        counts = chsh.tally(seq_from_codes([1], [2]), chsh.CodeMap(setting_bit=0, outcome_bit=1))
        assert counts.n[1, 0, 0, 1] == 1

    def test_code_map_validation(self):
        with pytest.raises(ValueError):
            chsh.CodeMap(setting_bit=1, outcome_bit=1)

    def test_synthetic_frequencies_match_generator(self):
        from bellrand import coincidence, synth

        cfg = synth.SynthConfig(pair_rate=50_000.0, duration=1.0, visibility=0.7, seed=21, name="t")
        run = synth.gen_bell_run(cfg)
        seq = coincidence.match(run.alice, run.bob, 1e-9, 0.0)
        counts = chsh.tally(seq)
        angles_a = np.deg2rad(np.asarray(cfg.angles_a))
        angles_b = np.deg2rad(np.asarray(cfg.angles_b))
        for a in (0, 1):
            for b in (0, 1):
                n_ab = counts.pair_total(a, b)
                e_target = 0.7 * np.cos(2 * (angles_a[a] - angles_b[b]))
                p_same = (1 + e_target) / 2
                observed_same = (counts.n[a, b, 0, 0] + counts.n[a, b, 1, 1]) / n_ab
                sigma = np.sqrt(p_same * (1 - p_same) / n_ab)
                assert abs(observed_same - p_same) < 5 * sigma


class TestCorrelation:
    def test_perfect_correlation(self):
        counts = counts_from_cells({(0, 0, 0, 0): 50, (0, 0, 1, 1): 50})
        assert chsh.correlation(counts, 0, 0) == 1.0

    def test_independence(self):
        counts = counts_from_cells({(1, 0, i, j): 25 for i in (0, 1) for j in (0, 1)})
        assert chsh.correlation(counts, 1, 0) == 0.0

    def test_arithmetic(self):
        counts = counts_from_cells(
            {(0, 1, 0, 0): 85, (0, 1, 1, 1): 85, (0, 1, 0, 1): 15, (0, 1, 1, 0): 15}
        )
        assert chsh.correlation(counts, 0, 1) == pytest.approx(0.7)

    def test_no_data(self):
        counts = counts_from_cells({(0, 0, 0, 0): 1})
        with pytest.raises(NoDataForPairError):
            chsh.correlation(counts, 1, 1)


def counts_with_e(e_matrix, per_pair=1000):
    cells = {}
    for a in (0, 1):
        for b in (0, 1):
            same = int(round(per_pair * (1 + e_matrix[a][b]) / 2))
            diff = per_pair - same
            cells[(a, b, 0, 0)] = same // 2
            cells[(a, b, 1, 1)] = same - same // 2
            cells[(a, b, 0, 1)] = diff // 2
            cells[(a, b, 1, 0)] = diff - diff // 2
    return counts_from_cells(cells)


class TestChsh:
    def test_quantum_maximum_fixed_signs(self):
        r = 0.707
        counts = counts_with_e([[r, -r], [r, r]], per_pair=2_000_000)
        result = chsh.chsh(counts, "fixed")
        assert result.s == pytest.approx(2.828, abs=2e-3)
        assert result.sign_combination == "minus-01"

    def test_zero_correlations(self):
        counts = counts_with_e([[0.0, 0.0], [0.0, 0.0]])
        assert chsh.chsh(counts, "fixed").s == 0.0
        assert abs(chsh.chsh(counts, "auto").s) == 0.0

    def test_auto_finds_scrambled_placement(self):
        r = 0.6
        # minus naturally belongs on the (1, 0) term here
        counts = counts_with_e([[r, r], [-r, r]])
        result = chsh.chsh(counts, "auto")
        assert result.sign_combination == "minus-10"
        assert result.s == pytest.approx(4 * r, abs=1e-2)
        fixed = chsh.chsh(counts, "fixed")
        assert abs(fixed.s) < abs(result.s)

    def test_missing_pair(self):
        counts = counts_from_cells({(0, 0, 0, 0): 10, (0, 1, 0, 0): 10, (1, 0, 0, 0): 10})
        with pytest.raises(NoDataForPairError):
            chsh.chsh(counts)


@st.composite
def random_counts(draw):
    cells = draw(
        st.lists(st.integers(0, 200), min_size=16, max_size=16).filter(
            lambda c: all(
                sum(c[(a * 2 + b) * 4 : (a * 2 + b) * 4 + 4]) > 0 for a in (0, 1) for b in (0, 1)
            )
        )
    )
    return np.asarray(cells, dtype=np.int64).reshape(2, 2, 2, 2)


class TestInvariances:
    @given(random_counts())
    @settings(max_examples=120, deadline=None)
    def test_outcome_relabeling_preserves_auto_s(self, cells):
        counts = chsh.JointCounts(n=cells)
        flipped = chsh.JointCounts(n=cells[:, :, ::-1, :])  # swap +1/-1 at Alice
        base = chsh.chsh(counts, "auto")
        flip = chsh.chsh(flipped, "auto")
        assert abs(base.s) == pytest.approx(abs(flip.s), abs=1e-12)
        # every E in the affected rows changes sign
        assert np.allclose(flip.e, -base.e)

    @given(random_counts())
    @settings(max_examples=120, deadline=None)
    def test_setting_permutation_preserves_auto_s(self, cells):
        counts = chsh.JointCounts(n=cells)
        swapped_a = chsh.JointCounts(n=cells[::-1])  # relabel Alice settings
        swapped_b = chsh.JointCounts(n=cells[:, ::-1])  # relabel Bob settings
        base = abs(chsh.chsh(counts, "auto").s)
        assert abs(chsh.chsh(swapped_a, "auto").s) == pytest.approx(base, abs=1e-12)
        assert abs(chsh.chsh(swapped_b, "auto").s) == pytest.approx(base, abs=1e-12)

    def test_uncorrelated_synthetic_respects_classical_bound(self):
        from bellrand import coincidence, synth

        values = []
        for seed in range(40):
            cfg = synth.SynthConfig(
                pair_rate=20_000.0, duration=1.0, visibility=0.0, seed=seed, name="u"
            )
            run = synth.gen_bell_run(cfg)
            seq = coincidence.match(run.alice, run.bob, 1e-9, 0.0)
            values.append(chsh.chsh(chsh.tally(seq), "auto").s)
        # |S| concentrates near 0 for visibility 0; 2 is > 20 sigma away
        n_pair = 20_000 / 4
        sigma_s = 2.0 / np.sqrt(n_pair)
        assert max(abs(s) for s in values) <= 2.0 + 5 * sigma_s
