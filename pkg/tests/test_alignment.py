import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memstab.alignment import (
    AlignmentResult,
    dmpd,
    dmpd_matrix,
    dtw_align,
    normalized_peak_difference,
)
from memstab.errors import DegenerateProfileError
from memstab.profiles import MonotonicPeakProfile, RawTrace, to_mpp, unit_peak

from oracles import brute_force_alignment

GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


def mpp(values, sol="s"):
    return MonotonicPeakProfile(
        values=values, problem_id="p", solution_id=sol, test_id="t"
    )


def random_mpp(rng, max_len=24) -> MonotonicPeakProfile:
    length = int(rng.integers(2, max_len + 1))
    samples = (rng.integers(0, 50, size=length) * 64).astype(int)
    return to_mpp(
        RawTrace(
            problem_id="p",
            solution_id="s",
            test_id="t",
            samples=tuple(int(v) for v in samples),
        )
    )


class TestDtwAlign:
    def test_identical_sequences(self):
        res = dtw_align([0.0, 1.0], [0.0, 1.0])
        assert res.total_cost == 0.0
        assert res.dmpd == 0.0
        assert res.path == ((0, 0), (1, 1))

    def test_worked_example_2_vs_3(self):
        res = dtw_align([0.0, 1.0], [0.0, 0.5, 1.0])
        assert res.total_cost == 0.5
        assert res.path_length == 3
        assert res.dmpd == pytest.approx(1 / 6, abs=1e-12)

    def test_worked_example_flat_vs_step(self):
        res = dtw_align([0.0, 0.0, 0.0], [0.0, 1.0])
        assert res.total_cost == 1.0
        assert res.path_length == 3
        assert res.dmpd == pytest.approx(1 / 3, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(DegenerateProfileError):
            dtw_align([], [0.0, 1.0])

    def test_path_bounds(self):
        res = dtw_align([0.0, 0.5, 1.0, 1.0], [0.0, 1.0])
        n, m = 4, 2
        assert max(n, m) <= res.path_length <= n + m - 1

    def test_matches_brute_force_on_small_grid(self):
        # Cross-check total cost against exhaustive path enumeration on a
        # sample of non-decreasing grid profiles (the full sweep lives in the
        # acceptance suite).
        seqs = [
            s
            for L in (2, 3, 4)
            for s in itertools.combinations_with_replacement(GRID, L)
            if s[-1] == 1.0
        ]
        for a in seqs[::3]:
            for b in seqs[::5]:
                expected_cost, _ = brute_force_alignment(a, b)
                assert dtw_align(a, b).total_cost == expected_cost

    def test_path_is_valid_walk(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = unit_peak(random_mpp(rng))
            b = unit_peak(random_mpp(rng))
            res = dtw_align(a, b)
            assert res.path[0] == (0, 0)
            assert res.path[-1] == (len(a) - 1, len(b) - 1)
            for (i0, j0), (i1, j1) in zip(res.path, res.path[1:]):
                assert (i1 - i0, j1 - j0) in {(1, 1), (1, 0), (0, 1)}
            assert res.path_length == len(res.path)
            assert res.dmpd == res.total_cost / res.path_length


class TestDmpd:
    def test_identity_is_zero(self):
        p = mpp([0.0, 50.0, 50.0, 100.0])
        assert dmpd(p, p) == 0.0

    def test_scale_invariance_exact(self):
        pa = mpp([0.0, 50.0, 50.0, 100.0])
        pb = mpp([0.0, 100.0, 100.0, 200.0])
        assert dmpd(pa, pb) == 0.0

    def test_worked_value(self):
        pa = mpp([0.0, 100.0])
        pb = mpp([0.0, 50.0, 100.0])
        assert dmpd(pa, pb) == pytest.approx(1 / 6, abs=1e-12)

    def test_degenerate_length_one(self):
        with pytest.raises(DegenerateProfileError):
            dmpd(mpp([0.0]), mpp([0.0, 1.0]))

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=60)
    def test_bounds_on_random_pairs(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_mpp(rng), random_mpp(rng)
        value = dmpd(a, b)
        assert 0.0 <= value <= 1.0

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=60)
    def test_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_mpp(rng), random_mpp(rng)
        assert abs(dmpd(a, b) - dmpd(b, a)) <= 1e-12

    @given(st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=60)
    def test_scale_invariance_bit_exact(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_mpp(rng), random_mpp(rng)
        base = dmpd(a, b)
        for alpha in (0.5, 3.0, 1000.0):
            scaled = MonotonicPeakProfile(
                values=a.values * alpha,
                problem_id=a.problem_id,
                solution_id=a.solution_id,
                test_id=a.test_id,
            )
            assert dmpd(scaled, b) == base

    def test_zero_peak_vs_ramp(self):
        flat = mpp([0.0, 0.0, 0.0])
        ramp = mpp([0.0, 1.0])
        assert dmpd(flat, ramp) == pytest.approx(1 / 3, abs=1e-12)


class TestNormalizedPeakDifference:
    def test_equal_peaks(self):
        assert normalized_peak_difference(mpp([0.0, 100.0]), mpp([0.0, 100.0])) == 0.0

    def test_half(self):
        assert normalized_peak_difference(mpp([0.0, 100.0]), mpp([0.0, 200.0])) == 0.5

    def test_both_zero(self):
        assert normalized_peak_difference(mpp([0.0, 0.0]), mpp([0.0, 0.0])) == 0.0

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a, b = random_mpp(rng), random_mpp(rng)
            v = normalized_peak_difference(a, b)
            assert v == normalized_peak_difference(b, a)
            assert 0.0 <= v <= 1.0


class TestDmpdMatrix:
    def test_square_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(11)
        profiles = [random_mpp(rng) for _ in range(4)]
        mat = dmpd_matrix(profiles)
        assert mat.shape == (4, 4)
        assert np.allclose(mat, mat.T)
        assert np.all(np.diag(mat) == 0.0)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateProfileError):
            dmpd_matrix([mpp([0.0])])
