import random

import pytest

from memstab.aggregation import (
    PairwiseDistanceRecord,
    model_score,
    pairwise_table,
    problem_scores,
    solution_dmpd_means,
)
from memstab.errors import NoDataError
from memstab.profiles import MonotonicPeakProfile


def mpp(values, problem="p1", sol="s1", test="t1"):
    return MonotonicPeakProfile(
        values=values, problem_id=problem, solution_id=sol, test_id=test
    )


def rec(problem, test, si, sj, value):
    return PairwiseDistanceRecord(problem, test, si, sj, value)


class TestPairwiseTable:
    def test_three_solutions_give_three_pairs(self):
        profiles = [
            mpp([0.0, 10.0, 20.0], sol="a"),
            mpp([0.0, 20.0, 20.0], sol="b"),
            mpp([0.0, 0.0, 30.0], sol="c"),
        ]
        records = pairwise_table(profiles)
        assert len(records) == 3
        assert [(r.sol_i, r.sol_j) for r in records] == [("a", "b"), ("a", "c"), ("b", "c")]

    def test_degenerate_profile_skipped(self):
        skips = []
        records = pairwise_table(
            [mpp([0.0], sol="a"), mpp([0.0, 5.0], sol="b")], skip_log=skips
        )
        assert records == []
        assert len(skips) == 2  # the profile itself, then the starved group
        assert any("degenerate" in s.reason for s in skips)

    def test_identical_profiles_record_zero(self):
        records = pairwise_table(
            [mpp([0.0, 10.0], sol="a"), mpp([0.0, 10.0], sol="b")]
        )
        assert len(records) == 1
        assert records[0].dmpd == 0.0

    def test_pair_ordering_lexicographic(self):
        records = pairwise_table(
            [mpp([0.0, 10.0], sol="zz"), mpp([0.0, 20.0], sol="aa")]
        )
        assert (records[0].sol_i, records[0].sol_j) == ("aa", "zz")

    def test_duplicate_solution_rejected(self):
        with pytest.raises(ValueError):
            pairwise_table([mpp([0.0, 1.0], sol="a"), mpp([0.0, 2.0], sol="a")])

    def test_sorted_across_groups(self):
        profiles = [
            mpp([0.0, 1.0], problem="p2", sol="a", test="t1"),
            mpp([0.0, 2.0], problem="p2", sol="b", test="t1"),
            mpp([0.0, 1.0], problem="p1", sol="a", test="t2"),
            mpp([0.0, 2.0], problem="p1", sol="b", test="t2"),
            mpp([0.0, 1.0], problem="p1", sol="a", test="t1"),
            mpp([0.0, 2.0], problem="p1", sol="b", test="t1"),
        ]
        records = pairwise_table(profiles)
        keys = [r.sort_key for r in records]
        assert keys == sorted(keys)


class TestProblemScores:
    def test_mean_and_weight(self):
        scores = problem_scores(
            [rec("p", "t1", "a", "b", 0.2), rec("p", "t2", "a", "b", 0.4)]
        )
        assert len(scores) == 1
        assert scores[0].d_p == pytest.approx(0.3)
        assert scores[0].weight == 2
        assert scores[0].n_pairs == 1
        assert scores[0].n_tests == 2

    def test_single_zero_entry(self):
        scores = problem_scores([rec("p", "t", "a", "b", 0.0)])
        assert scores[0].d_p == 0.0

    def test_no_entries_no_output(self):
        assert problem_scores([]) == []

    def test_order_invariance_bit_identical(self):
        records = [
            rec("p1", f"t{i}", "a", "b", v)
            for i, v in enumerate([0.11, 0.23, 0.31, 0.07, 0.5])
        ] + [rec("p2", "t0", "a", "c", 0.91)]
        baseline = problem_scores(records)
        shuffled = records[:]
        rng = random.Random(42)
        for _ in range(50):
            rng.shuffle(shuffled)
            assert problem_scores(shuffled) == baseline


class TestModelScore:
    def test_worked_example(self):
        scores = problem_scores(
            [rec("p1", f"t{i}", "a", "b", 0.2) for i in range(4)]
            + [rec("p2", "t0", "a", "b", 0.4)]
        )
        overall = model_score(scores)
        assert overall.mis_macro == pytest.approx(0.3)
        assert overall.mis_micro == pytest.approx(0.24)
        assert overall.n_problems == 2

    def test_singleton_macro_equals_micro(self):
        overall = model_score(problem_scores([rec("p", "t", "a", "b", 0.1)]))
        assert overall.mis_macro == overall.mis_micro == pytest.approx(0.1)

    def test_equal_weights_macro_equals_micro(self):
        records = [rec(f"p{k}", "t", "a", "b", v) for k, v in enumerate([0.1, 0.2, 0.6])]
        overall = model_score(problem_scores(records))
        assert overall.mis_macro == pytest.approx(overall.mis_micro)

    def test_bounds_between_min_and_max_dp(self):
        records = [
            rec("p1", "t", "a", "b", 0.10),
            rec("p2", "t", "a", "b", 0.50),
            rec("p2", "t2", "a", "b", 0.70),
            rec("p3", "t", "a", "b", 0.90),
        ]
        scores = problem_scores(records)
        overall = model_score(scores)
        d_values = [s.d_p for s in scores]
        assert min(d_values) <= overall.mis_macro <= max(d_values)
        assert min(d_values) <= overall.mis_micro <= max(d_values)

    def test_empty_raises(self):
        with pytest.raises(NoDataError):
            model_score([])


class TestSolutionDmpdMeans:
    def test_both_sides_counted(self):
        records = [
            rec("p", "t1", "a", "b", 0.2),
            rec("p", "t1", "a", "c", 0.4),
            rec("p", "t1", "b", "c", 0.6),
        ]
        means = {(m.problem_id, m.solution_id): m for m in solution_dmpd_means(records)}
        assert means[("p", "a")].dmpd_mean == pytest.approx(0.3)
        assert means[("p", "b")].dmpd_mean == pytest.approx(0.4)
        assert means[("p", "c")].dmpd_mean == pytest.approx(0.5)
        assert means[("p", "a")].n == 2
