"""Pairwise distance tables and their roll-up into problem and model scores."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .alignment import dmpd
from .errors import DegenerateProfileError, NoDataError
from .profiles import MonotonicPeakProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairwiseDistanceRecord:
    """One shape-divergence value for an unordered solution pair on one test.

    ``sol_i < sol_j`` lexicographically; ``dmpd`` lies in [0, 1].
    """

    problem_id: str
    test_id: str
    sol_i: str
    sol_j: str
    dmpd: float

    @property
    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.problem_id, self.test_id, self.sol_i, self.sol_j)


@dataclass(frozen=True)
class SkippedPair:
    """A pair (or whole group) that could not be evaluated, with the reason."""

    problem_id: str
    test_id: str
    sol_i: str | None
    sol_j: str | None
    reason: str


@dataclass(frozen=True)
class ProblemScore:
    problem_id: str
    d_p: float
    n_pairs: int
    n_tests: int
    weight: int


@dataclass(frozen=True)
class ModelScore:
    mis_macro: float
    mis_micro: float
    n_problems: int


def pairwise_table(
    mpps: Iterable[MonotonicPeakProfile],
    skip_log: list[SkippedPair] | None = None,
) -> list[PairwiseDistanceRecord]:
    """Evaluate DMPD for every unordered solution pair within each (problem, test).

    Profiles too short to align are excluded pairwise; groups left with fewer
    than two usable profiles produce no records. Skips are logged (and
    appended to ``skip_log`` when given). Output is sorted by
    (problem_id, test_id, sol_i, sol_j).
    """
    groups: dict[tuple[str, str], dict[str, MonotonicPeakProfile]] = defaultdict(dict)
    for mpp in mpps:
        group = groups[(mpp.problem_id, mpp.test_id)]
        if mpp.solution_id in group:
            raise ValueError(
                f"duplicate profile for solution {mpp.solution_id!r} on "
                f"({mpp.problem_id!r}, {mpp.test_id!r})"
            )
        group[mpp.solution_id] = mpp

    def skip(problem_id, test_id, sol_i, sol_j, reason):
        logger.warning(
            "skipping %s/%s pair (%s, %s): %s", problem_id, test_id, sol_i, sol_j, reason
        )
        if skip_log is not None:
            skip_log.append(SkippedPair(problem_id, test_id, sol_i, sol_j, reason))

    records: list[PairwiseDistanceRecord] = []
    for (problem_id, test_id) in sorted(groups):
        group = groups[(problem_id, test_id)]
        usable = {}
        for sol, mpp in sorted(group.items()):
            if len(mpp) < 2:
                skip(problem_id, test_id, sol, None, "degenerate profile (length < 2)")
            else:
                usable[sol] = mpp
        solutions = sorted(usable)
        if len(solutions) < 2:
            skip(problem_id, test_id, None, None, "fewer than 2 valid profiles in group")
            continue
        for idx, sol_i in enumerate(solutions):
            for sol_j in solutions[idx + 1 :]:
                try:
                    value = dmpd(usable[sol_i], usable[sol_j])
                except DegenerateProfileError as exc:  # pragma: no cover - filtered above
                    skip(problem_id, test_id, sol_i, sol_j, str(exc))
                    continue
                records.append(
                    PairwiseDistanceRecord(problem_id, test_id, sol_i, sol_j, value)
                )
    records.sort(key=lambda r: r.sort_key)
    return records


def problem_scores(records: Iterable[PairwiseDistanceRecord]) -> list[ProblemScore]:
    """Mean divergence per problem over all its evaluated pairs and tests.

    The weight is the number of entries actually evaluated (skips excluded),
    which may be less than n_pairs * n_tests. Summation runs over a fixed
    sorted order with exact accumulation, so input order cannot change the
    result.
    """
    by_problem: dict[str, list[PairwiseDistanceRecord]] = defaultdict(list)
    for rec in records:
        by_problem[rec.problem_id].append(rec)

    scores = []
    for problem_id in sorted(by_problem):
        entries = sorted(by_problem[problem_id], key=lambda r: r.sort_key)
        weight = len(entries)
        if weight == 0:
            continue
        d_p = math.fsum(r.dmpd for r in entries) / weight
        n_pairs = len({(r.sol_i, r.sol_j) for r in entries})
        n_tests = len({r.test_id for r in entries})
        scores.append(ProblemScore(problem_id, d_p, n_pairs, n_tests, weight))
    return scores


def model_score(scores: Sequence[ProblemScore]) -> ModelScore:
    """Macro (unweighted) and micro (weight by evaluated entries) instability.

    Only problems with weight > 0 participate.
    """
    scored = sorted((s for s in scores if s.weight > 0), key=lambda s: s.problem_id)
    if not scored:
        raise NoDataError("no problem scores with positive weight")
    macro = math.fsum(s.d_p for s in scored) / len(scored)
    total_weight = sum(s.weight for s in scored)
    micro = math.fsum(s.weight * s.d_p for s in scored) / total_weight
    return ModelScore(mis_macro=macro, mis_micro=micro, n_problems=len(scored))


@dataclass(frozen=True)
class SolutionDmpdMean:
    """Per-solution mean divergence: all entries involving the solution, all tests."""

    problem_id: str
    solution_id: str
    dmpd_mean: float
    n: int


def solution_dmpd_means(records: Iterable[PairwiseDistanceRecord]) -> list[SolutionDmpdMean]:
    """Average each solution's pairwise divergences (it appears on either side)."""
    sums: dict[tuple[str, str], list[float]] = defaultdict(list)
    for rec in sorted(records, key=lambda r: r.sort_key):
        sums[(rec.problem_id, rec.sol_i)].append(rec.dmpd)
        sums[(rec.problem_id, rec.sol_j)].append(rec.dmpd)
    out = []
    for (problem_id, solution_id) in sorted(sums):
        values = sums[(problem_id, solution_id)]
        out.append(
            SolutionDmpdMean(problem_id, solution_id, math.fsum(values) / len(values), len(values))
        )
    return out
