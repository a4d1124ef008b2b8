"""Normalized maximum velocity: how abruptly an envelope grows, relative to peers."""

from __future__ import annotations

import logging
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateProfileError, NoPassingSolutionsError
from .profiles import MonotonicPeakProfile

logger = logging.getLogger(__name__)

DEFAULT_P_MIN = 102400  # 100 KiB


@dataclass(frozen=True)
class NMVConfig:
    """Knobs for the velocity metric.

    ``tau`` is reserved for a thresholded variant and is intentionally unused
    by the plain-mean aggregation.
    """

    p_min: int = DEFAULT_P_MIN
    clip_to_unit: bool = False
    tau: float = 1.0


@dataclass(frozen=True)
class NMVRecord:
    problem_id: str
    solution_id: str
    test_id: str
    max_vel: float
    median_peak: float
    nmv: float
    eligible: bool

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.problem_id, self.solution_id, self.test_id)


@dataclass(frozen=True)
class NMVSolutionMean:
    problem_id: str
    solution_id: str
    nmv_mean: float
    n_eligible: int


def max_velocity(mpp) -> float:
    """Largest single-step rise of the envelope, in bytes per step."""
    values = mpp.values if isinstance(mpp, MonotonicPeakProfile) else np.asarray(mpp, dtype=np.float64)
    if values.size < 2:
        raise DegenerateProfileError("velocity needs a profile of length >= 2")
    return float(np.max(np.diff(values)))


def median_peak(peaks: Iterable[float]) -> float:
    """Median of the peaks across solutions that passed the test.

    An even count takes the mean of the two central values.
    """
    values = [float(p) for p in peaks]
    if not values:
        raise NoPassingSolutionsError("no passing solutions to take a median peak over")
    return float(statistics.median(values))


def nmv_records(
    mpps: Iterable[MonotonicPeakProfile],
    config: NMVConfig = NMVConfig(),
) -> list[NMVRecord]:
    """Per-(problem, solution, test) velocity normalized by the test's median peak.

    Groups whose median peak is zero carry no burstiness signal and are
    skipped with a log line, as are profiles too short to have a velocity.
    Eligibility compares the solution's own peak on the test against
    ``config.p_min``.
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

    records = []
    for (problem_id, test_id) in sorted(groups):
        group = groups[(problem_id, test_id)]
        med = median_peak(p.peak for p in group.values())
        if med <= 0.0:
            logger.warning(
                "skipping %s/%s: median peak is 0, velocity ratio undefined",
                problem_id,
                test_id,
            )
            continue
        for solution_id in sorted(group):
            mpp = group[solution_id]
            if len(mpp) < 2:
                logger.warning(
                    "skipping %s/%s solution %s: degenerate profile",
                    problem_id,
                    test_id,
                    solution_id,
                )
                continue
            vel = max_velocity(mpp)
            value = vel / med
            if config.clip_to_unit:
                value = min(max(value, 0.0), 1.0)
            records.append(
                NMVRecord(
                    problem_id=problem_id,
                    solution_id=solution_id,
                    test_id=test_id,
                    max_vel=vel,
                    median_peak=med,
                    nmv=value,
                    eligible=mpp.peak >= config.p_min,
                )
            )
    records.sort(key=lambda r: r.sort_key)
    return records


def nmv_solution_mean(records: Iterable[NMVRecord]) -> list[NMVSolutionMean]:
    """Mean velocity ratio per (problem, solution) over its eligible tests.

    Solutions with no eligible test are absent from the output.
    """
    by_solution: dict[tuple[str, str], list[float]] = defaultdict(list)
    for rec in sorted(records, key=lambda r: r.sort_key):
        if rec.eligible:
            by_solution[(rec.problem_id, rec.solution_id)].append(rec.nmv)
    out = []
    for (problem_id, solution_id) in sorted(by_solution):
        values = by_solution[(problem_id, solution_id)]
        out.append(
            NMVSolutionMean(problem_id, solution_id, math.fsum(values) / len(values), len(values))
        )
    return out
