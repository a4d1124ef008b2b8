"""Nonparametric statistics for sensitivity and code-quality analyses.

Everything here is deliberately small and self-contained: exact signed-rank
p-values need tie-aware enumeration that off-the-shelf routines refuse, and
the remaining measures are a few lines each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateTestError,
    InsufficientDataError,
    NoDataError,
    UndefinedCorrelationError,
)

EXACT_WILCOXON_MAX_N = 25


@dataclass(frozen=True)
class PairedDiffSummary:
    """Distributional summary of per-problem differences between two settings."""

    median_diff: float
    iqr: float
    wilcoxon_p: float
    cliffs_delta: float
    n: int


@dataclass(frozen=True)
class CorrelationRow:
    """Association between one stability proxy and one quality metric.

    Statistics are None when undefined for the joined sample (constant input,
    or too few observations to stratify).
    """

    proxy: str
    metric_name: str
    rho_spearman: float | None
    r_pearson: float | None
    cliffs_delta_t1_t3: float | None
    n: int


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties given the average of the positions they span."""
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.float64)
    sorted_x = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def cliffs_delta(x: Sequence[float], y: Sequence[float]) -> float:
    """Dominance effect size: (#{x_i > y_j} - #{x_i < y_j}) / (|x| |y|), in [-1, 1]."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.size == 0 or ya.size == 0:
        raise NoDataError("cliffs_delta needs two non-empty samples")
    signs = np.sign(xa[:, None] - ya[None, :])
    return float(signs.sum() / (xa.size * ya.size))


def _exact_signed_rank_p(ranks: np.ndarray, w_pos: float) -> float:
    # All assignments of signs to the given ranks are equally likely under the
    # null; count how many produce a positive-rank sum at or beyond the
    # observed one. Ranks are doubled so average (half-integer) ranks become
    # exact integers for the subset-sum recursion.
    r2 = np.rint(ranks * 2).astype(np.int64)
    total = int(r2.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in r2:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    w2 = int(round(w_pos * 2))
    n_assignments = float(2 ** ranks.size)
    p_le = counts[: w2 + 1].sum() / n_assignments
    p_ge = counts[w2:].sum() / n_assignments
    return min(1.0, 2.0 * min(p_le, p_ge))


def _normal_signed_rank_p(ranks: np.ndarray, w_pos: float) -> float:
    n = ranks.size
    mu = n * (n + 1) / 4.0
    sigma2 = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    sigma2 -= float(np.sum(tie_counts.astype(np.float64) ** 3 - tie_counts)) / 48.0
    sigma = math.sqrt(sigma2)
    d = w_pos - mu
    if d == 0.0:
        return 1.0
    z = (d - 0.5 * math.copysign(1.0, d)) / sigma
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))


def wilcoxon_signed_rank(diffs: Sequence[float]) -> float:
    """Two-sided signed-rank p-value for paired differences.

    Zero differences are dropped; tied absolute values receive average ranks.
    Up to n = 25 the p-value is exact (two-sided as twice the smaller tail of
    the enumerated positive-rank-sum distribution, capped at 1); beyond that a
    normal approximation with tie and continuity corrections is used.
    """
    d = np.asarray(diffs, dtype=np.float64)
    d = d[d != 0.0]
    if d.size == 0:
        raise DegenerateTestError("all differences are zero; signed-rank test undefined")
    ranks = _average_ranks(np.abs(d))
    w_pos = float(ranks[d > 0].sum())
    if d.size <= EXACT_WILCOXON_MAX_N:
        return _exact_signed_rank_p(ranks, w_pos)
    return _normal_signed_rank_p(ranks, w_pos)


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation; raises if either input is constant."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.size != ya.size:
        raise ValueError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise NoDataError("correlation needs at least 2 observations")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx2 = float(np.dot(xc, xc))
    sy2 = float(np.dot(yc, yc))
    if sx2 == 0.0 or sy2 == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant sequence")
    # One sqrt of the product keeps perfectly correlated inputs at exactly 1.
    r = float(np.dot(xc, yc)) / math.sqrt(sx2 * sy2)
    return max(-1.0, min(1.0, r))


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Rank correlation: product-moment correlation of average-ranked values."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.size != ya.size:
        raise ValueError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise NoDataError("correlation needs at least 2 observations")
    return pearson_r(_average_ranks(xa), _average_ranks(ya))


TERTILES = ("T1", "T2", "T3")


def tertile_stratify(values: Mapping) -> dict:
    """Split ids into low/middle/high thirds of their values.

    Boundaries are ceil-based index splits of the ascending order; ties are
    resolved by a stable sort on (value, id), so equal values are assigned
    deterministically by id.
    """
    n = len(values)
    if n < 3:
        raise InsufficientDataError(f"tertile stratification needs >= 3 values, got {n}")
    ordered = sorted(values.items(), key=lambda kv: (kv[1], kv[0]))
    c1 = math.ceil(n / 3)
    c2 = math.ceil(2 * n / 3)
    out = {}
    for idx, (key, _) in enumerate(ordered):
        if idx < c1:
            out[key] = "T1"
        elif idx < c2:
            out[key] = "T2"
        else:
            out[key] = "T3"
    return out


def paired_diff_summary(
    baseline: Mapping[str, float], variant: Mapping[str, float]
) -> PairedDiffSummary:
    """Per-problem differences variant - baseline over the shared problems.

    When every difference is zero the signed-rank test carries no evidence and
    the p-value is reported as 1.0 rather than erroring out.
    """
    shared = sorted(set(baseline) & set(variant))
    if not shared:
        raise NoDataError("baseline and variant share no problems")
    base_vals = np.array([baseline[p] for p in shared], dtype=np.float64)
    var_vals = np.array([variant[p] for p in shared], dtype=np.float64)
    diffs = var_vals - base_vals
    median_diff = float(np.median(diffs))
    q1, q3 = np.percentile(diffs, [25, 75])
    if np.all(diffs == 0.0):
        p_value = 1.0
    else:
        p_value = wilcoxon_signed_rank(diffs)
    delta = cliffs_delta(var_vals, base_vals)
    return PairedDiffSummary(
        median_diff=median_diff,
        iqr=float(q3 - q1),
        wilcoxon_p=p_value,
        cliffs_delta=delta,
        n=len(shared),
    )


def correlation_table(
    rows: Iterable[Mapping],
    proxy_cols: Sequence[str],
    metric_cols: Sequence[str],
) -> list[CorrelationRow]:
    """Correlate each proxy column against each metric column.

    ``rows`` are mappings keyed at least by problem_id / solution_id plus the
    named columns; rows missing either value for a combination are dropped
    from that combination. Undefined statistics come back as None so callers
    can render blanks without losing the rest of the table.
    """
    rows = list(rows)
    out = []
    for proxy in proxy_cols:
        for metric in metric_cols:
            sample = [
                r
                for r in rows
                if r.get(proxy) is not None and r.get(metric) is not None
            ]
            n = len(sample)
            proxy_vals = [float(r[proxy]) for r in sample]
            metric_vals = [float(r[metric]) for r in sample]
            rho = r_p = delta = None
            if n >= 2:
                try:
                    rho = spearman_rho(proxy_vals, metric_vals)
                except UndefinedCorrelationError:
                    rho = None
                try:
                    r_p = pearson_r(proxy_vals, metric_vals)
                except UndefinedCorrelationError:
                    r_p = None
            if n >= 3:
                keyed = {
                    (r["problem_id"], r["solution_id"]): float(r[proxy]) for r in sample
                }
                tertiles = tertile_stratify(keyed)
                t1 = [
                    float(r[metric])
                    for r in sample
                    if tertiles[(r["problem_id"], r["solution_id"])] == "T1"
                ]
                t3 = [
                    float(r[metric])
                    for r in sample
                    if tertiles[(r["problem_id"], r["solution_id"])] == "T3"
                ]
                if t1 and t3:
                    delta = cliffs_delta(t1, t3)
            out.append(CorrelationRow(proxy, metric, rho, r_p, delta, n))
    return out
