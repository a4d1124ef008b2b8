"""Time-elastic alignment of unit-peak profiles and the bounded shape distance.

The aligner is unconstrained dynamic time warping with an L1 local cost. The
distance reported is the accumulated cost at the final cell divided by the
number of aligned point-pairs on the backtracked optimal path, so it stays in
[0, 1] for unit-peak inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProfileError
from .profiles import MonotonicPeakProfile, unit_peak

_INF = float("inf")


@dataclass(frozen=True)
class AlignmentResult:
    """Outcome of aligning two profiles.

    ``path`` holds 0-based index pairs from (0, 0) to (n-1, m-1);
    ``path_length`` is its cell count and ``dmpd`` is ``total_cost / path_length``.
    """

    total_cost: float
    path_length: int
    dmpd: float
    path: tuple[tuple[int, int], ...]


def dtw_align(a, b) -> AlignmentResult:
    """Align two unit-peak profiles with unconstrained DTW and L1 local cost.

    The full cost matrix is kept so the optimal warping path can be recovered
    by backtracking from the final cell. Ties during backtracking prefer the
    diagonal predecessor, then the vertical one (previous point of ``a``),
    then the horizontal one; comparisons are exact on the stored matrix
    values, which makes the result deterministic for identical inputs.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    n, m = int(av.size), int(bv.size)
    if n == 0 or m == 0:
        raise DegenerateProfileError("cannot align an empty profile")

    local = np.abs(av[:, None] - bv[None, :]).tolist()

    # Accumulated cost; row/column 0 is the infinite boundary.
    acc = [[_INF] * (m + 1) for _ in range(n + 1)]
    acc[0][0] = 0.0
    for i in range(1, n + 1):
        row = acc[i]
        prev = acc[i - 1]
        cost = local[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1]
            up = prev[j]
            if up < best:
                best = up
            left = row[j - 1]
            if left < best:
                best = left
            row[j] = cost[j - 1] + best

    path = [(n - 1, m - 1)]
    i, j = n, m
    while i > 1 or j > 1:
        diag = acc[i - 1][j - 1]
        vert = acc[i - 1][j]
        horiz = acc[i][j - 1]
        if diag <= vert and diag <= horiz:
            i -= 1
            j -= 1
        elif vert <= horiz:
            i -= 1
        else:
            j -= 1
        path.append((i - 1, j - 1))
    path.reverse()

    total = acc[n][m]
    length = len(path)
    return AlignmentResult(
        total_cost=total,
        path_length=length,
        dmpd=total / length,
        path=tuple(path),
    )


def dmpd(pa: MonotonicPeakProfile, pb: MonotonicPeakProfile) -> float:
    """Shape divergence between two peak profiles, in [0, 1].

    Both profiles are unit-peak normalized first, so the result is scale
    invariant; 0 means the shapes admit a zero-cost alignment. Profiles of
    length 1 carry no shape and are rejected.
    """
    la = len(pa.values) if isinstance(pa, MonotonicPeakProfile) else len(pa)
    lb = len(pb.values) if isinstance(pb, MonotonicPeakProfile) else len(pb)
    if la < 2 or lb < 2:
        raise DegenerateProfileError(
            f"profiles of length {la} and {lb}: both must have length >= 2"
        )
    return dtw_align(unit_peak(pa), unit_peak(pb)).dmpd


def normalized_peak_difference(pa: MonotonicPeakProfile, pb: MonotonicPeakProfile) -> float:
    """Peak-only baseline: |peak_a - peak_b| / max(peak_a, peak_b), 0 when both are 0."""
    peak_a = pa.peak if isinstance(pa, MonotonicPeakProfile) else float(np.max(pa))
    peak_b = pb.peak if isinstance(pb, MonotonicPeakProfile) else float(np.max(pb))
    top = max(peak_a, peak_b)
    if top <= 0.0:
        return 0.0
    return abs(peak_a - peak_b) / top


def dmpd_matrix(profiles) -> np.ndarray:
    """Square symmetric DMPD matrix over a sequence of peak profiles."""
    units = [unit_peak(p) for p in profiles]
    for idx, u in enumerate(units):
        if u.size < 2:
            raise DegenerateProfileError(f"profile {idx} has length {u.size} < 2")
    k = len(units)
    out = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            d = dtw_align(units[i], units[j]).dmpd
            out[i, j] = d
            out[j, i] = d
    return out
