"""Monotonic peak profiles: raw allocation samples to non-decreasing envelopes.

The pipeline order is fixed: baseline-correct against the first sample,
quantize onto the byte grid, then take the running maximum. Quantizing before
the running maximum keeps the envelope on the quantization grid.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import DegenerateProfileError, ExcludedRunError, InvalidTraceError
from .validation import check_samples

STATUS_OK = "ok"


@dataclass(frozen=True)
class RawTrace:
    """One profiled execution: allocation samples plus identity and sampling metadata.

    ``stride`` is meaningful in line mode, ``interval_ms`` in time mode.
    ``quant_bytes`` is the byte grid applied during the envelope transform
    (0 = no quantization). Unknown wire keys ride along in ``extra`` so
    round-trips preserve them.
    """

    problem_id: str
    solution_id: str
    test_id: str
    samples: tuple[int, ...] = ()
    status: str = STATUS_OK
    sampling_mode: str = "line"
    stride: int = 1
    interval_ms: float | None = None
    quant_bytes: int = 0
    model: str | None = None
    temperature: float | None = None
    extra: Mapping[str, Any] = field(default_factory=dict)

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.problem_id, self.solution_id, self.test_id)


@dataclass(frozen=True)
class MonotonicPeakProfile:
    """Baseline-corrected, optionally quantized, non-decreasing envelope.

    ``values`` start at 0, never decrease, and are stored as floats (bytes)
    so unit-peak division does not truncate. The peak is the last value.
    """

    values: np.ndarray
    problem_id: str
    solution_id: str
    test_id: str
    model: str | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def peak(self) -> float:
        return float(self.values[-1])

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.problem_id, self.solution_id, self.test_id)


def baseline_correct(samples) -> np.ndarray:
    """Subtract the first sample and floor at zero.

    The output measures growth above the starting allocation state; its first
    element is always 0.
    """
    x = check_samples(samples)
    return np.maximum(x - x[0], 0)


def quantize(samples, q: int) -> np.ndarray:
    """Round every sample to the nearest multiple of ``q`` bytes.

    Exact midpoints round up to the larger multiple. ``q=0`` is the identity.
    """
    if q < 0:
        raise ValueError(f"quantization grid must be >= 0, got {q}")
    x = np.asarray(samples)
    if q == 0:
        return x.copy()
    if np.issubdtype(x.dtype, np.integer):
        x = x.astype(np.int64)
        return (2 * x + q) // (2 * q) * q
    return np.floor(x / q + 0.5) * q


def to_mpp(trace: RawTrace) -> MonotonicPeakProfile:
    """Transform an ok trace into its monotonic peak profile.

    Applies baseline correction, quantization onto ``trace.quant_bytes`` when
    set, then the running maximum with the first value pinned to 0.
    """
    if trace.status != STATUS_OK:
        raise ExcludedRunError(
            f"run {trace.key} has status {trace.status!r} and is excluded from profiling"
        )
    if len(trace.samples) == 0:
        raise InvalidTraceError(f"run {trace.key} has no samples")
    corrected = baseline_correct(trace.samples)
    if trace.quant_bytes:
        corrected = quantize(corrected, trace.quant_bytes)
    values = np.maximum.accumulate(corrected).astype(np.float64)
    values[0] = 0.0
    return MonotonicPeakProfile(
        values=values,
        problem_id=trace.problem_id,
        solution_id=trace.solution_id,
        test_id=trace.test_id,
        model=trace.model,
    )


def resample_stride(trace: RawTrace, s: int) -> RawTrace:
    """Keep every ``s``-th sample (the first is always retained).

    Simulates coarser sampling for ablations; the sampling metadata is scaled
    to match (stride in line mode, interval in time mode).
    """
    if s < 1:
        raise ValueError(f"stride must be >= 1, got {s}")
    if s == 1:
        return trace
    samples = tuple(trace.samples[::s])
    if trace.sampling_mode == "time" and trace.interval_ms is not None:
        return dataclasses.replace(trace, samples=samples, interval_ms=trace.interval_ms * s)
    return dataclasses.replace(trace, samples=samples, stride=trace.stride * s)


def unit_peak(mpp) -> np.ndarray:
    """Scale an envelope to unit peak; a zero-peak profile maps to all zeros."""
    values = mpp.values if isinstance(mpp, MonotonicPeakProfile) else np.asarray(mpp, dtype=np.float64)
    if values.size == 0:
        raise DegenerateProfileError("cannot normalize an empty profile")
    peak = float(values.max())
    if peak <= 0.0:
        out = np.zeros_like(values, dtype=np.float64)
    else:
        out = values / peak
    out.setflags(write=False)
    return out
