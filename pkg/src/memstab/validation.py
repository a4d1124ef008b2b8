"""Input validation helpers shared by the transforms, estimators, and wire layer."""

from __future__ import annotations

import numpy as np

from .errors import InvalidTraceError

SAMPLING_MODES = ("line", "time")
STATUSES = ("ok", "timeout", "error", "mismatch")


def check_samples(samples, name: str = "samples") -> np.ndarray:
    """Coerce to a 1-D numeric array of non-negative finite values.

    Integer inputs come back as int64, floats as float64.
    """
    x = np.asarray(samples)
    if x.ndim != 1:
        raise InvalidTraceError(f"{name} must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise InvalidTraceError(f"{name} must be non-empty")
    if np.issubdtype(x.dtype, np.integer) or np.issubdtype(x.dtype, np.bool_):
        x = x.astype(np.int64)
    elif np.issubdtype(x.dtype, np.floating):
        x = x.astype(np.float64)
        if not np.all(np.isfinite(x)):
            raise InvalidTraceError(f"{name} contains non-finite values")
    else:
        raise InvalidTraceError(f"{name} must be numeric, got dtype {x.dtype}")
    if np.any(x < 0):
        raise InvalidTraceError(f"{name} contains negative byte counts")
    return x


def check_mpp_values(values, name: str = "values") -> np.ndarray:
    """Validate a monotonic peak envelope: starts at 0, non-decreasing, finite."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidTraceError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(v)):
        raise InvalidTraceError(f"{name} contains non-finite values")
    if v[0] != 0.0:
        raise InvalidTraceError(f"{name} must start at 0, got {v[0]!r}")
    if np.any(np.diff(v) < 0):
        raise InvalidTraceError(f"{name} must be non-decreasing")
    return v


def check_unit_peak(values, name: str = "profile") -> np.ndarray:
    """Validate a unit-peak profile: non-decreasing in [0, 1], peak 1 or all zero."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidTraceError(f"{name} must be a non-empty 1-D sequence")
    if np.any(v < 0) or np.any(v > 1):
        raise InvalidTraceError(f"{name} values must lie in [0, 1]")
    if np.any(np.diff(v) < 0):
        raise InvalidTraceError(f"{name} must be non-decreasing")
    peak = v.max()
    if peak != 0.0 and peak != 1.0:
        raise InvalidTraceError(f"{name} peak must be 1 (or the profile all-zero), got {peak!r}")
    return v


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_non_negative_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def validate_trace(trace) -> None:
    """Check RawTrace invariants; raises InvalidTraceError."""
    if trace.status not in STATUSES:
        raise InvalidTraceError(f"unknown status {trace.status!r}")
    if trace.sampling_mode not in SAMPLING_MODES:
        raise InvalidTraceError(f"unknown sampling_mode {trace.sampling_mode!r}")
    if trace.sampling_mode == "line":
        if trace.stride is None or trace.stride < 1:
            raise InvalidTraceError("line-mode trace requires stride >= 1")
    else:
        if trace.interval_ms is None or not trace.interval_ms > 0:
            raise InvalidTraceError("time-mode trace requires interval_ms > 0")
    if trace.quant_bytes < 0:
        raise InvalidTraceError("quant_bytes must be >= 0")
    if trace.status == "ok":
        if len(trace.samples) == 0:
            raise InvalidTraceError("ok trace must carry at least one sample")
        check_samples(trace.samples)
