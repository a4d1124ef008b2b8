"""Scikit-learn style wrappers so the core transforms compose with pipelines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .alignment import dtw_align
from .errors import DegenerateProfileError
from .profiles import baseline_correct, quantize, unit_peak
from .validation import check_mpp_values, check_non_negative_int, check_positive_int, check_samples


class MonotonicPeakTransform(TransformerMixin, BaseEstimator):
    """Map raw allocation-sample series to monotonic peak envelopes.

    Stateless: ``fit`` only validates parameters. ``X`` is a sequence of 1-D
    byte-sample series (they may have different lengths); the output is a list
    of float envelopes, each starting at 0 and non-decreasing.

    Parameters
    ----------
    quant_bytes : int, default=64
        Byte grid each baseline-corrected sample is rounded onto before the
        running maximum; 0 disables quantization.
    stride : int, default=1
        Keep every stride-th sample (the first is always kept), simulating
        coarser line sampling.
    """

    def __init__(self, quant_bytes: int = 64, stride: int = 1):
        self.quant_bytes = quant_bytes
        self.stride = stride

    def fit(self, X, y=None):
        check_non_negative_int(self.quant_bytes, "quant_bytes")
        check_positive_int(self.stride, "stride")
        return self

    def transform(self, X) -> list[np.ndarray]:
        self.fit(X)
        out = []
        for series in X:
            samples = check_samples(series)
            if self.stride > 1:
                samples = samples[:: self.stride]
            corrected = baseline_correct(samples)
            if self.quant_bytes:
                corrected = quantize(corrected, self.quant_bytes)
            values = np.maximum.accumulate(corrected).astype(np.float64)
            values[0] = 0.0
            out.append(values)
        return out


class DmpdDistance(BaseEstimator):
    """Pairwise shape distance over monotone envelopes, sklearn-fashion.

    ``fit`` stores reference envelopes; ``transform`` returns the rectangular
    distance matrix from new envelopes to the fitted ones. ``fit_transform``
    gives the square symmetric self-distance matrix.
    """

    def fit(self, X, y=None):
        self.profiles_ = [self._unit(v) for v in X]
        return self

    def transform(self, X) -> np.ndarray:
        units = [self._unit(v) for v in X]
        out = np.zeros((len(units), len(self.profiles_)), dtype=np.float64)
        for i, u in enumerate(units):
            for j, ref in enumerate(self.profiles_):
                out[i, j] = dtw_align(u, ref).dmpd
        return out

    def fit_transform(self, X, y=None) -> np.ndarray:
        self.fit(X)
        k = len(self.profiles_)
        out = np.zeros((k, k), dtype=np.float64)
        for i in range(k):
            for j in range(i + 1, k):
                d = dtw_align(self.profiles_[i], self.profiles_[j]).dmpd
                out[i, j] = d
                out[j, i] = d
        return out

    @staticmethod
    def _unit(values) -> np.ndarray:
        v = check_mpp_values(values)
        if v.size < 2:
            raise DegenerateProfileError("profiles must have length >= 2")
        return unit_peak(v)
