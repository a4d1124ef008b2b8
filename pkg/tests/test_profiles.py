import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memstab.errors import ExcludedRunError, InvalidTraceError
from memstab.profiles import (
    MonotonicPeakProfile,
    RawTrace,
    baseline_correct,
    quantize,
    resample_stride,
    to_mpp,
    unit_peak,
)

byte_series = st.lists(st.integers(min_value=0, max_value=2**30), min_size=1, max_size=60)


def trace(samples, **kw):
    defaults = dict(problem_id="p", solution_id="s", test_id="t")
    defaults.update(kw)
    return RawTrace(samples=tuple(samples), **defaults)


class TestBaselineCorrect:
    def test_hand_example(self):
        assert baseline_correct([100, 150, 120, 200]).tolist() == [0, 50, 20, 100]

    def test_zero_series(self):
        assert baseline_correct([0, 0, 0]).tolist() == [0, 0, 0]

    def test_floor_at_zero(self):
        assert baseline_correct([500, 400]).tolist() == [0, 0]

    def test_empty_rejected(self):
        with pytest.raises(InvalidTraceError):
            baseline_correct([])

    def test_negative_rejected(self):
        with pytest.raises(InvalidTraceError):
            baseline_correct([10, -1])

    @given(byte_series)
    def test_first_element_always_zero(self, samples):
        out = baseline_correct(samples)
        assert out[0] == 0
        assert np.all(out >= 0)


class TestQuantize:
    def test_nearest_multiple(self):
        assert quantize([100], 64).tolist() == [128]

    def test_midpoint_rounds_up(self):
        assert quantize([96], 64).tolist() == [128]

    def test_multiples_unchanged(self):
        assert quantize([0, 64, 128], 64).tolist() == [0, 64, 128]

    def test_q_zero_is_identity(self):
        assert quantize([7, 100, 33], 0).tolist() == [7, 100, 33]

    def test_negative_q_rejected(self):
        with pytest.raises(ValueError):
            quantize([1], -1)

    def test_float_input(self):
        assert quantize(np.array([96.0, 95.9]), 64).tolist() == [128.0, 64.0]

    @given(st.lists(st.integers(min_value=0, max_value=2**30), min_size=1, max_size=40))
    def test_q1_identity_on_integers(self, samples):
        assert quantize(samples, 1).tolist() == samples

    @given(
        st.lists(st.integers(min_value=0, max_value=2**20), min_size=1, max_size=40),
        st.integers(min_value=1, max_value=512),
    )
    def test_output_on_grid_and_nearest(self, samples, q):
        out = quantize(samples, q)
        assert np.all(out % q == 0)
        for x, v in zip(samples, out.tolist()):
            assert abs(v - x) <= q / 2


class TestToMpp:
    def test_hand_example(self):
        mpp = to_mpp(trace([100, 150, 120, 200]))
        assert mpp.values.tolist() == [0, 50, 50, 100]
        assert mpp.peak == 100

    def test_single_sample(self):
        assert to_mpp(trace([7])).values.tolist() == [0.0]

    def test_quantization_applied(self):
        mpp = to_mpp(trace([0, 100], quant_bytes=64))
        assert mpp.values.tolist() == [0.0, 128.0]

    def test_non_ok_excluded(self):
        with pytest.raises(ExcludedRunError):
            to_mpp(trace([1, 2], status="timeout"))

    def test_empty_samples_invalid(self):
        with pytest.raises(InvalidTraceError):
            to_mpp(trace([]))

    def test_identity_carried(self):
        mpp = to_mpp(trace([1, 2], problem_id="P9", solution_id="S3", test_id="T1", model="m"))
        assert mpp.key == ("P9", "S3", "T1")
        assert mpp.model == "m"

    @given(byte_series)
    def test_output_non_decreasing(self, samples):
        values = to_mpp(trace(samples)).values
        assert values[0] == 0.0
        assert np.all(np.diff(values) >= 0)

    @given(byte_series)
    def test_idempotent_on_transformed_series(self, samples):
        once = to_mpp(trace(samples))
        again = to_mpp(trace(tuple(int(v) for v in once.values)))
        assert again.values.tolist() == once.values.tolist()

    @given(byte_series)
    def test_peak_is_max(self, samples):
        mpp = to_mpp(trace(samples))
        assert mpp.peak == mpp.values.max() == mpp.values[-1]


class TestResampleStride:
    def test_every_second(self):
        out = resample_stride(trace([1, 2, 3, 4, 5]), 2)
        assert out.samples == (1, 3, 5)
        assert out.stride == 2

    def test_identity(self):
        t = trace([1, 2, 3])
        assert resample_stride(t, 1) is t

    def test_stride_beyond_length(self):
        assert resample_stride(trace([1, 2, 3, 4]), 10).samples == (1,)

    def test_time_mode_scales_interval(self):
        t = trace([1, 2, 3, 4], sampling_mode="time", interval_ms=0.5)
        out = resample_stride(t, 2)
        assert out.interval_ms == 1.0
        assert out.samples == (1, 3)

    @given(byte_series, st.integers(min_value=1, max_value=12))
    def test_length_law(self, samples, s):
        out = resample_stride(trace(samples), s)
        assert len(out.samples) == -(-len(samples) // s)
        assert out.samples[0] == samples[0]


class TestUnitPeak:
    def test_division_by_peak(self):
        mpp = to_mpp(trace([100, 150, 120, 200]))
        assert unit_peak(mpp).tolist() == [0.0, 0.5, 0.5, 1.0]

    def test_zero_peak_all_zero(self):
        assert unit_peak(to_mpp(trace([5, 5, 5]))).tolist() == [0.0, 0.0, 0.0]

    def test_single_zero(self):
        assert unit_peak(to_mpp(trace([9]))).tolist() == [0.0]

    @given(byte_series)
    def test_max_is_one_or_all_zero(self, samples):
        out = unit_peak(to_mpp(trace(samples)))
        if out.max() == 0.0:
            assert np.all(out == 0.0)
        else:
            assert out.max() == 1.0
        assert np.all((0.0 <= out) & (out <= 1.0))


class TestProfileType:
    def test_values_read_only(self):
        mpp = to_mpp(trace([1, 2, 3]))
        with pytest.raises(ValueError):
            mpp.values[0] = 5.0

    def test_replaceable_trace_metadata(self):
        t = trace([1, 2], quant_bytes=0)
        assert dataclasses.replace(t, quant_bytes=64).quant_bytes == 64


def test_mpp_dataclass_direct_construction_normalizes_dtype():
    mpp = MonotonicPeakProfile(values=[0, 1, 2], problem_id="p", solution_id="s", test_id="t")
    assert mpp.values.dtype == np.float64
