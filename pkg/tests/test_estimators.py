import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from memstab.errors import DegenerateProfileError, InvalidTraceError
from memstab.estimators import DmpdDistance, MonotonicPeakTransform


class TestMonotonicPeakTransform:
    def test_matches_hand_example(self):
        out = MonotonicPeakTransform(quant_bytes=0).transform([[100, 150, 120, 200]])
        assert out[0].tolist() == [0.0, 50.0, 50.0, 100.0]

    def test_quant_and_stride_params(self):
        est = MonotonicPeakTransform(quant_bytes=64, stride=2)
        out = est.transform([[0, 100, 0, 100, 0]])
        # stride 2 keeps [0, 0, 0]
        assert out[0].tolist() == [0.0, 0.0, 0.0]

    def test_variable_lengths(self):
        out = MonotonicPeakTransform(quant_bytes=0).transform([[5], [5, 6, 7]])
        assert [len(v) for v in out] == [1, 3]

    def test_get_set_params_roundtrip(self):
        est = MonotonicPeakTransform(quant_bytes=128, stride=3)
        assert est.get_params() == {"quant_bytes": 128, "stride": 3}
        est.set_params(stride=5)
        assert est.stride == 5

    def test_cloneable(self):
        est = clone(MonotonicPeakTransform(quant_bytes=256))
        assert est.quant_bytes == 256

    def test_bad_params_rejected_at_fit(self):
        with pytest.raises(ValueError):
            MonotonicPeakTransform(stride=0).fit([[1, 2]])
        with pytest.raises(ValueError):
            MonotonicPeakTransform(quant_bytes=-1).fit([[1, 2]])

    def test_invalid_series_rejected(self):
        with pytest.raises(InvalidTraceError):
            MonotonicPeakTransform().transform([[-5, 3]])


class TestDmpdDistance:
    def test_self_distance_matrix(self):
        profiles = [
            np.array([0.0, 50.0, 100.0]),
            np.array([0.0, 100.0, 100.0]),
        ]
        mat = DmpdDistance().fit_transform(profiles)
        assert mat.shape == (2, 2)
        assert mat[0, 0] == mat[1, 1] == 0.0
        assert mat[0, 1] == mat[1, 0] > 0.0

    def test_cross_distances(self):
        est = DmpdDistance().fit([np.array([0.0, 1.0])])
        mat = est.transform([np.array([0.0, 0.5, 1.0])])
        assert mat.shape == (1, 1)
        assert mat[0, 0] == pytest.approx(1 / 6, abs=1e-12)

    def test_rejects_short_profiles(self):
        with pytest.raises(DegenerateProfileError):
            DmpdDistance().fit([np.array([0.0])])

    def test_rejects_non_monotone(self):
        with pytest.raises(InvalidTraceError):
            DmpdDistance().fit([np.array([0.0, 2.0, 1.0])])


def test_pipeline_composition():
    pipe = Pipeline(
        [
            ("mpp", MonotonicPeakTransform(quant_bytes=0)),
            ("dist", DmpdDistance()),
        ]
    )
    series = [
        [100, 150, 120, 200],
        [100, 200, 140, 300],
        [50, 50, 50, 50],
    ]
    mat = pipe.fit_transform(series)
    assert mat.shape == (3, 3)
    assert np.allclose(mat, mat.T)
    assert np.all(mat >= 0.0) and np.all(mat <= 1.0)
