import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from perceptad.baselines import (
    BASELINES,
    IqrModel,
    ModifiedZModel,
    ZScoreModel,
    iqr_fit_predict,
    modified_zscore_fit_predict,
    zscore_fit_predict,
)
from perceptad.datasets import IGLEWICZ, LEAD, TEMPERATURES, TEMPERATURES_EXTENDED


def flagged(fn, data):
    return sorted(np.asarray(data)[fn(data).flags].tolist())


@pytest.mark.parametrize(
    "data,z,mz,iqr",
    [
        (IGLEWICZ, [], [8.2, 8.3], [8.2, 8.3]),
        (TEMPERATURES, [55], [50, 55], [50, 55]),
        (TEMPERATURES_EXTENDED, [50, 55], [24, 24, 24, 24, 26, 26, 30, 50, 55], [50, 55]),
        (LEAD, [], [], [73]),
    ],
)
def test_reference_flags(data, z, mz, iqr):
    assert flagged(zscore_fit_predict, data) == z
    assert flagged(modified_zscore_fit_predict, data) == mz
    assert flagged(iqr_fit_predict, data) == iqr


class TestZScore:
    def test_population_std(self):
        m = ZScoreModel.fit([0, 0, 0, 0, 100])
        assert m.std == pytest.approx(40.0)
        det = m.predict([0, 0, 0, 0, 100])
        assert det.scores[-1] == pytest.approx(2.0)
        assert not det.flags.any()

    def test_constant(self):
        m = ZScoreModel.fit([3.0] * 5)
        assert m.cutoffs() is None
        assert not m.predict([3.0, 9.0]).flags.any()

    def test_cutoffs(self):
        lo, hi = ZScoreModel.fit(TEMPERATURES).cutoffs()
        assert hi == pytest.approx(51.40, abs=0.01)
        assert lo < 0


class TestModifiedZ:
    def test_known_values(self):
        m = ModifiedZModel.fit([1, 2, 3, 4, 100])
        assert (m.median, m.mad) == (3.0, 1.0)
        assert m.score([100])[0] == pytest.approx(0.6745 * 97)

    def test_zero_mad(self):
        m = ModifiedZModel.fit([5, 5, 5, 5, 9])
        assert m.mad == 0
        assert m.cutoffs() is None
        assert not m.predict([5, 9]).flags.any()

    def test_cutoffs(self):
        assert ModifiedZModel.fit(TEMPERATURES).cutoffs()[1] == pytest.approx(36.57, abs=0.01)


class TestIqr:
    def test_fences(self):
        m = IqrModel.fit([1, 2, 3, 4, 5, 6, 7, 8])
        assert (m.q1, m.q3) == (2.75, 6.25)
        assert m.cutoffs() == pytest.approx((-2.5, 11.5))

    def test_score_is_distance_past_fence(self):
        m = IqrModel.fit([1, 2, 3, 4, 5, 6, 7, 8])
        assert m.score([12.0, -3.0, 5.0]).tolist() == pytest.approx([0.5, 0.5, 0.0])

    def test_temperature_fence(self):
        assert IqrModel.fit(TEMPERATURES).cutoffs()[1] == pytest.approx(31.5)

    def test_boundary_not_flagged(self):
        m = IqrModel.fit([1, 2, 3, 4, 5, 6, 7, 8])
        assert not m.predict([11.5]).flags[0]

    def test_too_small(self):
        with pytest.raises(ValueError):
            IqrModel.fit([1, 2, 3])


@pytest.mark.parametrize("cls", list(BASELINES.values()))
def test_rejects_bad_input(cls):
    with pytest.raises(ValueError):
        cls.fit(np.ones((5, 2)))
    with pytest.raises(ValueError):
        cls.fit([1.0, 2.0, np.inf, 4.0, 5.0])


@pytest.mark.parametrize("cls", list(BASELINES.values()))
@given(st.lists(st.floats(-1e4, 1e4), min_size=4, max_size=50), st.randoms())
def test_flags_do_not_depend_on_order(cls, values, rnd):
    perm = list(range(len(values)))
    rnd.shuffle(perm)
    a = cls.fit(values).predict(values).flags
    shuffled = [values[i] for i in perm]
    b = cls.fit(shuffled).predict(shuffled).flags
    assert a[perm].tolist() == b.tolist()
