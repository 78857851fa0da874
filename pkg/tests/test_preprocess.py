import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from perceptad.preprocess import (
    FeatureStandardization,
    IntegerizationConfig,
    UnivariateCenter,
    distance_to_median,
    fit_center,
    fit_integerization,
    integerize,
    median_deviation,
    round_half_up,
    standardize,
    standardize_fit,
)

MIXED = [-0.1, -1.46, 1.2, 1.35, 2.678, 2.10293, 10]


class TestIntegerize:
    def test_mixed_precision_example(self):
        cfg = fit_integerization(MIXED, acc=2)
        assert cfg.scale_exponent == 2
        assert integerize(MIXED, cfg).tolist() == [-10, -146, 120, 135, 268, 210, 1000]

    @pytest.mark.parametrize("acc", [1, 2, 4, 7])
    def test_integers_pass_through(self, acc):
        cfg = fit_integerization([3, 7, 9], acc)
        assert cfg.scale_exponent == 0
        assert integerize([3, 7, 9], cfg).tolist() == [3, 7, 9]

    def test_one_decimal_place(self):
        cfg = fit_integerization([2.1, 8.3], 4)
        assert cfg.scale_exponent == 1
        assert integerize([2.1, 8.3], cfg).tolist() == [21, 83]

    def test_unfrozen_config_discovers_exponent(self):
        assert integerize([2.1, 8.3], IntegerizationConfig(4)).tolist() == [21, 83]

    def test_trailing_zeros_do_not_count(self):
        assert fit_integerization([1.50, 2.0, 3.10], 4).scale_exponent == 1

    def test_decimal_ties_use_shortest_repr(self):
        # 2.675 is stored as 2.67499999..., but reads as a tie
        cfg = fit_integerization([2.675], 2)
        assert integerize([2.675], cfg).tolist() == [268]
        assert integerize([-2.675], cfg).tolist() == [-267]

    def test_frozen_exponent_rounds_finer_values(self):
        cfg = fit_integerization([3, 7, 9], 4)
        assert integerize([3.4, 3.5, -3.5, 9.0001], cfg).tolist() == [3, 4, -3, 9]

    def test_non_finite_reported(self):
        with pytest.raises(ValueError, match="index 2"):
            fit_integerization([1.0, 2.0, np.nan], 4)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            IntegerizationConfig(0)
        with pytest.raises(ValueError):
            IntegerizationConfig(2, 3)

    @given(arrays(np.float64, st.integers(1, 30), elements=st.floats(-1e6, 1e6)))
    def test_deterministic(self, values):
        cfg = fit_integerization(values, 4)
        a = integerize(values, cfg)
        b = integerize(values.copy(), cfg)
        assert a.dtype == np.int64
        assert np.array_equal(a, b)
        assert np.array_equal(integerize(values, IntegerizationConfig(4)), a)


class TestMedianDeviation:
    def test_mixed_precision_example(self):
        ints = integerize(MIXED, fit_integerization(MIXED, 2))
        center = fit_center(ints)
        assert center.med == 135
        dev = median_deviation(ints, center)
        # |-10 - 135| = 145; a printed 125 for this element does not follow the rule
        assert dev.tolist() == [145, 281, 15, 0, 133, 75, 865]
        assert dev.sum() == 1514

    def test_all_equal(self):
        ints = np.full(6, 42)
        assert median_deviation(ints, fit_center(ints)).tolist() == [0] * 6

    def test_hand_example(self):
        ints = [21, 21, 23, 23, 24, 25, 26, 26, 82, 83]
        dev = median_deviation(ints, UnivariateCenter(25))
        assert dev.tolist() == [4, 4, 2, 2, 1, 0, 1, 1, 57, 58]

    def test_even_median_rounds_up(self):
        assert fit_center([21, 21, 23, 23, 24, 25, 26, 26, 82, 83]).med == 25
        assert fit_center([-25, -24]).med == -24

    @given(arrays(np.int64, st.integers(1, 41), elements=st.integers(-10**6, 10**6)))
    def test_odd_length_hits_zero(self, ints):
        if ints.size % 2 == 0:
            ints = ints[:-1]
        dev = median_deviation(ints, fit_center(ints))
        assert dev.min() == 0
        assert np.all(dev >= 0)

    @given(
        arrays(np.int64, st.integers(1, 40), elements=st.integers(-10**6, 10**6)),
        st.integers(-10**7, 10**7),
    )
    def test_translation_invariant(self, ints, c):
        a = median_deviation(ints, fit_center(ints))
        b = median_deviation(ints + c, fit_center(ints + c))
        assert np.array_equal(a, b)


def test_round_half_up():
    assert [round_half_up(x) for x in (24.5, -24.5, 0.5, -0.5, 1.49, -1.51)] == [25, -24, 1, 0, 1, -2]


class TestStandardize:
    def test_constant_column_zero(self):
        X = np.array([[1.0, 5.0], [2.0, 5.0], [4.0, 5.0]])
        fs, Xs = standardize_fit(X)
        assert np.all(Xs[:, 1] == 0)
        assert fs.sigma[1] == 1.0

    def test_two_point_column(self):
        fs, Xs = standardize_fit(np.array([[0.0], [2.0]]))
        assert fs.mu[0] == 1.0
        assert fs.sigma[0] == 1.0
        assert Xs[:, 0].tolist() == [-1.0, 1.0]

    @given(arrays(np.float64, (12, 3), elements=st.floats(-1e3, 1e3)))
    def test_unit_population_std(self, X):
        fs, Xs = standardize_fit(X)
        for j in range(3):
            if np.ptp(X[:, j]) > 1e-6 * max(1.0, np.abs(X[:, j]).max()):
                assert Xs[:, j].std() == pytest.approx(1.0, rel=1e-9)

    def test_frozen_reproduces_training(self):
        X = np.random.default_rng(3).normal(size=(50, 4))
        fs, Xs = standardize_fit(X)
        assert np.array_equal(standardize(X, fs), Xs)

    def test_width_mismatch(self):
        fs, _ = standardize_fit(np.eye(3))
        with pytest.raises(ValueError):
            standardize(np.ones((2, 2)), fs)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            standardize_fit(np.zeros((0, 3)))


class TestDistance:
    fs = FeatureStandardization(np.zeros(2), np.ones(2), np.array([1.0, 1.0]))

    def test_at_median(self):
        assert distance_to_median([[1.0, 1.0]], self.fs).tolist() == [0.0]

    @pytest.mark.parametrize("metric,expected", [("euclidean", 5.0), ("manhattan", 7.0), ("chebyshev", 4.0)])
    def test_offsets(self, metric, expected):
        assert distance_to_median([[4.0, -3.0]], self.fs, metric).tolist() == [expected]

    def test_unknown_metric(self):
        with pytest.raises(ValueError, match="unknown metric"):
            distance_to_median([[0.0, 0.0]], self.fs, "cosine")

    @given(arrays(np.float64, (3, 2), elements=st.floats(-100, 100)))
    def test_metric_axioms(self, P):
        a, b, c = P
        d = lambda u, v: distance_to_median([u], FeatureStandardization(np.zeros(2), np.ones(2), v))[0]
        assert d(a, b) == pytest.approx(d(b, a))
        assert d(a, c) <= d(a, b) + d(b, c) + 1e-9
