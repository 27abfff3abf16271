import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logitsimplex import (
    LogitGaussian,
    McConfig,
    MomentOverflowError,
    NegativeVarianceError,
    exp_moments,
    mc_moment_oracle,
    normcdf_moments,
    pushforward_moments,
    sigmoid_moments,
)
from logitsimplex.moments import MOMENT_FLOOR, pushforward_means

# E[Phi(Y)], Y ~ N(1, 0.5), by mpmath quadrature at 30 digits.
E_PHI_1_HALF = 0.792891910878737442


class TestAnchors:
    def test_exp(self):
        m1, m2 = exp_moments(1.0, 2.0)
        assert m1 == pytest.approx(math.e**2, rel=1e-14)
        assert m2 == pytest.approx(math.e**6, rel=1e-14)

    def test_normcdf_standard(self):
        m1, m2 = normcdf_moments(0.0, 1.0)
        assert abs(m1 - 0.5) < 1e-15
        assert abs(m2 - 1.0 / 3.0) < 1e-12

    def test_normcdf_zero_variance(self):
        m1, m2 = normcdf_moments(0.0, 0.0)
        assert m1 == 0.5
        assert abs(m2 - 0.25) < 1e-14

    def test_normcdf_quadrature(self):
        m1, _ = normcdf_moments(1.0, 0.5)
        assert abs(m1 - E_PHI_1_HALF) < 1e-12

    def test_sigmoid_zero_variance(self):
        m1, m2 = sigmoid_moments(0.3, 0.0)
        r = 1 / (1 + math.exp(-0.3))
        assert m1 == pytest.approx(r, rel=1e-15)
        # variance would be exactly zero, so the floor fires
        assert m2 >= m1 * m1

    def test_sigmoid_floor_flag(self):
        g = LogitGaussian([0.0, 1.0], [0.0, 1.0])
        m = pushforward_moments(g, "sigmoid")
        assert np.all(m.m2 >= m.m1**2)
        np.testing.assert_allclose(m.variance[m.floored], MOMENT_FLOOR, atol=1e-16)


class TestErrors:
    def test_exp_overflow(self):
        with pytest.raises(MomentOverflowError) as info:
            pushforward_moments(LogitGaussian([0.0, 200.0], [1.0, 200.0]), "exp")
        assert info.value.class_index == 1

    def test_negative_variance(self):
        with pytest.raises(NegativeVarianceError):
            normcdf_moments(0.0, -1.0)


class TestProperties:
    @given(st.floats(-10, 10), st.floats(0, 20))
    def test_normcdf_moment_order(self, mu, var):
        m1, m2 = normcdf_moments(mu, var)
        assert 0 <= m2 <= m1 <= 1
        assert m2 >= m1 * m1 - 1e-15

    @given(st.floats(-10, 10), st.floats(0, 20))
    def test_sigmoid_moment_order(self, mu, var):
        m1, m2 = sigmoid_moments(mu, var)
        assert 0 <= m2 <= m1 <= 1
        assert m2 >= m1 * m1

    @given(st.floats(-10, 10), st.floats(0, 10))
    def test_normcdf_mean_symmetry(self, mu, var):
        a, _ = normcdf_moments(mu, var)
        b, _ = normcdf_moments(-mu, var)
        assert abs(a + b - 1) < 1e-14

    def test_means_shortcut_matches(self):
        g = LogitGaussian([-1.0, 0.0, 2.0], [0.1, 1.0, 3.0])
        for act in ("exp", "normcdf", "sigmoid"):
            np.testing.assert_allclose(pushforward_means(g, act), pushforward_moments(g, act).m1)


class TestAgainstOracle:
    @pytest.mark.parametrize("act", ["exp", "normcdf"])
    def test_within_four_se(self, act):
        g = LogitGaussian([-0.5, 0.0, 0.4, 1.0], [0.05, 0.3, 0.5, 1.0])
        est = mc_moment_oracle(g, act, McConfig(samples=200_000, seed=7))
        m = pushforward_moments(g, act)
        assert np.all(np.abs(est.moments.m1 - m.m1) <= 4 * est.se1)
        assert np.all(np.abs(est.moments.m2 - m.m2) <= 4 * est.se2)

    def test_sigmoid_close(self):
        g = LogitGaussian([-1.0, 0.0, 1.0], [1.0, 1.0, 1.0])
        est = mc_moment_oracle(g, "sigmoid", McConfig(samples=200_000, seed=3))
        m = pushforward_moments(g, "sigmoid")
        np.testing.assert_allclose(m.m1, est.moments.m1, atol=2e-2)
        np.testing.assert_allclose(m.m2, est.moments.m2, atol=2e-2)
