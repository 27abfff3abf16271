import numpy as np
import pytest

from logitsimplex import LogitGaussian, McConfig, mc_simplex_stats, sample_logits
from logitsimplex.errors import ValidationError
from logitsimplex.monte_carlo import CHUNK_ELEMENTS, derive_seed, mc_moment_oracle


class TestConfig:
    def test_budget_samples(self):
        for C in (2, 3, 7, 1000, 10_001):
            assert McConfig(budget=10_000).effective_samples(C) == -(-10_000 // C)

    def test_budget_counter(self):
        g = LogitGaussian(np.zeros(7), np.ones(7))
        stats = mc_simplex_stats(g, "normcdf", McConfig(budget=100))
        assert stats.n_samples == 15
        assert sample_logits(g, McConfig(budget=100)).shape == (15, 7)

    @pytest.mark.parametrize("kw", [{"samples": 0}, {"budget": 0}, {"seed": -1}])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            McConfig(**kw)


class TestDeterminism:
    def test_same_seed_bit_identical(self):
        g = LogitGaussian([0.0, 1.0, -1.0], [0.3, 1.0, 2.0])
        a = mc_simplex_stats(g, "sigmoid", McConfig(samples=5000, seed=9))
        b = mc_simplex_stats(g, "sigmoid", McConfig(samples=5000, seed=9))
        assert a.predictive.tobytes() == b.predictive.tobytes()
        assert a.expected_entropy == b.expected_entropy

    def test_seed_matters(self):
        g = LogitGaussian([0.0, 1.0], [1.0, 1.0])
        a = sample_logits(g, McConfig(samples=10, seed=1))
        b = sample_logits(g, McConfig(samples=10, seed=2))
        assert not np.array_equal(a, b)

    def test_chunking_is_invisible(self):
        # more rows than one chunk holds
        C = 4
        n = CHUNK_ELEMENTS // C + 17
        g = LogitGaussian(np.zeros(C), np.ones(C))
        y = sample_logits(g, McConfig(samples=n, seed=3))
        assert y.shape == (n, C)
        assert np.isclose(y.mean(), 0.0, atol=5e-3)

    def test_derive_seed(self):
        assert derive_seed(0, 1, 2) == derive_seed(0, 1, 2)
        assert len({derive_seed(0, 1, 2), derive_seed(0, 2, 1), derive_seed(1, 1, 2)}) == 3


class TestSampling:
    def test_covariance_used(self):
        cov = np.array([[1.0, 0.9], [0.9, 1.0]])
        g = LogitGaussian([0.0, 0.0], [1.0, 1.0], cov)
        y = sample_logits(g, McConfig(samples=200_000, seed=0))
        np.testing.assert_allclose(np.cov(y.T), cov, atol=1e-2)

    def test_zero_variance_exact(self):
        g = LogitGaussian([0.0, 1.0], [0.0, 0.0])
        y = sample_logits(g, McConfig(samples=5))
        np.testing.assert_array_equal(y, np.tile([0.0, 1.0], (5, 1)))

    def test_oracle_standard_errors_shrink(self):
        g = LogitGaussian([0.0, 0.0], [1.0, 1.0])
        a = mc_moment_oracle(g, "normcdf", McConfig(samples=1000))
        b = mc_moment_oracle(g, "normcdf", McConfig(samples=100_000))
        assert np.all(b.se1 < a.se1 / 5)

    def test_total_moments(self):
        g = LogitGaussian([0.0, 0.0], [0.0, 0.0])
        s = mc_simplex_stats(g, "exp", McConfig(samples=10))
        assert s.total_mean == pytest.approx(2.0) and s.total_var == pytest.approx(0.0, abs=1e-12)
