import numpy as np
import pytest

from logitsimplex import (
    Activation,
    LogitGaussian,
    SimplexVector,
    validate,
    validate_simplex,
)
from logitsimplex.errors import (
    CovarianceError,
    DimensionError,
    NegativeVarianceError,
    ValidationError,
)


class TestLogitGaussian:
    def test_immutable(self):
        g = LogitGaussian([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            g.mean[0] = 3.0
        assert g.num_classes == 2
        np.testing.assert_allclose(g.std, np.sqrt([1.0, 2.0]))

    def test_valid(self):
        validate(LogitGaussian([0.0, 1.0, 2.0], [0.0, 0.5, 1.0]))

    @pytest.mark.parametrize(
        "mean,var,err",
        [
            ([0.0], [1.0], DimensionError),
            ([0.0, 1.0], [1.0], DimensionError),
            ([[0.0, 1.0]], [[1.0, 1.0]], DimensionError),
            ([0.0, np.nan], [1.0, 1.0], ValidationError),
            ([0.0, 1.0], [1.0, np.inf], ValidationError),
            ([0.0, 1.0], [1.0, -1e-3], NegativeVarianceError),
        ],
    )
    def test_invalid(self, mean, var, err):
        with pytest.raises(err):
            validate(LogitGaussian(mean, var))

    def test_covariance_checks(self):
        var = [1.0, 1.0]
        validate(LogitGaussian([0, 0], var, [[1.0, 0.5], [0.5, 1.0]]))
        with pytest.raises(CovarianceError):
            validate(LogitGaussian([0, 0], var, [[1.0, 0.5], [0.4, 1.0]]))
        with pytest.raises(CovarianceError):
            validate(LogitGaussian([0, 0], var, [[2.0, 0.0], [0.0, 1.0]]))
        with pytest.raises(CovarianceError):
            validate(LogitGaussian([0, 0], var, [[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(DimensionError):
            validate(LogitGaussian([0, 0], var, np.eye(3)))

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            validate(LogitGaussian([0.0], [1.0]))


class TestActivation:
    def test_parse(self):
        assert Activation.parse("NormCDF") is Activation.NORMCDF
        assert Activation.parse(Activation.EXP) is Activation.EXP
        with pytest.raises(ValidationError):
            Activation.parse("relu")


class TestSimplex:
    def test_valid(self):
        validate_simplex(SimplexVector([0.25, 0.75]))
        validate_simplex([1.0, 0.0])

    @pytest.mark.parametrize("p", [[0.5, 0.6], [-0.1, 1.1], [np.nan, 1.0], []])
    def test_invalid(self, p):
        with pytest.raises(ValidationError):
            validate_simplex(p)

    def test_array_protocol(self):
        v = SimplexVector([0.2, 0.8])
        np.testing.assert_array_equal(np.asarray(v), [0.2, 0.8])
        assert len(v) == 2
