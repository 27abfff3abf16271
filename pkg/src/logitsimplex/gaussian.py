"""Logit-space Gaussians, probability vectors and activations."""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    CovarianceError,
    DimensionError,
    NegativeVarianceError,
    ValidationError,
)

SYMMETRY_TOL = 1e-9
PSD_JITTER = 1e-10
SIMPLEX_TOL = 1e-9


class Activation(enum.Enum):
    EXP = "exp"
    NORMCDF = "normcdf"
    SIGMOID = "sigmoid"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"unknown activation {value!r}") from None


@dataclass(frozen=True)
class LogitGaussian:
    """Gaussian over logits with diagonal variance and optional full covariance.

    Closed-form routines read only ``mean`` and ``var``; ``cov`` is used by
    the Monte-Carlo sampler.
    """

    mean: np.ndarray
    var: np.ndarray
    cov: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(self.mean))
        object.__setattr__(self, "var", _frozen(self.var))
        if self.cov is not None:
            object.__setattr__(self, "cov", _frozen(self.cov))

    @property
    def num_classes(self):
        return self.mean.shape[0]

    @property
    def std(self):
        return np.sqrt(self.var)


def _frozen(x):
    arr = np.array(x, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def validate(g):
    """Check every LogitGaussian invariant, raising a distinct error per failure."""
    mean, var = g.mean, g.var
    if mean.ndim != 1 or var.ndim != 1:
        raise DimensionError("mean and var must be one-dimensional")
    if mean.shape != var.shape:
        raise DimensionError(
            f"mean has {mean.shape[0]} classes but var has {var.shape[0]}"
        )
    if mean.shape[0] < 2:
        raise DimensionError("at least two classes are required")
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(var))):
        raise ValidationError("mean and var must be finite")
    if np.any(var < 0):
        c = int(np.argmax(var < 0))
        raise NegativeVarianceError(f"negative variance {var[c]!r} for class {c}")
    if g.cov is not None:
        _validate_cov(g.cov, var)


def _validate_cov(cov, var):
    C = var.shape[0]
    if cov.shape != (C, C):
        raise DimensionError(f"cov must be {C}x{C}, got {cov.shape}")
    if not np.all(np.isfinite(cov)):
        raise CovarianceError("cov must be finite")
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
        raise CovarianceError("cov is not symmetric")
    if np.max(np.abs(np.diag(cov) - var)) > SYMMETRY_TOL:
        raise CovarianceError("cov diagonal does not match var")
    try:
        np.linalg.cholesky(cov + PSD_JITTER * np.eye(C))
    except np.linalg.LinAlgError:
        raise CovarianceError("cov is not positive semidefinite") from None


def cholesky_factor(cov):
    C = cov.shape[0]
    try:
        return np.linalg.cholesky(cov + PSD_JITTER * np.eye(C))
    except np.linalg.LinAlgError:
        raise CovarianceError("cov is not positive semidefinite") from None


@dataclass(frozen=True)
class SimplexVector:
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(self.probs))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def __len__(self):
        return self.probs.shape[0]


def validate_simplex(p, tol=SIMPLEX_TOL):
    probs = np.asarray(getattr(p, "probs", p), dtype=np.float64)
    if probs.ndim != 1 or probs.shape[0] < 1:
        raise DimensionError("probability vector must be one-dimensional and nonempty")
    if not np.all(np.isfinite(probs)):
        raise ValidationError("probabilities must be finite")
    if np.any(probs < 0) or np.any(probs > 1):
        raise ValidationError("probabilities must lie in [0, 1]")
    if abs(probs.sum() - 1.0) > tol:
        raise ValidationError(f"probabilities sum to {probs.sum()!r}, not 1")
