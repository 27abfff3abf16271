"""First and second moments of Gaussian pushforwards through an activation.

For ``Q = act(Y)`` with ``Y ~ N(mu, var)`` these return ``(E[Q], E[Q^2])``.
Exp and normCDF are exact; sigmoid uses the probit approximation for the
mean and Daunizeau's semi-analytical approximation for the second moment.
"""

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import MomentOverflowError, NegativeVarianceError
from .gaussian import Activation, validate

PROBIT_SCALE = np.pi / 8.0
MOMENT_FLOOR = 1e-15
_LOG_MAX = np.log(np.finfo(np.float64).max)


@dataclass(frozen=True)
class MomentPair:
    m1: np.ndarray
    m2: np.ndarray
    # True where the sigmoid second moment was raised to m1**2 + MOMENT_FLOOR.
    floored: np.ndarray = None

    def __post_init__(self):
        m1 = np.asarray(self.m1, dtype=np.float64)
        m2 = np.asarray(self.m2, dtype=np.float64)
        floored = (
            np.zeros(m1.shape, dtype=bool)
            if self.floored is None
            else np.asarray(self.floored, dtype=bool)
        )
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)
        object.__setattr__(self, "floored", floored)

    @property
    def variance(self):
        return self.m2 - self.m1**2


def _check_var(var):
    if np.any(np.asarray(var) < 0):
        raise NegativeVarianceError("variance must be nonnegative")


def exp_moments(mu, var):
    """Lognormal moments ``exp(mu + var/2)`` and ``exp(2 mu + 2 var)``.

    Raises:
        MomentOverflowError: when the second moment leaves double range.
    """
    mu = np.asarray(mu, dtype=np.float64)
    var = np.asarray(var, dtype=np.float64)
    _check_var(var)
    log_m2 = 2.0 * mu + 2.0 * var
    if np.any(log_m2 > _LOG_MAX):
        idx = int(np.argmax(log_m2 > _LOG_MAX)) if log_m2.ndim else None
        raise MomentOverflowError(
            "exp second moment overflows: mu + 2 var is too large", class_index=idx
        )
    return _out(np.exp(mu + 0.5 * var), np.exp(log_m2), mu)


def normcdf_moments(mu, var):
    mu = np.asarray(mu, dtype=np.float64)
    var = np.asarray(var, dtype=np.float64)
    _check_var(var)
    h = mu / np.sqrt(1.0 + var)
    m1 = specfun.norm_cdf(h)
    m2 = m1 - 2.0 * specfun.owens_t(h, 1.0 / np.sqrt(1.0 + 2.0 * var))
    # deep lower tail: the subtraction cancels, but m2 >= m1^2 always holds
    m2 = np.maximum(m2, m1 * m1)
    return _out(m1, m2, mu)


def _sigmoid_parts(mu, var):
    mu = np.asarray(mu, dtype=np.float64)
    var = np.asarray(var, dtype=np.float64)
    _check_var(var)
    s = np.sqrt(1.0 + PROBIT_SCALE * var)
    r = np.asarray(specfun.sigmoid(mu / s))
    m2 = r - r * (1.0 - r) / s
    floored = m2 < r * r
    m2 = np.where(floored, r * r + MOMENT_FLOOR, m2)
    return r, m2, floored


def sigmoid_moments(mu, var):
    r, m2, _ = _sigmoid_parts(mu, var)
    return _out(r, m2, mu)


def _out(m1, m2, like):
    if np.ndim(like) == 0:
        return float(m1), float(m2)
    return m1, m2


def pushforward_moments(g, act):
    """Per-class moments of ``act(Y_c)`` from the mean and diagonal of g."""
    validate(g)
    act = Activation.parse(act)
    if act is Activation.EXP:
        m1, m2 = exp_moments(g.mean, g.var)
        floored = None
    elif act is Activation.NORMCDF:
        m1, m2 = normcdf_moments(g.mean, g.var)
        floored = None
    else:
        m1, m2, floored = _sigmoid_parts(g.mean, g.var)
    return MomentPair(m1, m2, floored)


def pushforward_means(g, act):
    """First moments only; cheaper than :func:`pushforward_moments`."""
    validate(g)
    act = Activation.parse(act)
    if act is Activation.EXP:
        return np.exp(g.mean + 0.5 * g.var)
    if act is Activation.NORMCDF:
        return specfun.norm_cdf(g.mean / np.sqrt(1.0 + g.var))
    return specfun.sigmoid(g.mean / np.sqrt(1.0 + PROBIT_SCALE * g.var))
