"""Predictive probability vectors for logit-space Gaussians.

All routines use only the mean and the diagonal of the covariance except the
Monte-Carlo estimator, which samples the full covariance when one is given.
"""

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DegenerateInputError, ValidationError
from .gaussian import Activation, SimplexVector, validate
from .monte_carlo import McConfig, mc_simplex_stats
from .moments import PROBIT_SCALE, pushforward_means

# Constants of the Shekhovtsov-Flach approximation.
SF_L = np.pi**2 / 3.0
SF_G = SF_L / 2.0


def closed_form_predictive(g, act):
    """Normalised pushforward means ``E[act(Y_c)] / sum_c' E[act(Y_c')]``.

    The exp activation is evaluated in log space, so it stays finite where
    the unnormalised means would overflow.

    Raises:
        DegenerateInputError: if every pushforward mean underflows to zero.
    """
    validate(g)
    act = Activation.parse(act)
    if act is Activation.EXP:
        return SimplexVector(specfun.softmax(g.mean + 0.5 * g.var))
    m1 = pushforward_means(g, act)
    total = m1.sum()
    if not total > 0:
        raise DegenerateInputError("all pushforward means underflow to zero")
    return SimplexVector(m1 / total)


def mean_field_softmax_predictive(g):
    validate(g)
    z = g.mean / np.sqrt(1.0 + PROBIT_SCALE * g.var)
    return SimplexVector(np.exp(z - specfun.log_sum_exp(z)))


@dataclass(frozen=True)
class LaplaceBridge:
    predictive: SimplexVector
    gamma: np.ndarray


def laplace_bridge_predictive(g):
    """Laplace-bridge Dirichlet and its mean.

    Returns:
        LaplaceBridge with the predictive and the Dirichlet parameters.

    Raises:
        ValidationError: when the total variance is zero.
        DegenerateInputError: when a class has zero variance or a parameter
            is not positive and finite.
    """
    validate(g)
    C = g.num_classes
    total_var = g.var.sum()
    if not total_var > 0:
        raise ValidationError("Laplace bridge needs a positive total variance")
    scale = np.sqrt(C / 2.0) / total_var
    mu = np.sqrt(scale) * g.mean
    var = scale * g.var
    if np.any(var == 0):
        c = int(np.argmax(var == 0))
        raise DegenerateInputError(f"Laplace bridge needs positive variance; class {c} has none")
    # e^{mu_c} * sum_c' e^{-mu_c'} in log space
    with np.errstate(over="ignore"):
        cross = np.exp(mu + specfun.log_sum_exp(-mu))
    with np.errstate(over="ignore"):
        gamma = (1.0 - 2.0 / C + cross / C**2) / var
    bad = ~(np.isfinite(gamma) & (gamma > 0))
    if np.any(bad):
        c = int(np.argmax(bad))
        raise DegenerateInputError(
            f"Laplace bridge parameter for class {c} is not positive and finite"
        )
    return LaplaceBridge(SimplexVector(gamma / gamma.sum()), gamma)


@dataclass(frozen=True)
class ShekhovtsovFlach:
    predictive: SimplexVector
    # sum of the raw, unnormalised formula values minus one
    raw_sum_deviation: float


def shekhovtsov_flach(g):
    validate(g)
    mu = g.mean - g.mean.max()
    tau2 = g.var + SF_G
    tau2_min = tau2.min()
    s = np.sqrt(2.0 * tau2_min / SF_L)
    s_c = np.sqrt((tau2 + tau2_min) / SF_L)
    n = np.exp(mu / s_c)
    b = np.exp(mu / s)
    A = b.sum()
    rest = np.maximum(A - b, 0.0)
    with np.errstate(divide="ignore"):
        powered = np.where(rest > 0, np.exp((s / s_c) * np.log(rest)), 0.0)
    raw = n / (n + powered)
    total = raw.sum()
    return ShekhovtsovFlach(SimplexVector(raw / total), float(total - 1.0))


def shekhovtsov_flach_predictive(g):
    return shekhovtsov_flach(g).predictive


def mc_predictive(g, act, samples=1000, seed=0, budget=None):
    """Average of ``n(act(y))`` over seeded logit draws.

    ``act`` may be an :class:`Activation` or ``"softmax"``. Sampling uses the
    full covariance when ``g.cov`` is set.
    """
    cfg = McConfig(samples=samples, seed=seed, budget=budget)
    return SimplexVector(mc_simplex_stats(g, act, cfg).predictive)
