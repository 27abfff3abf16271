"""Moment-matched Dirichlet and Beta distributions and uncertainty estimators."""

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DegenerateInputError, MatchingError, ValidationError
from .gaussian import SimplexVector, validate_simplex
from .monte_carlo import McConfig, mc_simplex_stats

VARIANCE_FLOOR = 1e-15


@dataclass(frozen=True)
class DirichletParams:
    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=np.float64)
        if gamma.ndim != 1 or gamma.shape[0] < 1:
            raise ValidationError("gamma must be a nonempty vector")
        if not np.all(np.isfinite(gamma) & (gamma > 0)):
            raise ValidationError("Dirichlet parameters must be positive and finite")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)

    @property
    def concentration(self):
        return float(self.gamma.sum())


def match_dirichlet(m):
    """Dirichlet whose moments match the normalised pushforward moments.

    The precision is the geometric mean over classes of the per-class
    estimates ``(m1 S - m2) / (m2 - m1^2)`` with ``S = max(sum m1, 1)``,
    taken in log space; the mean is ``m1 / sum m1``.

    Raises:
        MatchingError: if ``m1 S - m2 <= 0`` for some class.
    """
    m1 = np.asarray(m.m1, dtype=np.float64)
    m2 = np.asarray(m.m2, dtype=np.float64)
    total = m1.sum()
    S = max(total, 1.0)
    num = m1 * S - m2
    if np.any(~(num > 0)):
        c = int(np.argmax(~(num > 0)))
        raise MatchingError(
            f"moment matching failed for class {c}: m1*S - m2 = {num[c]!r}", class_index=c
        )
    den = np.maximum(m2 - m1 * m1, VARIANCE_FLOOR)
    log_precision = np.mean(np.log(num) - np.log(den))
    return DirichletParams(np.exp(log_precision) * (m1 / total))


def match_beta(m1, m2):
    """Per-class Beta parameters ``(alpha, beta)`` matching mean and second moment.

    Raises:
        DegenerateInputError: unless ``0 < m1 < 1`` and ``m1^2 < m2 < m1``.
    """
    m1_arr = np.asarray(m1, dtype=np.float64)
    m2_arr = np.asarray(m2, dtype=np.float64)
    ok = (m1_arr > 0) & (m1_arr < 1) & (m2_arr > m1_arr**2) & (m2_arr < m1_arr)
    if not np.all(ok):
        raise DegenerateInputError("Beta matching needs 0 < m1 < 1 and m1^2 < m2 < m1")
    k = (m1_arr - m2_arr) / (m2_arr - m1_arr**2)
    alpha, beta = k * m1_arr, k * (1.0 - m1_arr)
    if np.ndim(m1) == 0 and np.ndim(m2) == 0:
        return float(alpha), float(beta)
    return alpha, beta


def dirichlet_mean(d):
    return SimplexVector(d.gamma / d.gamma.sum())


def predictive_entropy(p):
    probs = np.asarray(getattr(p, "probs", p), dtype=np.float64)
    validate_simplex(probs)
    nz = probs[probs > 0]
    return float(-np.sum(nz * np.log(nz)))


def max_probability(p):
    probs = np.asarray(getattr(p, "probs", p), dtype=np.float64)
    validate_simplex(probs)
    return float(probs.max())


def dirichlet_expected_entropy(d):
    g = d.gamma
    g0 = g.sum()
    dig = specfun.digamma(np.append(g + 1.0, g0 + 1.0))
    return float(-np.sum(g / g0 * (dig[:-1] - dig[-1])))


def dirichlet_mutual_information(d):
    g = d.gamma
    g0 = g.sum()
    dig = specfun.digamma(np.append(g + 1.0, g0 + 1.0))
    return float(np.sum(g / g0 * (-np.log(g) + np.log(g0) + dig[:-1] - dig[-1])))


def mc_expected_entropy(g, act, samples=1000, seed=0):
    stats = mc_simplex_stats(g, act, McConfig(samples=samples, seed=seed))
    return float(stats.expected_entropy)


def mc_mutual_information(g, act, samples=1000, seed=0):
    """Entropy of the averaged draw minus the average per-draw entropy."""
    stats = mc_simplex_stats(g, act, McConfig(samples=samples, seed=seed))
    p = stats.predictive
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)) - stats.expected_entropy)
