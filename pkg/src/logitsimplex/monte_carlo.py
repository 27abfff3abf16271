"""Seeded Monte-Carlo oracle for logit-space Gaussians.

Random streams are PCG64 bit generators seeded from ``numpy.random.SeedSequence``
and normal variates use numpy's ziggurat ``standard_normal``. Sub-streams for
benchmark datasets are derived by hashing index tuples into the seed
sequence, so results do not depend on evaluation order or thread count.
Logits are drawn in fixed-size row chunks that depend only on C.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ValidationError
from .gaussian import Activation, cholesky_factor, validate
from .moments import MomentPair

CHUNK_ELEMENTS = 1 << 20

_ACT_CODES = {
    Activation.EXP: _kernels.ACT_EXP,
    Activation.NORMCDF: _kernels.ACT_NORMCDF,
    Activation.SIGMOID: _kernels.ACT_SIGMOID,
}


def activation_code(act):
    """Kernel code for an activation; ``"softmax"`` is normalised exp."""
    if isinstance(act, str) and act.lower() == "softmax":
        return _kernels.ACT_EXP
    return _ACT_CODES[Activation.parse(act)]


def derive_seed(master_seed, *keys):
    """64-bit seed for the sub-stream identified by ``keys``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


@dataclass(frozen=True)
class McConfig:
    samples: int = 1000
    seed: int = 0
    budget: Optional[int] = None

    def __post_init__(self):
        if self.budget is not None:
            if self.budget < 1:
                raise ValidationError("budget must be at least 1")
        elif self.samples < 1:
            raise ValidationError("samples must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")

    def effective_samples(self, num_classes):
        if self.budget is not None:
            return math.ceil(self.budget / num_classes)
        return self.samples


def _chunks(g, n, rng):
    C = g.num_classes
    rows = max(1, CHUNK_ELEMENTS // C)
    chol = cholesky_factor(g.cov) if g.cov is not None else None
    std = g.std
    done = 0
    while done < n:
        k = min(rows, n - done)
        z = rng.standard_normal((k, C))
        if chol is not None:
            y = z @ chol.T
            y += g.mean
        else:
            y = z
            y *= std
            y += g.mean
        yield y
        done += k


def sample_logits(g, cfg):
    """Draw an ``(n, C)`` matrix of logits; n follows the config's sample rule."""
    validate(g)
    n = cfg.effective_samples(g.num_classes)
    return np.concatenate(list(_chunks(g, n, make_rng(cfg.seed))), axis=0)


@dataclass(frozen=True)
class MomentEstimate:
    moments: MomentPair
    se1: np.ndarray
    se2: np.ndarray
    n_samples: int


def mc_moment_oracle(g, act, cfg):
    """Sample per-class ``E[act(Y)]``, ``E[act(Y)^2]`` with standard errors."""
    validate(g)
    code = activation_code(act)
    C = g.num_classes
    n = cfg.effective_samples(C)
    s1, s2, s4 = np.zeros(C), np.zeros(C), np.zeros(C)
    for y in _chunks(g, n, make_rng(cfg.seed)):
        _kernels.moment_sums(y, code, s1, s2, s4)
    m1, m2, m4 = s1 / n, s2 / n, s4 / n
    denom = max(n - 1, 1)
    var1 = np.maximum(m2 - m1 * m1, 0.0) * n / denom
    var2 = np.maximum(m4 - m2 * m2, 0.0) * n / denom
    return MomentEstimate(MomentPair(m1, m2), np.sqrt(var1 / n), np.sqrt(var2 / n), n)


@dataclass(frozen=True)
class SimplexStats:
    """Sample statistics of normalised draws ``P = act(Y) / sum(act(Y))``."""

    predictive: np.ndarray
    expected_entropy: float
    # Mean and variance of the unnormalised total sum_c act(Y_c).
    total_mean: float
    total_var: float
    n_samples: int


def mc_simplex_stats(g, act, cfg):
    validate(g)
    code = activation_code(act)
    C = g.num_classes
    n = cfg.effective_samples(C)
    psum = np.zeros(C)
    ent = tsum = tsq = 0.0
    for y in _chunks(g, n, make_rng(cfg.seed)):
        e, t, t2 = _kernels.simplex_sums(y, code, psum)
        ent += e
        tsum += t
        tsq += t2
    pred = psum / n
    pred /= pred.sum()
    tmean = tsum / n
    tvar = max(tsq / n - tmean * tmean, 0.0)
    return SimplexStats(pred, ent / n, tmean, tvar, n)
