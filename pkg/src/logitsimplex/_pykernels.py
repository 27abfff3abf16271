"""Numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled kernels are tested against. Algorithms and constants
are shared with ``_ckernels.pyx``; keep the two in step.
"""

import numpy as np
from scipy.special import ndtr

# Activation codes understood by the simplex/moment kernels.
ACT_EXP = 0
ACT_NORMCDF = 1
ACT_SIGMOID = 2

# 48-point Gauss-Legendre rule mapped to [0, 1].
_gl_x, _gl_w = np.polynomial.legendre.leggauss(48)
GL_NODES = np.ascontiguousarray(0.5 * (_gl_x + 1.0))
GL_WEIGHTS = np.ascontiguousarray(0.5 * _gl_w)

DIGAMMA_SHIFT = 6.0
# Bernoulli-number coefficients B_2k / (2k) for the asymptotic series.
DIGAMMA_COEFFS = np.array(
    [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ]
)

_TWO_PI = 2.0 * np.pi


def norm_cdf(x):
    return ndtr(np.asarray(x, dtype=np.float64))


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _owens_t_small_a(h, a):
    # a in [0, 1], h >= 0; integrand after t = a*u substitution.
    t2 = (a[..., None] * GL_NODES) ** 2
    f = np.exp(-0.5 * (h * h)[..., None] * (1.0 + t2)) / (1.0 + t2)
    return a / _TWO_PI * (f @ GL_WEIGHTS)


def owens_t(h, a):
    h, a = np.broadcast_arrays(
        np.asarray(h, dtype=np.float64), np.asarray(a, dtype=np.float64)
    )
    sign = np.where(a < 0, -1.0, 1.0)
    h = np.abs(h)
    a = np.abs(a)
    out = np.zeros(h.shape)
    small = a <= 1.0
    if np.any(small):
        out[small] = _owens_t_small_a(h[small], a[small])
    big = ~small
    if np.any(big):
        hb, ab = h[big], a[big]
        ah = ab * hb
        ch, cah = ndtr(-hb), ndtr(-ah)
        # T(h,a) = (Phi(h) + Phi(ah))/2 - Phi(h)Phi(ah) - T(ah, 1/a), h >= 0
        out[big] = 0.5 * ((1.0 - ch) * cah + (1.0 - cah) * ch) - _owens_t_small_a(
            ah, 1.0 / ab
        )
    return sign * out


def digamma(x):
    """Digamma for x > 0; returns nan elsewhere."""
    x = np.array(x, dtype=np.float64)
    out = np.zeros_like(x)
    bad = ~(x > 0)
    x = np.where(bad, 1.0, x)
    while True:
        low = x < DIGAMMA_SHIFT
        if not np.any(low):
            break
        out[low] -= 1.0 / x[low]
        x = np.where(low, x + 1.0, x)
    inv2 = 1.0 / (x * x)
    series = np.zeros_like(x)
    for c in DIGAMMA_COEFFS[::-1]:
        series = series * inv2 + c
    out += np.log(x) - 0.5 / x - series * inv2
    out[bad] = np.nan
    return out


def _activate(y, act):
    if act == ACT_EXP:
        q = np.exp(y - y.max(axis=1, keepdims=True))
    elif act == ACT_NORMCDF:
        q = ndtr(y)
    elif act == ACT_SIGMOID:
        q = sigmoid(y)
    else:
        raise ValueError(f"unknown activation code {act}")
    return q


def simplex_sums(y, act, psum):
    """Accumulate normalised draws of ``act(y)`` row by row.

    Adds the per-class sum of normalised rows into ``psum`` in place and
    returns ``(entropy_sum, total_sum, total_sq_sum)`` where the totals are
    of the unnormalised row sums.
    """
    y = np.asarray(y, dtype=np.float64)
    q = _activate(y, act)
    tot = q.sum(axis=1)
    p = q / tot[:, None]
    psum += p.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    ent = -plogp.sum()
    with np.errstate(over="ignore"):
        if act == ACT_EXP:
            tot = tot * np.exp(y.max(axis=1))
        return float(ent), float(tot.sum()), float((tot * tot).sum())


def moment_sums(y, act, s1, s2, s4):
    """Accumulate per-class sums of ``act(y)``, its square and fourth power."""
    y = np.asarray(y, dtype=np.float64)
    if act == ACT_EXP:
        q = np.exp(y)
    else:
        q = _activate(y, act)
    s1 += q.sum(axis=0)
    q2 = q * q
    s2 += q2.sum(axis=0)
    s4 += (q2 * q2).sum(axis=0)
