"""Scalar special functions.

Every function accepts scalars or arrays and returns the same shape; scalars
come back as Python floats.
"""

import numpy as np

from . import _kernels
from .errors import DomainError


def _wrap(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


def norm_cdf(x):
    """Standard normal CDF via ``erfc``; accurate in both tails."""
    return _wrap(_kernels.norm_cdf(x), x)


def sigmoid(x):
    """Logistic sigmoid, evaluated without overflow for any finite x."""
    return _wrap(_kernels.sigmoid(x), x)


def owens_t(h, a):
    """Owen's T function T(h, a).

    Computed by 48-point Gauss-Legendre quadrature of the defining integral
    for ``|a| <= 1``; larger ``|a|`` is reduced with the reciprocal identity.
    """
    out = _kernels.owens_t(h, a)
    if np.ndim(h) == 0 and np.ndim(a) == 0:
        return float(out)
    return out


def digamma(x):
    """Digamma function on x > 0.

    Raises:
        DomainError: if any argument is not strictly positive.
    """
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(arr > 0):
        raise DomainError("digamma requires x > 0")
    return _wrap(_kernels.digamma(arr), x)


def log_sum_exp(v, axis=None):
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("log_sum_exp of an empty vector")
    m = np.max(v, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(v - m), axis=axis, keepdims=True)) + m
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


def softmax(v):
    v = np.asarray(v, dtype=np.float64)
    e = np.exp(v - v.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)
