# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Same algorithms and constants as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport erfc, exp, log, fabs, NAN, M_PI, M_SQRT1_2

from ._pykernels import (
    ACT_EXP as _PY_ACT_EXP,
    ACT_NORMCDF as _PY_ACT_NORMCDF,
    ACT_SIGMOID as _PY_ACT_SIGMOID,
    DIGAMMA_COEFFS,
    DIGAMMA_SHIFT,
    GL_NODES,
    GL_WEIGHTS,
)

cnp.import_array()

cdef enum:
    ACT_EXP = 0
    ACT_NORMCDF = 1
    ACT_SIGMOID = 2
    N_GL = 48
    N_DIG = 7

assert (_PY_ACT_EXP, _PY_ACT_NORMCDF, _PY_ACT_SIGMOID) == (ACT_EXP, ACT_NORMCDF, ACT_SIGMOID)
assert GL_NODES.shape[0] == N_GL and DIGAMMA_COEFFS.shape[0] == N_DIG

cdef double _gl_x[N_GL]
cdef double _gl_w[N_GL]
cdef double _dig_c[N_DIG]
cdef double _dig_shift = DIGAMMA_SHIFT
cdef Py_ssize_t _i
for _i in range(N_GL):
    _gl_x[_i] = GL_NODES[_i]
    _gl_w[_i] = GL_WEIGHTS[_i]
for _i in range(N_DIG):
    _dig_c[_i] = DIGAMMA_COEFFS[_i]


cdef inline double _ncdf(double x) noexcept nogil:
    return 0.5 * erfc(-x * M_SQRT1_2)


cdef inline double _sigm(double x) noexcept nogil:
    cdef double e
    if x >= 0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


cdef inline double _owens_t_small(double h, double a) noexcept nogil:
    cdef double acc = 0.0, t2, hh = h * h
    cdef int k
    for k in range(N_GL):
        t2 = a * _gl_x[k]
        t2 = t2 * t2
        acc += _gl_w[k] * exp(-0.5 * hh * (1.0 + t2)) / (1.0 + t2)
    return a / (2.0 * M_PI) * acc


cdef double _owens_t(double h, double a) noexcept nogil:
    cdef double sign = 1.0, ah, ch, cah
    if a < 0:
        sign = -1.0
        a = -a
    h = fabs(h)
    if a <= 1.0:
        return sign * _owens_t_small(h, a)
    ah = a * h
    ch = _ncdf(-h)
    cah = _ncdf(-ah)
    return sign * (0.5 * ((1.0 - ch) * cah + (1.0 - cah) * ch) - _owens_t_small(ah, 1.0 / a))


cdef double _digamma(double x) noexcept nogil:
    cdef double acc = 0.0, inv2, series = 0.0
    cdef int k
    if not x > 0:
        return NAN
    while x < _dig_shift:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    for k in range(N_DIG - 1, -1, -1):
        series = series * inv2 + _dig_c[k]
    return acc + log(x) - 0.5 / x - series * inv2


def norm_cdf(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xf = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xf)
    cdef double[::1] xv = xf, ov = out
    cdef Py_ssize_t i, n = xf.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _ncdf(xv[i])
    return out.reshape(np.shape(x))


def sigmoid(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xf = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xf)
    cdef double[::1] xv = xf, ov = out
    cdef Py_ssize_t i, n = xf.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _sigm(xv[i])
    return out.reshape(np.shape(x))


def owens_t(h, a):
    hb, ab = np.broadcast_arrays(np.asarray(h, dtype=np.float64), np.asarray(a, dtype=np.float64))
    shape = hb.shape
    cdef double[::1] hv = np.ascontiguousarray(hb).ravel()
    cdef double[::1] av = np.ascontiguousarray(ab).ravel()
    out = np.empty(hv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = hv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _owens_t(hv[i], av[i])
    return out.reshape(shape)


def digamma(x):
    """Digamma for x > 0; returns nan elsewhere."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xf = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xf)
    cdef double[::1] xv = xf, ov = out
    cdef Py_ssize_t i, n = xf.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _digamma(xv[i])
    return out.reshape(np.shape(x))


cdef inline double _act(double y, int act) noexcept nogil:
    if act == ACT_NORMCDF:
        return _ncdf(y)
    if act == ACT_SIGMOID:
        return _sigm(y)
    return exp(y)


def simplex_sums(y, int act, double[::1] psum):
    """Accumulate normalised draws of ``act(y)`` row by row.

    Adds the per-class sum of normalised rows into ``psum`` in place and
    returns ``(entropy_sum, total_sum, total_sq_sum)`` where the totals are
    of the unnormalised row sums.
    """
    if act not in (ACT_EXP, ACT_NORMCDF, ACT_SIGMOID):
        raise ValueError(f"unknown activation code {act}")
    cdef double[:, ::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = yv.shape[0], C = yv.shape[1], s, c
    if psum.shape[0] != C:
        raise ValueError("psum length does not match number of classes")
    buf = np.empty(C)
    cdef double[::1] q = buf
    cdef double tot, shift, p, ent = 0.0, tsum = 0.0, tsq = 0.0
    with nogil:
        for s in range(n):
            shift = 0.0
            if act == ACT_EXP:
                shift = yv[s, 0]
                for c in range(1, C):
                    if yv[s, c] > shift:
                        shift = yv[s, c]
            tot = 0.0
            for c in range(C):
                q[c] = _act(yv[s, c] - shift, act)
                tot += q[c]
            for c in range(C):
                p = q[c] / tot
                psum[c] += p
                if p > 0:
                    ent -= p * log(p)
            if act == ACT_EXP:
                tot = tot * exp(shift)
            tsum += tot
            tsq += tot * tot
    return ent, tsum, tsq


def moment_sums(y, int act, double[::1] s1, double[::1] s2, double[::1] s4):
    """Accumulate per-class sums of ``act(y)``, its square and fourth power."""
    if act not in (ACT_EXP, ACT_NORMCDF, ACT_SIGMOID):
        raise ValueError(f"unknown activation code {act}")
    cdef double[:, ::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = yv.shape[0], C = yv.shape[1], s, c
    cdef double v
    with nogil:
        for s in range(n):
            for c in range(C):
                v = _act(yv[s, c], act)
                s1[c] += v
                v = v * v
                s2[c] += v
                s4[c] += v * v
    return None
