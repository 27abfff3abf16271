"""Select the kernel backend at import time.

The compiled extension is preferred. Setting ``LOGITSIMPLEX_PURE_PYTHON=1``
forces the numpy fallback.
"""

import os

from . import _pykernels

ACT_EXP = _pykernels.ACT_EXP
ACT_NORMCDF = _pykernels.ACT_NORMCDF
ACT_SIGMOID = _pykernels.ACT_SIGMOID

_impl = _pykernels
BACKEND = "python"
if os.environ.get("LOGITSIMPLEX_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

norm_cdf = _impl.norm_cdf
sigmoid = _impl.sigmoid
owens_t = _impl.owens_t
digamma = _impl.digamma
simplex_sums = _impl.simplex_sums
moment_sums = _impl.moment_sums


def available_backends():
    """Map backend name to kernel module for every backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
