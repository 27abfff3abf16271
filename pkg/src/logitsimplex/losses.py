"""Per-example losses evaluated on given logits. No gradients, no training."""

import numpy as np
from scipy.special import log_ndtr

from . import specfun
from .errors import MomentOverflowError, ValidationError
from .gaussian import Activation

_LOG_MAX = np.log(np.finfo(np.float64).max)


def _label(logits, label):
    logits = np.asarray(logits, dtype=np.float64)
    if logits.ndim != 1:
        raise ValidationError("logits must be a vector")
    if not 0 <= int(label) < logits.shape[0] or int(label) != label:
        raise ValidationError(f"label {label!r} out of range for {logits.shape[0]} classes")
    return logits, int(label)


def ce_loss(logits, label):
    logits, label = _label(logits, label)
    return float(specfun.log_sum_exp(logits) - logits[label])


def _log_act(f, act):
    """``log act(f)`` and ``log(1 - act(f))`` without cancellation."""
    if act is Activation.SIGMOID:
        return -np.logaddexp(0.0, -f), -np.logaddexp(0.0, f)
    if act is Activation.NORMCDF:
        return log_ndtr(f), log_ndtr(-f)
    raise ValidationError("BCE needs a normcdf or sigmoid activation")


def bce_loss(logits, label, act, mean_over_classes=False):
    """Class-wise binary cross-entropy, summed over classes by default."""
    logits, label = _label(logits, label)
    act = Activation.parse(act)
    log_p, log_1mp = _log_act(logits, act)
    target = np.zeros(logits.shape[0])
    target[label] = 1.0
    per_class = -(target * log_p + (1.0 - target) * log_1mp)
    return float(per_class.mean() if mean_over_classes else per_class.sum())


def het_bce_loss(m, label, mean_over_classes=False):
    """Binary cross-entropy on pushforward means ``m.m1`` (or a bare vector)."""
    m1 = np.asarray(getattr(m, "m1", m), dtype=np.float64)
    m1, label = _label(m1, label)
    if np.any(~((m1 > 0) & (m1 < 1))):
        raise ValidationError("pushforward means must lie strictly inside (0, 1)")
    target = np.zeros(m1.shape[0])
    target[label] = 1.0
    per_class = -(target * np.log(m1) + (1.0 - target) * np.log1p(-m1))
    return float(per_class.mean() if mean_over_classes else per_class.sum())


def regularised_ce_loss(logits, label, lam, variant="log"):
    """Cross-entropy plus a penalty pulling ``sum exp(logits)`` towards one.

    ``variant="quadratic"`` penalises ``(sum e^f - 1)^2``; ``variant="log"``
    penalises ``(log sum e^f)^2``.

    Raises:
        MomentOverflowError: if the quadratic penalty overflows.
    """
    if lam < 0:
        raise ValidationError("lambda must be nonnegative")
    logits, label = _label(logits, label)
    lse = specfun.log_sum_exp(logits)
    base = lse - logits[label]
    if variant == "log":
        penalty = lse * lse
    elif variant == "quadratic":
        if lse > _LOG_MAX:
            raise MomentOverflowError("sum of exp(logits) overflows")
        with np.errstate(over="ignore"):
            penalty = (np.exp(lse) - 1.0) ** 2
        if not np.isfinite(penalty):
            raise MomentOverflowError("quadratic penalty overflows")
    else:
        raise ValidationError(f"unknown variant {variant!r}")
    return float(base + lam * penalty)
