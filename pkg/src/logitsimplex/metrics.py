"""Evaluation metrics for predictive probability vectors.

Predictions are passed as an ``(N, C)`` array of probabilities with an
``(N,)`` array of integer labels. Argmax ties resolve to the lowest index.
"""

import numpy as np
from scipy.stats import rankdata

from .errors import DimensionError, ValidationError

LOG_CLAMP = 1e-12
ECE_BINS = 15


def kl_simplex(p, q):
    """KL(p || q) with the convention 0 log 0 = 0.

    Raises:
        ValidationError: if q vanishes where p does not.
    """
    p = np.asarray(getattr(p, "probs", p), dtype=np.float64)
    q = np.asarray(getattr(q, "probs", q), dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionError(f"shape mismatch {p.shape} vs {q.shape}")
    support = p > 0
    if np.any(q[support] <= 0):
        raise ValidationError("q has zero mass where p is positive")
    ps, qs = p[support], q[support]
    return float(max(np.sum(ps * (np.log(ps) - np.log(qs))), 0.0))


def _check(probs, labels):
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.ndim != 2 or probs.shape[0] == 0:
        raise DimensionError("probs must be a nonempty (N, C) array")
    if labels.shape != (probs.shape[0],):
        raise DimensionError("labels must have one entry per prediction")
    if not np.issubdtype(labels.dtype, np.integer):
        if not np.all(np.equal(np.mod(labels, 1), 0)):
            raise ValidationError("labels must be integers")
        labels = labels.astype(np.int64)
    if np.any(labels < 0) or np.any(labels >= probs.shape[1]):
        raise ValidationError("label out of range")
    return probs, labels


def accuracy(probs, labels):
    probs, labels = _check(probs, labels)
    return float(np.mean(np.argmax(probs, axis=1) == labels))


def log_prob_score(probs, labels):
    """Mean log probability assigned to the true class."""
    probs, labels = _check(probs, labels)
    picked = probs[np.arange(probs.shape[0]), labels]
    return float(np.mean(np.log(np.clip(picked, LOG_CLAMP, 1.0))))


def binary_log_prob(conf, correct):
    """Log score of a correctness estimate; works elementwise on arrays."""
    conf = np.clip(np.asarray(conf, dtype=np.float64), LOG_CLAMP, 1.0 - LOG_CLAMP)
    correct = np.asarray(correct, dtype=np.float64)
    out = correct * np.log(conf) + (1.0 - correct) * np.log1p(-conf)
    return float(out) if out.ndim == 0 else out


def correctness_log_prob(probs, labels):
    """Mean binary log score of max-probability confidence for correctness."""
    probs, labels = _check(probs, labels)
    correct = np.argmax(probs, axis=1) == labels
    return float(np.mean(binary_log_prob(probs.max(axis=1), correct)))


def ece(probs, labels, bins=ECE_BINS):
    """Expected calibration error of max-probability confidence.

    Bin m holds confidences in ((m-1)/M, m/M]; a confidence of exactly zero
    falls into the first bin.
    """
    probs, labels = _check(probs, labels)
    conf = probs.max(axis=1)
    correct = (np.argmax(probs, axis=1) == labels).astype(np.float64)
    idx = np.clip(np.ceil(conf * bins).astype(np.int64) - 1, 0, bins - 1)
    n = conf.shape[0]
    counts = np.bincount(idx, minlength=bins)
    acc_sum = np.bincount(idx, weights=correct, minlength=bins)
    conf_sum = np.bincount(idx, weights=conf, minlength=bins)
    return float(np.sum(np.abs(acc_sum - conf_sum)) / n)


def auroc(scores, labels):
    """Area under the ROC curve via the Mann-Whitney statistic, ties counted half.

    Raises:
        ValidationError: if labels are not binary or contain a single class.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise DimensionError("scores and labels must be matching vectors")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValidationError("labels must be binary")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("AUROC needs at least one positive and one negative")
    ranks = rankdata(scores)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
