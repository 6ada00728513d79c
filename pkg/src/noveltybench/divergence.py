"""Divergences between discrete probability distributions (natural log).

All functions take 1-D arrays that sum to 1. ``kl_divergence`` returns +inf
when q has a zero where p has mass; callers that need a finite value smooth q
first (see :func:`smooth`).
"""

from __future__ import annotations

import numpy as np
from scipy.special import rel_entr

_LN2 = float(np.log(2.0))


def _check_pair(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return p, q


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum_w p(w) ln(p(w)/q(w)) in nats.

    Terms with p(w) == 0 contribute 0; p(w) > 0 with q(w) == 0 makes the
    result +inf.
    """
    p, q = _check_pair(p, q)
    return float(rel_entr(p, q).sum())


def smooth(q, eps: float = 1e-12) -> np.ndarray:
    """Add eps to every entry and renormalize, guaranteeing strict positivity."""
    q = np.asarray(q, dtype=np.float64)
    out = q + eps
    return out / out.sum()


def symmetric_kl(p, q, eps: float = 1e-12) -> float:
    """Mean of both KL directions, each computed against an eps-smoothed target.

    Smoothing keeps the value finite when supports differ (sampled
    distributions routinely underflow to exact zeros).
    """
    p, q = _check_pair(p, q)
    return 0.5 * (kl_divergence(p, smooth(q, eps)) + kl_divergence(q, smooth(p, eps)))


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence in nats; symmetric, in [0, ln 2].

    No smoothing is needed: the mixture is positive wherever either input is.
    """
    p, q = _check_pair(p, q)
    m = 0.5 * (p + q)
    return float(0.5 * (rel_entr(p, m).sum() + rel_entr(q, m).sum()))


JS_MAX = _LN2
