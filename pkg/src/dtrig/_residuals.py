"""Per-index residual helpers shared by the identity suites.

Every function works on stacks ``(K, n, m)`` and returns one residual per
index.  Absolute residuals are ``||lhs - rhs||_F``.  Relative residuals divide
by ``max(1, sum of ||term||_F)`` over the terms that make up both sides, which
is the natural scale when the terms grow but their combination stays small
(``Cosh^T Cosh - Sinh^T Sinh = I`` is the typical case).
"""

from __future__ import annotations

import numpy as np

from .matrix_core import frobenius_norms


def tr(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, -1, -2)


def eye_like(a: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.eye(a.shape[-1]), a.shape)


def residual(lhs: np.ndarray, rhs: np.ndarray, terms=None) -> np.ndarray:
    r = frobenius_norms(lhs - rhs)
    if terms is None:
        return r
    total = np.zeros_like(r)
    for t in terms:
        total = total + frobenius_norms(t)
    return r / np.maximum(1.0, total)


def worst(*residuals: np.ndarray) -> np.ndarray:
    """Elementwise max; NaN propagates so an undefined side is never hidden."""
    out = residuals[0]
    for r in residuals[1:]:
        out = np.maximum(out, r)
    return out
