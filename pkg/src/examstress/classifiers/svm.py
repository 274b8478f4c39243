"""Soft-margin SVM with an RBF kernel, trained by sequential minimal optimization.

The dual problem solved is::

    min_a  0.5 * a^T Q a - sum(a)   s.t.  0 <= a_i <= C,  sum(a_i * y_i) = 0

with ``Q_ij = y_i y_j K(x_i, x_j)`` and labels in {-1, +1}. Each step updates
the maximal violating pair of multipliers analytically, so the iteration order
is fully determined by the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgument

TAU = 1e-12


@dataclass(frozen=True)
class GammaScale:
    """gamma = 1 / (n_features * variance of all training feature entries)."""


@dataclass(frozen=True)
class GammaFixed:
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise InvalidArgument("gamma must be positive")


def resolve_gamma(rule, X) -> float:
    if isinstance(rule, GammaFixed):
        return float(rule.value)
    X = np.asarray(X, dtype=float)
    var = float(np.mean((X - X.mean()) ** 2))
    return 1.0 / (X.shape[1] * var) if var > 0 else 1.0


def rbf_kernel(x, y, gamma) -> float:
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return math.exp(-gamma * float(diff @ diff))


def rbf_gram(A, B, gamma) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    d2 = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=-1)
    return np.exp(-gamma * d2)


@dataclass(frozen=True, eq=False)
class SvmModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i for each support vector
    bias: float
    gamma: float
    alpha: np.ndarray  # all multipliers, in training order
    converged: bool
    n_iter: int

    def score_many(self, X):
        if len(self.support_vectors) == 0:
            return np.full(len(X), self.bias)
        return rbf_gram(X, self.support_vectors, self.gamma) @ self.dual_coef + self.bias

    def score(self, x):
        return float(self.score_many(np.atleast_2d(x))[0])


def dual_objective(alpha, Q) -> float:
    """Value of the (minimized) dual objective ``0.5 a^T Q a - sum(a)``."""
    return float(0.5 * alpha @ Q @ alpha - alpha.sum())


def signed_labels(y) -> np.ndarray:
    return np.where(np.asarray(y, dtype=bool), 1.0, -1.0)


def _select_pair(alpha, G, y, c):
    """Maximal violating pair, or ``None`` if none exists."""
    minus_yg = -y * G
    up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
    low = ((y < 0) & (alpha < c)) | ((y > 0) & (alpha > 0))
    if not up.any() or not low.any():
        return None, 0.0
    i = int(np.argmax(np.where(up, minus_yg, -np.inf)))
    j = int(np.argmin(np.where(low, minus_yg, np.inf)))
    return (i, j), float(minus_yg[i] - minus_yg[j])


def _compute_bias(alpha, G, y, c):
    yg = y * G
    at_upper = alpha >= c
    at_lower = alpha <= 0
    free = ~at_upper & ~at_lower
    if free.any():
        return -float(yg[free].mean())
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = float(yg[ub_mask].min()) if ub_mask.any() else math.inf
    lb = float(yg[lb_mask].max()) if lb_mask.any() else -math.inf
    return -(ub + lb) / 2


def smo_train(X, y, c=1.0, gamma=1.0, tol=1e-3, max_passes=100) -> SvmModel:
    """Fit the dual by SMO.

    ``tol`` bounds the largest KKT violation at convergence. One pass is ``n``
    pair updates; after ``max_passes`` passes the model is returned with
    ``converged=False``.
    """
    X = np.asarray(X, dtype=float)
    ys = signed_labels(y)
    n = len(X)
    K = rbf_gram(X, X, gamma)
    Q = ys[:, None] * ys[None, :] * K
    alpha = np.zeros(n)
    G = -np.ones(n)
    converged = False
    it = 0
    max_iter = max_passes * max(n, 1)
    while it < max_iter:
        pair, gap = _select_pair(alpha, G, ys, c)
        if pair is None or gap <= tol:
            converged = True
            break
        i, j = pair
        old_i, old_j = alpha[i], alpha[j]
        if ys[i] != ys[j]:
            quad = max(Q[i, i] + Q[j, j] + 2 * Q[i, j], TAU)
            delta = (-G[i] - G[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = -diff
            if diff > 0:
                if alpha[i] > c:
                    alpha[i] = c
                    alpha[j] = c - diff
            elif alpha[j] > c:
                alpha[j] = c
                alpha[i] = c + diff
        else:
            quad = max(Q[i, i] + Q[j, j] - 2 * Q[i, j], TAU)
            delta = (G[i] - G[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > c:
                if alpha[i] > c:
                    alpha[i] = c
                    alpha[j] = total - c
            elif alpha[j] < 0:
                alpha[j] = 0.0
                alpha[i] = total
            if total > c:
                if alpha[j] > c:
                    alpha[j] = c
                    alpha[i] = total - c
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = total
        G += Q[:, i] * (alpha[i] - old_i) + Q[:, j] * (alpha[j] - old_j)
        it += 1
    else:
        pair, gap = _select_pair(alpha, G, ys, c)
        converged = pair is None or gap <= tol

    b = _compute_bias(alpha, G, ys, c)
    sv = alpha > 0
    return SvmModel(X[sv].copy(), alpha[sv] * ys[sv], b, float(gamma), alpha, converged, it)


def kkt_violation(model: SvmModel, X, y, c) -> float:
    """Largest gap between the ``I_up`` and ``I_low`` index sets (0 when optimal)."""
    ys = signed_labels(y)
    Q = ys[:, None] * ys[None, :] * rbf_gram(X, X, model.gamma)
    G = Q @ model.alpha - 1
    pair, gap = _select_pair(model.alpha, G, ys, c)
    return 0.0 if pair is None else max(gap, 0.0)
