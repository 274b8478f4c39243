"""Logistic regression trained by plain stochastic gradient descent."""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit


@dataclass(frozen=True, eq=False)
class SgdModel:
    weights: np.ndarray
    bias: float

    def score_many(self, X):
        return expit(np.asarray(X, dtype=float) @ self.weights + self.bias)

    def score(self, x):
        return float(self.score_many(np.atleast_2d(x))[0])


def logloss(w, b, x, y, l2):
    """Regularized log-loss of a single example; ``y`` is 0 or 1."""
    z = float(np.dot(w, x) + b)
    return -(y * log_expit(z) + (1 - y) * log_expit(-z)) + 0.5 * l2 * float(np.dot(w, w))


def logloss_grad(w, b, x, y, l2):
    """Gradient of :func:`logloss` with respect to ``(w, b)``."""
    p = expit(float(np.dot(w, x) + b))
    err = p - y
    return err * np.asarray(x, dtype=float) + l2 * np.asarray(w, dtype=float), err


def mean_logloss(model, X, y, l2):
    z = np.asarray(X, dtype=float) @ model.weights + model.bias
    y = np.asarray(y, dtype=float)
    data = -(y * log_expit(z) + (1 - y) * log_expit(-z)).mean()
    return float(data + 0.5 * l2 * model.weights @ model.weights)


def sgd_logreg_train(X, y, learning_rate=0.01, epochs=100, l2=1e-4, seed=0, history=False):
    """Per-example SGD over a freshly shuffled order every epoch.

    With ``history=True`` the model after every epoch is returned as well.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(seed)
    w = np.zeros(X.shape[1])
    b = 0.0
    snapshots = []
    for _ in range(epochs):
        for i in rng.permutation(len(X)):
            gw, gb = logloss_grad(w, b, X[i], y[i], l2)
            w -= learning_rate * gw
            b -= learning_rate * gb
        if history:
            snapshots.append(SgdModel(w.copy(), b))
    model = SgdModel(w, b)
    return (model, snapshots) if history else model
