"""k-nearest-neighbour scoring with deterministic tie-breaking."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidK


@dataclass(frozen=True, eq=False)
class KnnModel:
    X: np.ndarray
    y: np.ndarray
    k: int

    def score_many(self, X):
        return knn_scores(self.X, self.y, X, self.k)

    def score(self, x):
        return float(self.score_many(np.atleast_2d(x))[0])


def knn_fit(X, y, k=5):
    X = np.asarray(X, dtype=float)
    if not 1 <= k <= len(X):
        raise InvalidK(f"k={k} must lie in [1, {len(X)}]")
    return KnnModel(X.copy(), np.asarray(y, dtype=bool).copy(), int(k))


def knn_scores(X_train, y_train, X_query, k):
    """Fraction of positive labels among the k nearest training rows.

    Equal distances are resolved in favour of the lower training index.
    """
    X_train = np.asarray(X_train, dtype=float)
    y_train = np.asarray(y_train, dtype=bool)
    out = np.empty(len(X_query))
    for i, q in enumerate(np.asarray(X_query, dtype=float)):
        d2 = ((X_train - q) ** 2).sum(axis=1)
        nearest = np.argsort(d2, kind="stable")[:k]
        out[i] = y_train[nearest].mean()
    return out
