"""Four binary classifiers behind one ``fit``/``score`` contract.

Every trained model exposes ``score(x)`` and ``score_many(X)`` returning a
real value that increases with confidence in the positive (high-grade) class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ..errors import InvalidArgument, SingleClassTrainingSet
from ..features import LabeledExample, as_arrays
from .forest import ForestModel, GridPoint, RfGrid, grid_search_rf, rf_train
from .knn import KnnModel, knn_fit, knn_scores
from .sgd import SgdModel, sgd_logreg_train
from .svm import GammaFixed, GammaScale, SvmModel, rbf_kernel, resolve_gamma, smo_train


@dataclass(frozen=True)
class KnnSpec:
    k: int = 5
    name = "knn"


@dataclass(frozen=True)
class SvmSpec:
    c: float = 1.0
    gamma: Union[GammaScale, GammaFixed] = GammaScale()
    tol: float = 1e-3
    max_passes: int = 100
    name = "svm"

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidArgument("C must be positive")


@dataclass(frozen=True)
class SgdSpec:
    learning_rate: float = 0.01
    epochs: int = 100
    l2: float = 1e-4
    name = "sgd"

    def __post_init__(self):
        if not self.learning_rate > 0 or self.epochs < 0 or self.l2 < 0:
            raise InvalidArgument("invalid SGD hyperparameters")


@dataclass(frozen=True)
class ForestSpec:
    grid: RfGrid = field(default_factory=RfGrid)
    inner_folds: int = 3
    name = "rf"


ClassifierSpec = Union[KnnSpec, SvmSpec, SgdSpec, ForestSpec]
TrainedModel = Union[KnnModel, SvmModel, SgdModel, ForestModel]

#: Column order used in reports.
DEFAULT_SPECS = (ForestSpec(), SgdSpec(), SvmSpec(), KnnSpec())


def fit_arrays(spec: ClassifierSpec, X, y, groups=None, seed: int = 0) -> TrainedModel:
    """Array-level ``fit``; ``groups`` is only needed by the forest's grid search."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=bool)
    if len(y) == 0 or y.all() or not y.any():
        raise SingleClassTrainingSet("training set must contain both classes")
    if isinstance(spec, KnnSpec):
        return knn_fit(X, y, spec.k)
    if isinstance(spec, SvmSpec):
        return smo_train(X, y, spec.c, resolve_gamma(spec.gamma, X), spec.tol, spec.max_passes)
    if isinstance(spec, SgdSpec):
        return sgd_logreg_train(X, y, spec.learning_rate, spec.epochs, spec.l2, seed)
    if isinstance(spec, ForestSpec):
        if groups is None:
            groups = np.arange(len(y))
        _, model, _ = grid_search_rf(X, y, groups, spec.grid, spec.inner_folds, seed)
        return model
    raise TypeError(f"unknown classifier spec {spec!r}")


def fit(spec: ClassifierSpec, train: Sequence[LabeledExample], seed: int = 0) -> TrainedModel:
    X, y = as_arrays(train)
    return fit_arrays(spec, X, y, [e.student_id for e in train], seed)


def score(model: TrainedModel, features) -> float:
    return model.score(features)


__all__ = [
    "ClassifierSpec",
    "DEFAULT_SPECS",
    "ForestModel",
    "ForestSpec",
    "GammaFixed",
    "GammaScale",
    "GridPoint",
    "KnnModel",
    "KnnSpec",
    "RfGrid",
    "SgdModel",
    "SgdSpec",
    "SvmModel",
    "SvmSpec",
    "TrainedModel",
    "fit",
    "fit_arrays",
    "grid_search_rf",
    "knn_scores",
    "rbf_kernel",
    "rf_train",
    "score",
    "sgd_logreg_train",
    "smo_train",
]
