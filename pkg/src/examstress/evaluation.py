"""Leave-one-student-out evaluation, ROC analysis and repeated runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .classifiers import DEFAULT_SPECS, ClassifierSpec, fit_arrays
from .errors import InsufficientStudents, UndefinedAuc
from .features import DEFAULT_THRESHOLD, LabeledExample, as_arrays, build_examples
from .ingest import ExamKind, Session, sort_sessions
from .preprocess import PreprocessConfig, preprocess_all


@dataclass(frozen=True)
class Fold:
    held_out: str
    train: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class ScoredPrediction:
    score: float
    label: bool
    student_id: str = ""
    exam: ExamKind | None = None


@dataclass(frozen=True)
class RocPoint:
    false_positive_rate: float
    true_positive_rate: float
    threshold: float


def loso_folds(examples: Sequence[LabeledExample]) -> list[Fold]:
    """One fold per student, ordered by student id; the test side is that student's examples."""
    ids = np.array([e.student_id for e in examples], dtype=object)
    students = sorted(set(ids.tolist()))
    if len(students) < 2:
        raise InsufficientStudents(f"need at least 2 students, got {len(students)}")
    return [Fold(s, np.flatnonzero(ids != s), np.flatnonzero(ids == s)) for s in students]


def _split(predictions):
    scores = np.array([p.score for p in predictions], dtype=float)
    labels = np.array([p.label for p in predictions], dtype=bool)
    return scores, labels


def roc_auc_arrays(scores, labels) -> float:
    """Mann-Whitney AUC from mid-ranks: ``(R+ - P(P+1)/2) / (P N)``."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAuc(f"AUC needs both classes (positives={n_pos}, negatives={n_neg})")
    ranks = rankdata(scores, method="average")
    r_pos = float(ranks[labels].sum())
    return (r_pos - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def roc_auc(predictions: Sequence[ScoredPrediction]) -> float:
    return roc_auc_arrays(*_split(predictions))


def roc_curve_arrays(scores, labels) -> list[RocPoint]:
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAuc(f"ROC needs both classes (positives={n_pos}, negatives={n_neg})")
    thresholds = np.unique(scores)[::-1]
    sentinel = float(thresholds[0]) + 1.0
    points = [RocPoint(0.0, 0.0, sentinel)]
    for t in thresholds:
        hit = scores >= t
        points.append(RocPoint(float((hit & ~labels).sum() / n_neg), float((hit & labels).sum() / n_pos), float(t)))
    return points


def roc_curve(predictions: Sequence[ScoredPrediction]) -> list[RocPoint]:
    return roc_curve_arrays(*_split(predictions))


def trapezoid_area(curve: Sequence[RocPoint]) -> float:
    area = 0.0
    for a, b in zip(curve, curve[1:]):
        area += (b.false_positive_rate - a.false_positive_rate) * (a.true_positive_rate + b.true_positive_rate) / 2
    return area


@dataclass
class ClassifierResult:
    name: str
    rep_aucs: list[float]
    roc: list[RocPoint]
    predictions: list[ScoredPrediction] = field(repr=False, default_factory=list)

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.rep_aucs))

    @property
    def std_auc(self) -> float:
        return float(np.std(self.rep_aucs))


@dataclass
class EvalSummary:
    results: dict[str, ClassifierResult]
    repetitions: int
    base_seed: int

    def __getitem__(self, name) -> ClassifierResult:
        return self.results[name]


def fold_seed(rep_seed: int, fold_index: int) -> int:
    return int(np.random.SeedSequence([int(rep_seed), int(fold_index)]).generate_state(1)[0])


def cross_validate(
    examples: Sequence[LabeledExample], spec: ClassifierSpec, seed: int
) -> list[ScoredPrediction]:
    """Held-out predictions of every LOSO fold, pooled in example order."""
    X, y = as_arrays(examples)
    groups = np.array([e.student_id for e in examples], dtype=object)
    scores = np.empty(len(examples))
    for f_idx, fold in enumerate(loso_folds(examples)):
        model = fit_arrays(spec, X[fold.train], y[fold.train], groups[fold.train], fold_seed(seed, f_idx))
        scores[fold.test] = model.score_many(X[fold.test])
    return [ScoredPrediction(float(s), e.label, e.student_id, e.exam) for s, e in zip(scores, examples)]


def evaluate_examples(
    examples: Sequence[LabeledExample],
    specs: Sequence[ClassifierSpec] = DEFAULT_SPECS,
    repetitions: int = 10,
    base_seed: int = 42,
) -> EvalSummary:
    """Repeat pooled LOSO cross-validation with seeds ``base_seed + r``."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    examples = sorted(examples, key=lambda e: (e.student_id, e.exam.order))
    results = {}
    for spec in specs:
        aucs = []
        first = None
        for r in range(repetitions):
            preds = cross_validate(examples, spec, base_seed + r)
            aucs.append(roc_auc(preds))
            if first is None:
                first = preds
        results[spec.name] = ClassifierResult(spec.name, aucs, roc_curve(first), first)
    return EvalSummary(results, repetitions, base_seed)


def run_experiment(
    sessions: Sequence[Session],
    preprocess_config: PreprocessConfig = PreprocessConfig(),
    specs: Sequence[ClassifierSpec] = DEFAULT_SPECS,
    threshold: float = DEFAULT_THRESHOLD,
    repetitions: int = 10,
    base_seed: int = 42,
) -> EvalSummary:
    sessions = sort_sessions(sessions)
    examples = build_examples(preprocess_all(sessions, preprocess_config), sessions, threshold)
    return evaluate_examples(examples, specs, repetitions, base_seed)
