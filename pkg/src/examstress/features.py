"""Per-session summary statistics and grade labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptyInput, IncompleteSession, InvalidSample
from .ingest import SIGNAL_ORDER, ExamKind, Session, SignalKind
from .preprocess import CleanRecording, CleanSession

STAT_NAMES = ("mean", "std", "min", "max", "median")
FEATURE_NAMES = tuple(f"{kind.short}_{stat}" for kind in SIGNAL_ORDER for stat in STAT_NAMES)
N_FEATURES = len(FEATURE_NAMES)
DEFAULT_THRESHOLD = 80.0


@dataclass(frozen=True, eq=False)
class LabeledExample:
    student_id: str
    exam: ExamKind
    features: np.ndarray
    percent: float
    label: bool


def summary_stats(samples) -> tuple[float, float, float, float, float]:
    """Return ``(mean, std, min, max, median)``; std uses the population convention."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("summary_stats needs at least one sample")
    if not np.all(np.isfinite(x)):
        raise InvalidSample("samples must be finite")
    mean = float(x.mean())
    std = float(np.sqrt(np.mean((x - mean) ** 2)))
    s = np.sort(x)
    mid = s.size // 2
    median = float(s[mid]) if s.size % 2 else float((s[mid - 1] + s[mid]) / 2)
    lo, hi = float(s[0]), float(s[-1])
    # float rounding in the mean must not break min <= mean <= max
    mean = min(max(mean, lo), hi)
    return mean, std, lo, hi, median


def build_supervector(clean: Mapping[SignalKind, CleanRecording]) -> np.ndarray:
    missing = [k.name for k in SIGNAL_ORDER if k not in clean]
    if missing:
        raise IncompleteSession(f"missing signals: {', '.join(missing)}")
    values = []
    for kind in SIGNAL_ORDER:
        values.extend(summary_stats(clean[kind].samples))
    return np.array(values)


def binarize_label(percent: float, threshold: float = DEFAULT_THRESHOLD) -> bool:
    return bool(percent > threshold)


def build_examples(
    clean_sessions: Sequence[CleanSession],
    sessions: Sequence[Session],
    threshold: float = DEFAULT_THRESHOLD,
) -> list[LabeledExample]:
    """Pair each preprocessed session with the grade of its source session."""
    grades = {(s.student_id, s.exam): s.grade for s in sessions}
    examples = []
    for cs in clean_sessions:
        pct = grades[(cs.student_id, cs.exam)].percent
        examples.append(
            LabeledExample(cs.student_id, cs.exam, build_supervector(cs.recordings), pct, binarize_label(pct, threshold))
        )
    return examples


def as_arrays(examples: Sequence[LabeledExample]) -> tuple[np.ndarray, np.ndarray]:
    """Stack examples into a feature matrix and a boolean label vector."""
    X = np.array([e.features for e in examples], dtype=float).reshape(len(examples), -1)
    y = np.array([e.label for e in examples], dtype=bool)
    return X, y
