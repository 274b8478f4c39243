"""Synchronize, smooth and z-normalize session recordings.

The order is fixed: each session is first cut to the interval covered by all
three channels, each channel is smoothed with a centred moving average, and
the smoothed samples are z-normalized against a reference set chosen by
:class:`NormScope`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateSignal, EmptyInput, InvalidWindow, NoCommonWindow
from .ingest import ExamKind, RawRecording, Session, SignalKind, sort_sessions


class NormScope(enum.Enum):
    PerStudentPooled = "per_student_pooled"
    PerSessionSignal = "per_session_signal"


@dataclass(frozen=True)
class PreprocessConfig:
    ma_window: int = 5
    norm_scope: NormScope = NormScope.PerStudentPooled

    def __post_init__(self):
        _check_window(self.ma_window)


@dataclass(frozen=True)
class ZNormParams:
    mu: float
    sigma: float


# Same shape as a raw recording; samples are dimensionless once normalized.
CleanRecording = RawRecording


class CleanSession(NamedTuple):
    student_id: str
    exam: ExamKind
    recordings: dict[SignalKind, CleanRecording]


def _check_window(window):
    if isinstance(window, bool) or not isinstance(window, (int, np.integer)) or window < 1 or window % 2 == 0:
        raise InvalidWindow(f"moving-average window must be a positive odd integer, got {window!r}")


def _kept_range(rec: RawRecording, lo: Fraction, hi: Fraction) -> tuple[int, int]:
    """Index range ``[first, last]`` of samples whose timestamp lies in ``[lo, hi]``."""
    start = Fraction(rec.start_epoch)
    rate = Fraction(rec.sample_rate)
    first = max(0, math.ceil((lo - start) * rate))
    last = min(len(rec) - 1, math.floor((hi - start) * rate))
    return first, last


def trim_to_common_window(session: Session) -> Session:
    recs = session.recordings
    # timestamps are compared exactly; float division would misplace boundary samples
    starts = {k: Fraction(r.start_epoch) for k, r in recs.items()}
    ends = {k: starts[k] + Fraction(len(r) - 1) / Fraction(r.sample_rate) for k, r in recs.items()}
    lo, hi = max(starts.values()), min(ends.values())
    if lo > hi:
        raise NoCommonWindow(f"{session.student_id}/{session.exam.value}: recordings do not overlap")
    trimmed = {}
    for kind, rec in recs.items():
        first, last = _kept_range(rec, lo, hi)
        if first > last:
            raise NoCommonWindow(
                f"{session.student_id}/{session.exam.value}: no {kind.name} sample inside the common window"
            )
        new_start = float(starts[kind] + Fraction(first) / Fraction(rec.sample_rate))
        trimmed[kind] = RawRecording(kind, new_start, rec.sample_rate, rec.samples[first : last + 1].copy())
    return replace(session, recordings=trimmed)


def moving_average(samples, window: int) -> np.ndarray:
    """Centred moving average, truncated at the edges.

    ``out[i]`` is the mean of ``samples[max(0, i-w) : i+w+1]`` with
    ``w = (window - 1) // 2``, so the output has the input's length.
    """
    _check_window(window)
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptyInput("moving_average needs at least one sample")
    w = (window - 1) // 2
    n = x.size
    padded = np.concatenate((np.zeros(w), x, np.zeros(w)))
    # accumulate left to right so each output is the plain running sum of its window
    acc = np.zeros(n)
    for d in range(window):
        acc += padded[d : d + n]
    idx = np.arange(n)
    counts = np.minimum(idx + w + 1, n) - np.maximum(idx - w, 0)
    out = acc / counts
    # a mean of near-equal values can round one ulp outside the data range
    return np.clip(out, x.min(), x.max())


def compute_znorm_params(reference) -> ZNormParams:
    x = np.asarray(reference, dtype=float)
    if x.size == 0:
        raise EmptyInput("cannot normalize against an empty reference")
    mu = float(x.mean())
    sigma = float(np.sqrt(np.mean((x - mu) ** 2)))
    return ZNormParams(mu, sigma)


def apply_znorm(samples, params: ZNormParams) -> np.ndarray:
    if not params.sigma > 0:
        raise DegenerateSignal("reference has zero standard deviation")
    return (np.asarray(samples, dtype=float) - params.mu) / params.sigma


def preprocess_all(sessions: Sequence[Session], config: PreprocessConfig = PreprocessConfig()) -> list[CleanSession]:
    """Trim, smooth and normalize every session.

    Output is sorted by ``(student_id, exam)`` regardless of input order.
    Any session that cannot be processed aborts the whole run.
    """
    sessions = sort_sessions(sessions)
    filtered = []
    for s in sessions:
        s = trim_to_common_window(s)
        smoothed = {
            kind: replace(rec, samples=moving_average(rec.samples, config.ma_window))
            for kind, rec in s.recordings.items()
        }
        filtered.append((s, smoothed))

    params: dict[tuple[str, ExamKind, SignalKind], ZNormParams] = {}
    if config.norm_scope is NormScope.PerSessionSignal:
        for s, recs in filtered:
            for kind, rec in recs.items():
                params[(s.student_id, s.exam, kind)] = compute_znorm_params(rec.samples)
    else:
        by_student: dict[str, list[tuple[Session, Mapping[SignalKind, RawRecording]]]] = {}
        for s, recs in filtered:
            by_student.setdefault(s.student_id, []).append((s, recs))
        for sid, group in by_student.items():
            for kind in SignalKind:
                pooled = compute_znorm_params(np.concatenate([recs[kind].samples for _, recs in group]))
                for s, _ in group:
                    params[(sid, s.exam, kind)] = pooled

    out = []
    for s, recs in filtered:
        clean = {}
        for kind in sorted(recs, key=lambda k: list(SignalKind).index(k)):
            p = params[(s.student_id, s.exam, kind)]
            if not p.sigma > 0:
                scope = "pooled over the student's exams" if config.norm_scope is NormScope.PerStudentPooled else "session"
                raise DegenerateSignal(
                    f"student {s.student_id}, exam {s.exam.value}, signal {kind.name}: "
                    f"zero standard deviation ({scope})"
                )
            clean[kind] = replace(recs[kind], samples=apply_znorm(recs[kind].samples, p))
        out.append(CleanSession(s.student_id, s.exam, clean))
    return out
