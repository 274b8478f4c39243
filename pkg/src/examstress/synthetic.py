"""Deterministic synthetic cohorts in the canonical on-disk layout.

Every student has exactly one high-arousal exam out of three. High sessions
sit well above low ones on all three channels (skin temperature, heart rate
and EDA), with per-student baselines spread less than that offset, so the
session mean of each channel separates the two groups globally.

Every student also passes exactly one exam above the 80% threshold.
``signal_label_correlation`` is the probability, drawn once per student, that
the passed exam is the high-arousal one; otherwise the passed exam is chosen
uniformly from a separate random stream. At 0 the labels carry no
information about the signals, and each student still contributes both
classes, which keeps a label-free predictor near chance under pooled
leave-one-student-out scoring.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgument
from .ingest import (
    ExamKind,
    GradeRecord,
    RawRecording,
    Session,
    SignalKind,
    render_grade_roster,
    render_sensor_csv,
)

RATES = {SignalKind.SkinTemperature: 4.0, SignalKind.HeartRate: 1.0, SignalKind.ElectrodermalActivity: 4.0}
MAX_SCORES = {ExamKind.Midterm1: 100.0, ExamKind.Midterm2: 100.0, ExamKind.Final: 200.0}
BASE_EPOCH = 1568000000.0

# (baseline low, baseline high, arousal offset, drift amplitude, noise half-width)
_CHANNEL_MODEL = {
    SignalKind.SkinTemperature: (33.0, 33.4, 0.8, 0.1, 0.05),
    SignalKind.HeartRate: (70.0, 75.0, 12.0, 2.0, 1.0),
    SignalKind.ElectrodermalActivity: (0.8, 1.2, 1.0, 0.1, 0.03),
}


@dataclass(frozen=True)
class SyntheticDataset:
    """File contents keyed by path relative to the dataset root, plus the roster text."""

    files: dict[str, str]
    roster: str
    latent: dict[tuple[str, ExamKind], bool]

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        for rel, text in sorted(self.files.items()):
            path = out / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8", newline="\n")
        (out / "roster.csv").write_text(self.roster, encoding="utf-8", newline="\n")
        return out


def _student_ids(n):
    width = max(2, len(str(n)))
    return [f"S{i + 1:0{width}d}" for i in range(n)]


def generate_sessions(seed: int, n_students: int, signal_label_correlation: float) -> list[Session]:
    """In-memory variant of :func:`generate_synthetic_dataset`."""
    return _generate(seed, n_students, signal_label_correlation)[0]


def _generate(seed, n_students, signal_label_correlation):
    if n_students < 2:
        raise InvalidArgument(f"need at least 2 students, got {n_students}")
    if not 0.0 <= signal_label_correlation <= 1.0:
        raise InvalidArgument("signal_label_correlation must lie in [0, 1]")

    rng_signal = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    rng_label = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    rng_mix = np.random.default_rng(np.random.SeedSequence([seed, 2]))
    rng_grade = np.random.default_rng(np.random.SeedSequence([seed, 3]))

    students = _student_ids(n_students)
    exams = list(ExamKind)

    # one high-arousal exam and one above-threshold exam per student; keeping
    # the per-student positive count fixed stops the held-out student's labels
    # from shifting the training class balance between folds
    latent = {}
    labels = {}
    for sid in students:
        high = int(rng_signal.integers(0, 3))
        if rng_mix.random() < signal_label_correlation:
            passed = high
        else:
            passed = int(rng_label.integers(0, 3))
        for i, exam in enumerate(exams):
            latent[(sid, exam)] = i == high
            labels[(sid, exam)] = i == passed

    sessions = []
    for s_idx, sid in enumerate(students):
        baselines = {k: rng_signal.uniform(lo, hi) for k, (lo, hi, *_rest) in _CHANNEL_MODEL.items()}
        for e_idx, exam in enumerate(exams):
            z = 1.0 if latent[(sid, exam)] else 0.0
            session_start = BASE_EPOCH + 86400.0 * (7 * e_idx) + 600.0 * s_idx
            duration = 150.0 + float(rng_signal.integers(0, 31))
            recordings = {}
            for kind in SignalKind:
                lo, hi, offset, drift, noise = _CHANNEL_MODEL[kind]
                rate = RATES[kind]
                lead = 0.25 * int(rng_signal.integers(0, 21))
                tail = 0.25 * int(rng_signal.integers(0, 21))
                n = int((duration + lead + tail) * rate) + 1
                t = np.arange(n) / rate
                phase = rng_signal.uniform(0, 2 * np.pi)
                period = rng_signal.uniform(40.0, 90.0)
                amp = drift * rng_signal.uniform(0.5, 1.0)
                values = (
                    baselines[kind]
                    + offset * z
                    + amp * np.sin(2 * np.pi * t / period + phase)
                    + rng_signal.uniform(-noise, noise, size=n)
                )
                recordings[kind] = RawRecording(kind, session_start - lead, rate, np.round(values, 4))
            if labels[(sid, exam)]:
                pct = rng_grade.uniform(82.0, 98.0)
            else:
                pct = rng_grade.uniform(45.0, 78.0)
            max_score = MAX_SCORES[exam]
            grade = GradeRecord(sid, exam, round(pct * max_score / 100.0, 1), max_score)
            sessions.append(Session(sid, exam, recordings, grade))
    return sessions, latent


def generate_synthetic_dataset(seed: int, n_students: int, signal_label_correlation: float) -> SyntheticDataset:
    sessions, latent = _generate(seed, n_students, signal_label_correlation)
    files = {}
    for s in sessions:
        for kind, rec in s.recordings.items():
            files[f"{s.student_id}/{s.exam.value}/{kind.filename}"] = render_sensor_csv(rec)
    roster = render_grade_roster(s.grade for s in sessions)
    return SyntheticDataset(files, roster, latent)
