"""
From wristband recordings to feature vectors
============================================

Build a small synthetic cohort, write it in the on-disk layout, read it
back, and follow one session through trimming, smoothing, normalization and
feature extraction.
"""

import tempfile
from pathlib import Path

import numpy as np

from examstress import (
    PreprocessConfig,
    SignalKind,
    build_examples,
    generate_synthetic_dataset,
    load_dataset,
    preprocess_all,
)
from examstress.features import FEATURE_NAMES
from examstress.preprocess import moving_average, trim_to_common_window

# write ten students x three exams to a scratch directory
root = Path(tempfile.mkdtemp()) / "cohort"
generate_synthetic_dataset(seed=7, n_students=10, signal_label_correlation=1.0).write(root)
print(sorted(p.name for p in root.iterdir())[:4], "...")
print((root / "S01" / "Final" / "HR.csv").read_text().splitlines()[:4])

sessions = load_dataset(root, root / "roster.csv")
print(len(sessions), "sessions")

# each channel starts and stops at its own time; trimming keeps the shared span
s = sessions[0]
trimmed = trim_to_common_window(s)
for kind in SignalKind:
    raw, cut = s.recordings[kind], trimmed.recordings[kind]
    print(f"{kind.short}: {raw.samples.size} -> {cut.samples.size} samples, start {cut.start_epoch}")

# the centred moving average shrinks its window at the edges
print(moving_average([0, 3, 0, 3, 0], 3))

# pooled per-student z-scores keep differences between a student's exams
clean = preprocess_all(sessions, PreprocessConfig())
examples = build_examples(clean, sessions, threshold=80.0)
for e in examples[:3]:
    print(e.student_id, e.exam.value, f"{e.percent:.1f}%", "high" if e.label else "low",
          dict(zip(FEATURE_NAMES[:2], np.round(e.features[:2], 3))))
