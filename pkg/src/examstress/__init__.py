"""Exam-grade prediction from wristband physiology.

Raw skin temperature, heart rate and EDA recordings are trimmed to a common
window, smoothed, z-normalized, summarized into a 15-value vector per exam
session and fed to four classifiers evaluated by leave-one-student-out
cross-validation with pooled ROC-AUC.
"""

from .errors import ExamStressError
from .evaluation import EvalSummary, loso_folds, roc_auc, roc_curve, run_experiment
from .features import (
    FEATURE_NAMES,
    LabeledExample,
    binarize_label,
    build_examples,
    build_supervector,
    summary_stats,
)
from .ingest import (
    ExamKind,
    GradeRecord,
    RawRecording,
    Session,
    SignalKind,
    assemble_sessions,
    discover_manifest,
    load_dataset,
    parse_grade_roster,
    parse_sensor_csv,
)
from .preprocess import NormScope, PreprocessConfig, preprocess_all
from .synthetic import generate_sessions, generate_synthetic_dataset

__version__ = "0.1.0"
