"""
Leave-one-student-out evaluation
================================

Run the full protocol twice: once on a cohort whose grades follow the
signals, and once on a cohort where they are unrelated. The second run
shows how far a 30-session study can drift from 0.5 by chance alone.
"""

from examstress import generate_sessions, run_experiment
from examstress.evaluation import loso_folds, trapezoid_area
from examstress.features import build_examples
from examstress.preprocess import preprocess_all
from examstress.report import results_markdown

signal = generate_sessions(seed=7, n_students=10, signal_label_correlation=1.0)
examples = build_examples(preprocess_all(signal), signal, threshold=80.0)
folds = loso_folds(examples)
print(len(folds), "folds of", len(folds[0].train), "train /", len(folds[0].test), "test")

summary = run_experiment(signal, repetitions=3)
print(results_markdown(summary))

# ROC points are pooled over all folds of the first repetition
knn = summary["knn"]
print("KNN ROC points:", [(p.false_positive_rate, p.true_positive_rate) for p in knn.roc][:5], "...")
print("trapezoid area:", trapezoid_area(knn.roc))

null = generate_sessions(seed=7, n_students=10, signal_label_correlation=0.0)
print(results_markdown(run_experiment(null, repetitions=3)))
