"""
The four classifiers on a toy problem
=====================================

Fit each classifier to a two-cluster problem in the 15-dimensional feature
space and look at the scores it gives to new points.
"""

import numpy as np

from examstress.classifiers import DEFAULT_SPECS, fit_arrays
from examstress.classifiers.forest import grid_search_rf, RfGrid
from examstress.classifiers.svm import kkt_violation

rng = np.random.default_rng(0)
X = np.vstack([rng.normal(-1, 1, size=(12, 15)), rng.normal(1, 1, size=(12, 15))])
y = np.arange(24) >= 12
groups = [f"S{i % 8}" for i in range(24)]
queries = np.vstack([np.full(15, -1.0), np.zeros(15), np.full(15, 1.0)])

for spec in DEFAULT_SPECS:
    model = fit_arrays(spec, X, y, groups, seed=1)
    print(f"{spec.name:>3}", np.round(model.score_many(queries), 3))

# the SVM reports how well it satisfied the optimality conditions
svm = fit_arrays(DEFAULT_SPECS[2], X, y)
print("support vectors:", len(svm.support_vectors), "converged:", svm.converged,
      "KKT gap:", round(kkt_violation(svm, X, y, 1.0), 6))

# the forest's grid search scores every (trees, depth) pair from one set of trees
best, _, ranking = grid_search_rf(X, y, groups, RfGrid((10, 20), (1, 2, None)), seed=3)
for point, auc in ranking.items():
    print(point.label(), round(auc, 3))
print("chosen:", best.label())
