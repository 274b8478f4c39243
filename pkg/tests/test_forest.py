import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from examstress.classifiers import ForestSpec, fit_arrays
from examstress.classifiers.forest import (
    GridPoint,
    RfGrid,
    _derived_seed,
    grid_search_rf,
    grow_tree,
    grow_tree_reference,
    n_candidate_features,
    rf_train,
    tree_draws,
)
from examstress.errors import InvalidArgument
from examstress.evaluation import roc_auc_arrays


def _data(seed, n=24, d=15, levels=None):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d)) if levels is None else rng.integers(0, levels, size=(n, d)).astype(float)
    y = (X[:, 0] + X[:, 1] + rng.normal(scale=0.8, size=n)) > 0
    return X, y


def test_candidate_count():
    assert n_candidate_features(15) == 4
    assert n_candidate_features(16) == 4
    assert n_candidate_features(1) == 1


def test_draws_depend_only_on_seed_and_index():
    a = tree_draws(5, 3, 10, 15)
    b = tree_draws(5, 3, 10, 15)
    c = tree_draws(5, 4, 10, 15)
    assert all(np.array_equal(u, v) for u, v in zip(a, b))
    assert not np.array_equal(a[1], c[1])
    assert a[1].shape == (19, 15)
    assert all(sorted(row) == list(range(15)) for row in a[1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 5), st.sampled_from([None, 3]), st.sampled_from([None, 3]))
def test_compiled_tree_matches_reference(seed, tree_index, depth, levels):
    # integer-valued features exercise duplicate values and constant columns
    X, y = _data(seed, n=20, levels=levels)
    assert grow_tree(X, y, seed, tree_index, depth) == grow_tree_reference(X, y, seed, tree_index, depth)


@pytest.mark.parametrize("depth", [1, 2, 4])
def test_depth_limit_is_truncation(depth):
    X, y = _data(1, n=40)
    full = grow_tree(X, y, 9, 0)
    cut = grow_tree(X, y, 9, 0, depth)
    assert cut.depth.max() <= depth
    assert np.array_equal(cut.predict_value(X), full.predict_value(X, depth))
    rng = np.random.default_rng(2)
    Q = rng.normal(size=(50, 15))
    assert np.array_equal(cut.predict_value(Q), full.predict_value(Q, depth))


def test_forest_nesting():
    X, y = _data(2)
    small = rf_train(X, y, GridPoint(5, 2), 13)
    big = rf_train(X, y, GridPoint(12, 2), 13)
    assert all(a == b for a, b in zip(small.trees, big.trees[:5]))


def _naive_grid(X, y, groups, grid, inner_folds, seed):
    """Fit every grid point from scratch on every inner fold."""
    students = sorted(set(groups))
    fold_of = {s: i % inner_folds for i, s in enumerate(students)}
    fold = np.array([fold_of[g] for g in groups])
    sums, used = {}, 0
    for f in range(inner_folds):
        tr, te = fold != f, fold == f
        if len(set(y[te])) < 2 or len(set(y[tr])) < 2:
            continue
        used += 1
        for p in grid.points():
            model = rf_train(X[tr], y[tr], p, _derived_seed(seed, 1, f))
            sums[p] = sums.get(p, 0.0) + roc_auc_arrays(model.score_many(X[te]), y[te])
    return {p: s / used for p, s in sums.items()}


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_grid_search_matches_naive_refits(seed):
    X, y = _data(seed, n=30)
    groups = [f"S{i // 3:02d}" for i in range(30)]
    grid = RfGrid((2, 5, 9), (1, 3, None))
    best, model, ranking = grid_search_rf(X, y, groups, grid, 3, seed)
    naive = _naive_grid(X, y, groups, grid, 3, seed)
    assert ranking.keys() == naive.keys()
    for p in naive:
        assert ranking[p] == pytest.approx(naive[p], abs=1e-12)
    top = max(naive.values())
    first = min((p for p in naive if naive[p] == top), key=lambda p: (p.n_trees, p.depth_key()))
    assert ranking[best] == pytest.approx(top, abs=1e-12)
    assert best == first
    assert model.grid_point == best
    assert all(a == b for a, b in zip(model.trees, rf_train(X, y, best, seed).trees))


def test_grid_tie_prefers_fewer_trees_then_shallower():
    # one informative feature with a wide gap: every grid point scores AUC 1
    X = np.zeros((24, 15))
    X[:, 0] = np.r_[np.arange(12.0), np.arange(12.0) + 100]
    y = np.arange(24) >= 12
    groups = [f"S{i % 8}" for i in range(24)]
    best, _, ranking = grid_search_rf(X, y, groups, RfGrid(), 3, 0)
    assert set(ranking.values()) == {1.0}
    assert best == GridPoint(50, 2)


def test_fallback_when_inner_folds_are_single_class():
    # each group holds one class only, so every inner test fold is single-class
    X, y = _data(4, n=12)
    y = np.array([True] * 6 + [False] * 6)
    groups = ["A"] * 6 + ["B"] * 3 + ["C"] * 3
    best, _, ranking = grid_search_rf(X, y, groups, RfGrid((3, 6), (1, None)), 3, 0)
    assert all(0.0 <= v <= 1.0 for v in ranking.values())
    assert ranking[best] == max(ranking.values())


def test_threshold_dataset_fits_training_data():
    X = np.zeros((20, 15))
    X[:, 0] = np.arange(20.0)
    y = X[:, 0] >= 10
    model = rf_train(X, y, GridPoint(50, None), 3)
    assert np.array_equal(model.score_many(X) > 0.5, y)


def test_identical_rows_give_single_leaf_trees():
    X = np.ones((10, 15))
    y = np.arange(10) < 4
    for i in range(5):
        t = grow_tree(X, y, 0, i)
        boot, _ = tree_draws(0, i, 10, 15)
        assert t.n_nodes == 1
        assert t.value[0] == pytest.approx(y[boot].mean(), abs=1e-15)


def test_stump_beats_majority_on_threshold_data():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(60, 15))
    y = X[:, 3] > 0.2
    stump = rf_train(X[:40], y[:40], GridPoint(100, 1), 0)
    acc = np.mean((stump.score_many(X[40:]) > 0.5) == y[40:])
    majority = max(y[40:].mean(), 1 - y[40:].mean())
    assert acc > majority


def test_deterministic():
    X, y = _data(6)
    groups = [str(i % 6) for i in range(24)]
    a = fit_arrays(ForestSpec(RfGrid((5, 10), (2, None))), X, y, groups, 4)
    b = fit_arrays(ForestSpec(RfGrid((5, 10), (2, None))), X, y, groups, 4)
    assert np.array_equal(a.score_many(X), b.score_many(X))


def test_grid_validation():
    with pytest.raises(InvalidArgument):
        RfGrid((), (2,))
    with pytest.raises(InvalidArgument):
        RfGrid((0,), (2,))
    X, y = _data(0, n=6)
    with pytest.raises(InvalidArgument):
        grid_search_rf(X, y, ["a", "b"] * 3, RfGrid((2,), (1,)), 3, 0)
