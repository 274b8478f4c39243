"""Random forest of Gini CART trees with bootstrap rows and random feature subsets.

Trees are grown breadth first, and a tree's random draws are fixed up front:
one bootstrap sample plus one feature permutation per node id. Two useful
consequences:

* the tree grown with ``max_depth=D`` is exactly the unlimited tree cut at
  depth ``D``;
* tree ``i`` depends only on ``(seed, i)``, so an ``n``-tree forest is the
  first ``n`` trees of any larger forest with the same seed.

Grid search uses both to score every (tree count, depth) pair from a single
set of unlimited trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numba
import numpy as np

from ..errors import InvalidArgument

UNLIMITED = None


@dataclass(frozen=True, order=True)
class GridPoint:
    n_trees: int
    max_depth: Optional[int]  # None means unlimited

    def depth_key(self):
        return math.inf if self.max_depth is None else self.max_depth

    def label(self):
        depth = "unlimited" if self.max_depth is None else str(self.max_depth)
        return f"trees={self.n_trees},depth={depth}"


@dataclass(frozen=True)
class RfGrid:
    tree_counts: tuple[int, ...] = (50, 100, 200)
    max_depths: tuple[Optional[int], ...] = (2, 4, 8, None)

    def __post_init__(self):
        if not self.tree_counts or not self.max_depths:
            raise InvalidArgument("grid needs at least one tree count and one depth")
        if any(n < 1 for n in self.tree_counts) or any(d is not None and d < 1 for d in self.max_depths):
            raise InvalidArgument("tree counts and depths must be positive")

    def points(self) -> list[GridPoint]:
        """Grid points in preference order for ties: fewer trees, then shallower."""
        pts = [GridPoint(n, d) for n in self.tree_counts for d in self.max_depths]
        return sorted(set(pts), key=lambda p: (p.n_trees, p.depth_key()))


def n_candidate_features(n_features: int) -> int:
    return math.ceil(math.sqrt(n_features))


@dataclass(frozen=True, eq=False)
class Tree:
    feature: np.ndarray  # -1 at leaves
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # positive fraction of the samples reaching the node
    depth: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("feature", "threshold", "left", "right", "value", "depth")
        )

    @property
    def n_nodes(self):
        return len(self.feature)

    def predict_value(self, X, max_depth=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        limit = -1 if max_depth is None else int(max_depth)
        return _predict(self.feature, self.threshold, self.left, self.right, self.value, self.depth, X, limit)

    def vote(self, X, max_depth=None):
        return self.predict_value(X, max_depth) > 0.5


def tree_draws(seed, tree_index, n_samples, n_features):
    """Bootstrap rows and the per-node feature permutations for one tree."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(tree_index)]))
    boot = rng.integers(0, n_samples, size=n_samples)
    max_nodes = 2 * n_samples - 1
    perms = rng.permuted(np.tile(np.arange(n_features), (max_nodes, 1)), axis=1)
    return boot, perms


@numba.njit(cache=True)
def _best_split(X, y, rows, perm, n_candidates):
    """Best (feature, threshold) over the first usable candidate features.

    A candidate is usable when it is not constant on ``rows``; the scan stops
    after ``n_candidates`` usable features. Returns feature -1 if none exists.
    """
    m = rows.shape[0]
    n_pos_total = 0.0
    for r in range(m):
        n_pos_total += y[rows[r]]
    best_feature = -1
    best_threshold = 0.0
    best_score = np.inf
    usable = 0
    vals = np.empty(m)
    labs = np.empty(m)
    for f in perm:
        if usable >= n_candidates:
            break
        for r in range(m):
            vals[r] = X[rows[r], f]
        order = np.argsort(vals)
        sv = vals[order]
        if sv[0] == sv[m - 1]:
            continue
        usable += 1
        for r in range(m):
            labs[r] = y[rows[order[r]]]
        left_pos = 0.0
        for i in range(m - 1):
            left_pos += labs[i]
            if sv[i] == sv[i + 1]:
                continue
            nl = i + 1.0
            nr = m - nl
            pl = left_pos / nl
            pr = (n_pos_total - left_pos) / nr
            score = nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr)
            if score < best_score:
                best_score = score
                best_feature = f
                thr = (sv[i] + sv[i + 1]) / 2.0
                if thr >= sv[i + 1]:
                    thr = sv[i]
                best_threshold = thr
    return best_feature, best_threshold


@numba.njit(cache=True)
def _grow(X, y, boot, perms, n_candidates, max_depth):
    n = boot.shape[0]
    cap = perms.shape[0]
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap)
    depth = np.zeros(cap, dtype=np.int64)
    seg_start = np.zeros(cap, dtype=np.int64)
    seg_end = np.zeros(cap, dtype=np.int64)
    rows = boot.copy()
    buf = np.empty(n, dtype=np.int64)
    seg_end[0] = n
    n_nodes = 1
    node = 0
    while node < n_nodes:
        s, e = seg_start[node], seg_end[node]
        pos = 0.0
        for r in range(s, e):
            pos += y[rows[r]]
        value[node] = pos / (e - s)
        if pos == 0.0 or pos == e - s or (max_depth >= 0 and depth[node] >= max_depth):
            node += 1
            continue
        f, thr = _best_split(X, y, rows[s:e], perms[node], n_candidates)
        if f < 0:
            node += 1
            continue
        k = s
        for r in range(s, e):
            if X[rows[r], f] <= thr:
                buf[k] = rows[r]
                k += 1
        mid = k
        for r in range(s, e):
            if X[rows[r], f] > thr:
                buf[k] = rows[r]
                k += 1
        for r in range(s, e):
            rows[r] = buf[r]
        feature[node] = f
        threshold[node] = thr
        for child, cs, ce in ((n_nodes, s, mid), (n_nodes + 1, mid, e)):
            seg_start[child] = cs
            seg_end[child] = ce
            depth[child] = depth[node] + 1
        left[node] = n_nodes
        right[node] = n_nodes + 1
        n_nodes += 2
        node += 1
    return feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes], value[:n_nodes], depth[:n_nodes]


@numba.njit(cache=True)
def _predict(feature, threshold, left, right, value, depth, X, max_depth):
    out = np.empty(X.shape[0])
    for q in range(X.shape[0]):
        node = 0
        while feature[node] >= 0 and (max_depth < 0 or depth[node] < max_depth):
            if X[q, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[q] = value[node]
    return out


def grow_tree(X, y, seed, tree_index, max_depth=None, n_candidates=None) -> Tree:
    X = np.ascontiguousarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    boot, perms = tree_draws(seed, tree_index, n, d)
    m = n_candidate_features(d) if n_candidates is None else n_candidates
    limit = -1 if max_depth is None else int(max_depth)
    return Tree(*_grow(X, y, boot, perms, m, limit))


@dataclass(frozen=True, eq=False)
class ForestModel:
    trees: list[Tree]
    grid_point: GridPoint

    def score_many(self, X):
        votes = np.zeros(len(X))
        for t in self.trees:
            votes += t.vote(X, self.grid_point.max_depth)
        return votes / len(self.trees)

    def score(self, x):
        return float(self.score_many(np.atleast_2d(x))[0])


def rf_train(X, y, grid_point: GridPoint, seed) -> ForestModel:
    trees = [grow_tree(X, y, seed, i, grid_point.max_depth) for i in range(grid_point.n_trees)]
    return ForestModel(trees, grid_point)


def _vote_table(trees: Sequence[Tree], X, depths):
    """Cumulative positive votes, shape ``(n_trees, n_depths, n_queries)``."""
    votes = np.array([[t.vote(X, d) for d in depths] for t in trees], dtype=float)
    return np.cumsum(votes, axis=0)


def _derived_seed(seed, *path):
    return int(np.random.SeedSequence([int(seed), *path]).generate_state(1)[0])


def grid_search_rf(X, y, groups, grid: RfGrid = RfGrid(), inner_folds=3, seed=0):
    """Pick the grid point with the best mean inner-fold AUC, then refit.

    Inner folds hold out whole groups (students). Folds whose held-out part
    has a single class are skipped; if every fold is skipped, grid points are
    ranked by training accuracy of the full-data forest instead. Ties go to
    fewer trees, then shallower depth.

    Returns ``(best grid point, fitted forest, mean score per grid point)``.
    """
    from ..evaluation import roc_auc_arrays

    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=bool)
    groups = np.asarray(groups)
    if inner_folds < 2:
        raise InvalidArgument("inner_folds must be at least 2")
    uniq = sorted(set(groups.tolist()))
    if len(uniq) < inner_folds:
        raise InvalidArgument(f"{len(uniq)} groups cannot fill {inner_folds} inner folds")
    fold_of_group = {g: i % inner_folds for i, g in enumerate(uniq)}
    fold = np.array([fold_of_group[g] for g in groups.tolist()])

    points = grid.points()
    depths = sorted(set(grid.max_depths), key=lambda d: math.inf if d is None else d)
    max_trees = max(grid.tree_counts)
    auc_sums = {p: 0.0 for p in points}
    n_scored = 0
    for f in range(inner_folds):
        train, test = fold != f, fold == f
        yt = y[test]
        if yt.all() or not yt.any() or y[train].all() or not y[train].any():
            continue
        fseed = _derived_seed(seed, 1, f)
        trees = [grow_tree(X[train], y[train], fseed, i) for i in range(max_trees)]
        table = _vote_table(trees, X[test], depths)
        for p in points:
            scores = table[p.n_trees - 1, depths.index(p.max_depth)] / p.n_trees
            auc_sums[p] += roc_auc_arrays(scores, yt)
        n_scored += 1

    if n_scored:
        ranking = {p: auc_sums[p] / n_scored for p in points}
    else:
        trees = [grow_tree(X, y, seed, i) for i in range(max_trees)]
        table = _vote_table(trees, X, depths)
        ranking = {}
        for p in points:
            scores = table[p.n_trees - 1, depths.index(p.max_depth)] / p.n_trees
            ranking[p] = float(np.mean((scores > 0.5) == y))
    best = points[0]
    for p in points[1:]:
        if ranking[p] > ranking[best]:
            best = p
    return best, rf_train(X, y, best, seed), ranking


# Plain-Python builder kept as an independent check on the compiled kernel.
def grow_tree_reference(X, y, seed, tree_index, max_depth=None, n_candidates=None) -> Tree:
    X = np.asarray(X, dtype=float)
    y = [float(v) for v in np.asarray(y, dtype=float)]
    n, d = X.shape
    boot, perms = tree_draws(seed, tree_index, n, d)
    m = n_candidate_features(d) if n_candidates is None else n_candidates
    cols = [[float(v) for v in X[:, j]] for j in range(d)]
    nodes = [{"rows": [int(r) for r in boot], "depth": 0}]
    k = 0
    while k < len(nodes):
        node = nodes[k]
        rows = node["rows"]
        pos = sum(y[r] for r in rows)
        node["value"] = pos / len(rows)
        node.update(feature=-1, threshold=0.0, left=-1, right=-1)
        pure = pos == 0 or pos == len(rows)
        capped = max_depth is not None and node["depth"] >= max_depth
        if not (pure or capped):
            split = _reference_split(cols, y, rows, perms[k], m)
            if split is not None:
                f, thr = split
                node.update(feature=f, threshold=thr, left=len(nodes), right=len(nodes) + 1)
                nodes.append({"rows": [r for r in rows if cols[f][r] <= thr], "depth": node["depth"] + 1})
                nodes.append({"rows": [r for r in rows if cols[f][r] > thr], "depth": node["depth"] + 1})
        k += 1
    return Tree(
        np.array([nd["feature"] for nd in nodes], dtype=np.int64),
        np.array([nd["threshold"] for nd in nodes]),
        np.array([nd["left"] for nd in nodes], dtype=np.int64),
        np.array([nd["right"] for nd in nodes], dtype=np.int64),
        np.array([nd["value"] for nd in nodes]),
        np.array([nd["depth"] for nd in nodes], dtype=np.int64),
    )


def _gini_weighted(labels):
    n = len(labels)
    p = sum(labels) / n
    return n * 2.0 * p * (1.0 - p)


def _reference_split(cols, y, rows, perm, n_candidates):
    best = None
    best_score = math.inf
    usable = 0
    for f in perm:
        if usable >= n_candidates:
            break
        values = sorted({cols[f][r] for r in rows})
        if len(values) < 2:
            continue
        usable += 1
        for a, b in zip(values, values[1:]):
            thr = (a + b) / 2.0
            if thr >= b:
                thr = a
            left = [y[r] for r in rows if cols[f][r] <= thr]
            right = [y[r] for r in rows if cols[f][r] > thr]
            score = _gini_weighted(left) + _gini_weighted(right)
            if score < best_score:
                best_score = score
                best = (int(f), thr)
    return best
