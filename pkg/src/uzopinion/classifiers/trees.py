"""Information-gain decision trees: REPTree and random forest.

Both learners share one grower. Numeric splits are binary, placed midway
between neighbouring distinct values, and chosen by information gain.
REPTree grows on two thirds of the training data and prunes bottom-up on the
held-out third; a random forest grows unpruned trees on bootstrap samples
with a random feature subset per node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-12


@dataclass
class Node:
    counts: np.ndarray  # class counts of the growing data reaching this node
    feature: int = -1
    threshold: float = 0.0
    left: "Node | None" = None
    right: "Node | None" = None
    extra: np.ndarray | None = field(default=None, repr=False)  # back-fitted counts

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def size(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + self.left.size() + self.right.size()


def _xlogx(c: np.ndarray) -> np.ndarray:
    return np.where(c > 0, c * np.log2(np.where(c > 0, c, 1.0)), 0.0)


def _entropy(counts: np.ndarray) -> np.ndarray:
    """Entropy in bits over the last axis of a count array."""
    total = counts.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = _xlogx(total) - _xlogx(counts).sum(axis=-1)
        return np.where(total > 0, h / np.where(total > 0, total, 1.0), 0.0)


_TABLE = _xlogx(np.arange(1025, dtype=float))


def _xlogx_table(n: int) -> np.ndarray:
    """x*log2(x) for x = 0..n; counts are integers, so lookups replace logs."""
    global _TABLE
    if n >= len(_TABLE):
        _TABLE = _xlogx(np.arange(2 * n + 1, dtype=float))
    return _TABLE


def best_splits(X: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int):
    """Best midpoint split of every column of ``X``.

    Returns ``(gain, threshold)`` arrays; gain is ``-inf`` where a column has
    no admissible split. Within a column the lowest threshold wins ties.
    """
    n, d = X.shape
    table = _xlogx_table(n)
    cols = np.arange(d)
    order = X.argsort(axis=0, kind="stable")
    xs = X[order, cols]
    ys = y[order]
    total = np.bincount(y, minlength=n_classes)
    n_left = np.arange(1, n)
    # n * weighted child entropy, per cut position and column
    child = (table[n_left] + table[n - n_left])[:, None]
    for c in range(n_classes):
        if total[c]:
            left_c = (ys[:-1] == c).cumsum(axis=0)
            child = child - table[left_c] - table[total[c] - left_c]
    valid = xs[1:] > xs[:-1]
    if min_leaf > 1:
        valid[: min_leaf - 1] = False
        valid[max(n - min_leaf, 0):] = False
    child = np.where(valid, child, np.inf)
    best = child.argmin(axis=0) if n > 1 else np.zeros(d, dtype=int)
    parent = (table[n] - table[total].sum()) / n
    gain = parent - child[best, cols] / n if n > 1 else np.full(d, -np.inf)
    thr = (xs[best, cols] + xs[np.minimum(best + 1, n - 1), cols]) / 2.0
    return np.where(np.isfinite(gain), gain, -np.inf), thr


def best_split(x: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int):
    """Best midpoint threshold on one feature: (gain, threshold) or None."""
    gain, thr = best_splits(np.asarray(x, dtype=float)[:, None], y, n_classes, min_leaf)
    if not np.isfinite(gain[0]):
        return None
    return float(gain[0]), float(thr[0])


class TreeGrower:
    """Grows one information-gain tree.

    ``max_features`` candidate features are drawn per node from a random
    permutation; if none of them yields positive gain the search continues
    through the rest of the permutation. ``max_features=None`` evaluates all
    features in index order.
    """

    def __init__(self, n_classes, min_leaf=1, max_depth=None, max_features=None, rng=None):
        self.n_classes = n_classes
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.max_features = max_features
        self.rng = rng

    def grow(self, X: np.ndarray, y: np.ndarray) -> Node:
        return self._grow(X, y, 0)

    def _candidates(self, d: int) -> np.ndarray:
        if self.max_features is None or self.max_features >= d or self.rng is None:
            return np.arange(d)
        return self.rng.permutation(d)

    def _pick(self, X, y, features):
        gains, thrs = best_splits(X[:, features], y, self.n_classes, self.min_leaf)
        best = None
        for g, j, t in zip(gains, features, thrs):
            if g <= _EPS:
                continue
            if best is None or g > best[0] + _EPS:
                best = (float(g), int(j), float(t))
        return best

    def _grow(self, X, y, depth) -> Node:
        counts = np.bincount(y, minlength=self.n_classes).astype(float)
        node = Node(counts)
        n = len(y)
        if (counts > 0).sum() <= 1 or n < 2 * self.min_leaf:
            return node
        if self.max_depth is not None and depth >= self.max_depth:
            return node

        order = self._candidates(X.shape[1])
        k = len(order) if self.max_features is None else self.max_features
        best = self._pick(X, y, order[:k])
        if best is None and k < len(order):
            best = self._pick(X, y, order[k:])
        if best is None:
            return node

        _, j, thr = best
        mask = X[:, j] <= thr
        node.feature, node.threshold = j, thr
        node.left = self._grow(X[mask], y[mask], depth + 1)
        node.right = self._grow(X[~mask], y[~mask], depth + 1)
        return node


def preferred_argmax(counts: np.ndarray, preference: np.ndarray) -> int:
    """Argmax over ``counts``; ties go to the class listed first in ``preference``."""
    best = counts.max()
    for c in preference:
        if counts[c] == best:
            return int(c)
    raise AssertionError("unreachable")


def preferred_argmax_rows(counts: np.ndarray, preference: np.ndarray) -> np.ndarray:
    """Row-wise ``preferred_argmax``."""
    ordered = counts[:, preference]
    first = np.argmax(ordered == ordered.max(axis=1, keepdims=True), axis=1)
    return np.asarray(preference)[first]


class FlatTree:
    """Array form of a grown tree for vectorised prediction and serialisation."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=int)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=int)
        self.right = np.asarray(right, dtype=int)
        self.value = np.asarray(value, dtype=float).reshape(len(self.feature), -1)

    @classmethod
    def from_node(cls, root: Node) -> "FlatTree":
        feature, threshold, left, right, value = [], [], [], [], []

        def visit(node: Node) -> int:
            idx = len(feature)
            feature.append(node.feature)
            threshold.append(node.threshold)
            left.append(-1)
            right.append(-1)
            counts = node.counts if node.extra is None else node.counts + node.extra
            value.append(counts)
            if not node.is_leaf:
                left[idx] = visit(node.left)
                right[idx] = visit(node.right)
            return idx

        visit(root)
        return cls(feature, threshold, left, right, value)

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        X = np.asarray(X, dtype=float)
        node = np.zeros(len(X), dtype=int)
        rows = np.arange(len(X))
        while True:
            internal = self.left[node] >= 0
            if not internal.any():
                return node
            r = rows[internal]
            nd = node[internal]
            go_left = X[r, self.feature[nd]] <= self.threshold[nd]
            node[internal] = np.where(go_left, self.left[nd], self.right[nd])

    def leaf_counts(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_state(self) -> dict:
        return {
            "feature": self.feature.tolist(), "threshold": self.threshold.tolist(),
            "left": self.left.tolist(), "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict) -> "FlatTree":
        return cls(state["feature"], state["threshold"], state["left"], state["right"], state["value"])


def _distribution(counts: np.ndarray) -> np.ndarray:
    total = counts.sum(axis=1, keepdims=True)
    return counts / np.where(total > 0, total, 1.0)


def stratified_holdout(y: np.ndarray, fraction: float, rng: np.random.Generator):
    """Split indices into (grow, prune) keeping class proportions."""
    grow, prune = [], []
    for c in np.unique(y):
        idx = np.flatnonzero(y == c)
        idx = idx[rng.permutation(len(idx))]
        n_prune = int(math.floor(len(idx) * fraction))
        prune.extend(idx[:n_prune])
        grow.extend(idx[n_prune:])
    return np.sort(np.asarray(grow, dtype=int)), np.sort(np.asarray(prune, dtype=int))


class REPTree:
    """Information-gain tree with reduced-error pruning and back-fitting."""

    name = "reptree"
    defaults = {"min_leaf": 2, "prune_fraction": 1.0 / 3.0, "max_depth": None}

    def __init__(self, min_leaf=2, prune_fraction=1.0 / 3.0, max_depth=None):
        if not 0.0 <= prune_fraction < 1.0:
            raise ValueError("prune_fraction must be in [0, 1)")
        self.min_leaf = int(min_leaf)
        self.prune_fraction = float(prune_fraction)
        self.max_depth = max_depth

    def fit(self, X, y, n_classes, rng=None, preference=None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        rng = rng if rng is not None else np.random.default_rng(0)
        self.n_classes = n_classes
        self.preference = np.asarray(
            preference if preference is not None else range(n_classes), dtype=int
        )
        grow_idx, prune_idx = stratified_holdout(y, self.prune_fraction, rng)
        if len(prune_idx) == 0 or len(np.unique(y[grow_idx])) < 2:
            grow_idx, prune_idx = np.arange(len(y)), np.zeros(0, dtype=int)
        grower = TreeGrower(n_classes, min_leaf=self.min_leaf, max_depth=self.max_depth)
        root = grower.grow(X[grow_idx], y[grow_idx])
        self.unpruned_ = FlatTree.from_node(root)
        if len(prune_idx):
            self._prune(root, X[prune_idx], y[prune_idx])
        self.tree_ = FlatTree.from_node(root)
        self.prune_X_, self.prune_y_ = X[prune_idx], y[prune_idx]
        return self

    def _prune(self, node: Node, X: np.ndarray, y: np.ndarray) -> float:
        """Prune ``node`` in place; returns pruning-set errors of the result."""
        node.extra = np.bincount(y, minlength=self.n_classes).astype(float)
        as_leaf = float(len(y) - node.extra[preferred_argmax(node.counts, self.preference)])
        if node.is_leaf:
            return as_leaf
        mask = X[:, node.feature] <= node.threshold
        subtree = self._prune(node.left, X[mask], y[mask]) + self._prune(node.right, X[~mask], y[~mask])
        if as_leaf <= subtree:
            node.left = node.right = None
            node.feature = -1
            return as_leaf
        return subtree

    def predict_proba(self, X):
        return _distribution(self.tree_.leaf_counts(X))

    def to_state(self) -> dict:
        return {"min_leaf": self.min_leaf, "prune_fraction": self.prune_fraction,
                "max_depth": self.max_depth, "n_classes": self.n_classes,
                "preference": self.preference.tolist(), "tree": self.tree_.to_state()}

    @classmethod
    def from_state(cls, state: dict) -> "REPTree":
        model = cls(state["min_leaf"], state["prune_fraction"], state["max_depth"])
        model.n_classes = state["n_classes"]
        model.preference = np.asarray(state["preference"], dtype=int)
        model.tree_ = FlatTree.from_state(state["tree"])
        return model


def default_max_features(n_features: int) -> int:
    return int(math.floor(math.log2(n_features))) + 1 if n_features > 0 else 1


class RandomForest:
    """Unpruned random trees on bootstrap samples, combined by majority vote.

    Tree ``i`` draws all of its randomness from ``default_rng([seed, i])``, so
    a forest is reproducible whatever order the trees are built in.
    """

    name = "random_forest"
    defaults = {"n_trees": 100, "max_features": None, "min_leaf": 1, "max_depth": None}

    def __init__(self, n_trees=100, max_features=None, min_leaf=1, max_depth=None):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = int(n_trees)
        self.max_features = max_features
        self.min_leaf = int(min_leaf)
        self.max_depth = max_depth

    def fit(self, X, y, n_classes, rng=None, preference=None, seed=0):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        self.n_classes = n_classes
        self.preference = np.asarray(
            preference if preference is not None else range(n_classes), dtype=int
        )
        m = self.max_features or default_max_features(X.shape[1])
        self.trees_ = [self._grow_one(X, y, m, np.random.default_rng([seed, i]))
                       for i in range(self.n_trees)]
        return self

    def _grow_one(self, X, y, m, rng) -> FlatTree:
        boot = rng.integers(0, len(y), size=len(y))
        grower = TreeGrower(self.n_classes, self.min_leaf, self.max_depth,
                            max_features=m if m < X.shape[1] else None, rng=rng)
        return FlatTree.from_node(grower.grow(X[boot], y[boot]))

    def tree_votes(self, tree: FlatTree, X: np.ndarray) -> np.ndarray:
        return preferred_argmax_rows(tree.leaf_counts(X), self.preference)

    def predict_proba(self, X):
        X = np.asarray(X, dtype=float)
        votes = np.zeros((len(X), self.n_classes))
        rows = np.arange(len(X))
        for tree in self.trees_:
            votes[rows, self.tree_votes(tree, X)] += 1.0
        return votes / len(self.trees_)

    def to_state(self) -> dict:
        return {"n_trees": self.n_trees, "max_features": self.max_features,
                "min_leaf": self.min_leaf, "max_depth": self.max_depth,
                "n_classes": self.n_classes, "preference": self.preference.tolist(),
                "trees": [t.to_state() for t in self.trees_]}

    @classmethod
    def from_state(cls, state: dict) -> "RandomForest":
        model = cls(state["n_trees"], state["max_features"], state["min_leaf"], state["max_depth"])
        model.n_classes = state["n_classes"]
        model.preference = np.asarray(state["preference"], dtype=int)
        model.trees_ = [FlatTree.from_state(t) for t in state["trees"]]
        return model
