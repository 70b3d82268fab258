"""Random forest of Gini decision trees over binary features."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class Tree:
    # feature[k] == -1 marks a leaf; "right" is the feature-present branch
    feature: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (nodes, n_classes) training class counts

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row of ``X``."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            f = self.feature[node]
            inner = f >= 0
            if not inner.any():
                return node
            present = np.zeros(X.shape[0], dtype=bool)
            present[inner] = X[rows[inner], f[inner]] != 0
            node = np.where(inner, np.where(present, self.right[node], self.left[node]), node)

    def predict(self, X: np.ndarray) -> np.ndarray:
        # argmax takes the first maximum: ties go to the lowest class index
        return np.argmax(self.counts[self.apply(X)], axis=1)


def _best_split(Xn: np.ndarray, Yn: np.ndarray, counts: np.ndarray):
    """Best Gini split among the columns of ``Xn``; None if all are constant."""
    m = Xn.shape[0]
    present = Xn.T.astype(np.int64) @ Yn
    absent = counts[None, :] - present
    n_p = present.sum(axis=1)
    n_a = m - n_p
    valid = (n_p > 0) & (n_a > 0)
    if not valid.any():
        return None
    # minimizing weighted child Gini == maximizing sum_c p_c^2/n_p + a_c^2/n_a
    with np.errstate(divide="ignore", invalid="ignore"):
        purity = (present**2).sum(axis=1) / n_p + (absent**2).sum(axis=1) / n_a
    purity = np.where(valid, purity, -np.inf)
    return int(np.argmax(purity))


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    sample: np.ndarray,
    rng: np.random.Generator,
    n_classes: int,
    max_features: int,
    max_depth: Optional[int] = None,
    min_samples_split: int = 2,
) -> Tree:
    """Grow one tree on the rows ``sample`` (duplicates allowed) until pure."""
    onehot = np.eye(n_classes, dtype=np.int64)[y]
    d = X.shape[1]
    feature, left, right, counts = [], [], [], []

    def new_node(idx):
        feature.append(-1)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[idx], minlength=n_classes))
        return len(feature) - 1

    stack = [(new_node(sample), sample, 0)]
    while stack:
        node, idx, depth = stack.pop()
        c = counts[node]
        if np.count_nonzero(c) <= 1 or len(idx) < min_samples_split:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        order = rng.permutation(d)
        split = None
        for start in range(0, d, max_features):
            cols = order[start:start + max_features]
            best = _best_split(X[np.ix_(idx, cols)], onehot[idx], c)
            if best is not None:
                split = int(cols[best])
                break
        if split is None:
            continue
        has = X[idx, split] != 0
        feature[node] = split
        l_idx, r_idx = idx[~has], idx[has]
        left[node] = new_node(l_idx)
        right[node] = new_node(r_idx)
        stack.append((right[node], r_idx, depth + 1))
        stack.append((left[node], l_idx, depth + 1))
    return Tree(
        np.array(feature, dtype=np.int64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(counts, dtype=np.int64).reshape(-1, n_classes),
    )


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    trees: int = 100,
    max_depth: Optional[int] = None,
    seed: int = 0,
) -> list[Tree]:
    """Bootstrap-sampled trees with sqrt(d) candidate features per split.

    Each tree draws from its own child of ``SeedSequence(seed)``, so the
    result does not depend on the order trees are built in.
    """
    n, d = X.shape
    max_features = max(1, int(math.sqrt(d)))
    forest = []
    for child in np.random.SeedSequence(seed).spawn(trees):
        rng = np.random.default_rng(child)
        sample = rng.integers(0, n, size=n)
        forest.append(grow_tree(X, y, sample, rng, n_classes, max_features, max_depth))
    return forest


def forest_votes(forest: list[Tree], X: np.ndarray, n_classes: int) -> np.ndarray:
    """``(rows, n_classes)`` count of trees voting for each class."""
    votes = np.zeros((X.shape[0], n_classes), dtype=np.int64)
    rows = np.arange(X.shape[0])
    for tree in forest:
        votes[rows, tree.predict(X)] += 1
    return votes
