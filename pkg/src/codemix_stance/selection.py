"""Chi-square feature selection over binary presence features."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .corpus import LABEL_INDEX, LABELS, StanceLabel
from .features import FeatureSpace, FeatureVector, to_matrix

METHODS = ("multiclass", "per-class-max")


@dataclass(frozen=True)
class ContingencyTable:
    """Rows (present, absent) x columns (FAVOR, AGAINST, NONE)."""

    counts: tuple[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        if len(self.counts) != 2 or len({len(r) for r in self.counts}) != 1:
            raise ValueError("contingency table must have two rows of equal length")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("negative count in contingency table")

    @property
    def n(self) -> int:
        return sum(sum(row) for row in self.counts)

    @classmethod
    def from_column(cls, column: Sequence[int], labels: Sequence[StanceLabel]) -> "ContingencyTable":
        present = [0] * len(LABELS)
        absent = [0] * len(LABELS)
        for x, y in zip(column, labels):
            (present if x else absent)[LABEL_INDEX[y]] += 1
        return cls((tuple(present), tuple(absent)))


def _chi2_exact(counts) -> Fraction:
    rows = [sum(r) for r in counts]
    cols = [sum(c) for c in zip(*counts)]
    n = sum(rows)
    if n == 0:
        raise ValueError("empty contingency table")
    total = Fraction(0)
    for i, row in enumerate(counts):
        for j, observed in enumerate(row):
            margin = rows[i] * cols[j]
            if margin == 0:
                continue  # zero expected count carries no signal
            total += Fraction((n * observed - margin) ** 2, n * margin)
    return total


def chi_square_exact(table: ContingencyTable) -> Fraction:
    """Pearson statistic as an exact rational (no continuity correction)."""
    return _chi2_exact(table.counts)


def chi_square_statistic(table: ContingencyTable) -> float:
    return float(_chi2_exact(table.counts))


def _per_class_max(counts) -> Fraction:
    present, absent = counts
    best = Fraction(0)
    for j in range(len(present)):
        two_by_two = (
            (present[j], sum(present) - present[j]),
            (absent[j], sum(absent) - absent[j]),
        )
        best = max(best, _chi2_exact(two_by_two))
    return best


def _matrix(vectors: Union[np.ndarray, Sequence[FeatureVector]], space: FeatureSpace) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        X = vectors
    else:
        X = to_matrix(vectors, len(space))
    if X.ndim != 2 or X.shape[1] != len(space):
        raise ValueError(f"vectors have {X.shape[-1]} columns, feature space has {len(space)}")
    return X


def contingency_counts(X: np.ndarray, labels: Sequence[StanceLabel]) -> np.ndarray:
    """``(d, 2, 3)`` array of present/absent counts per class for every column."""
    y = np.array([LABEL_INDEX[label] for label in labels], dtype=np.int64)
    onehot = np.zeros((len(y), len(LABELS)), dtype=np.int64)
    onehot[np.arange(len(y)), y] = 1
    present = (X != 0).astype(np.int64).T @ onehot
    absent = onehot.sum(axis=0)[None, :] - present
    return np.stack([present, absent], axis=1)


def rank_features(
    vectors, labels: Sequence[StanceLabel], space: FeatureSpace, method: str = "multiclass"
) -> list[tuple[int, Fraction]]:
    """All feature indices, best first: descending statistic, then ascending descriptor key."""
    if method not in METHODS:
        raise ValueError(f"unknown selection method {method!r}")
    X = _matrix(vectors, space)
    if X.shape[0] != len(labels):
        raise ValueError(f"{X.shape[0]} vectors but {len(labels)} labels")
    if X.shape[0] == 0:
        raise ValueError("no vectors to rank features on")
    score = _chi2_exact if method == "multiclass" else _per_class_max
    tables = contingency_counts(X, labels).tolist()
    scored = [(i, score(t)) for i, t in enumerate(tables)]
    scored.sort(key=lambda item: (-item[1], space.descriptors[item[0]].key))
    return scored


def select_top_k(
    vectors, labels: Sequence[StanceLabel], space: FeatureSpace, k: int = 500, method: str = "multiclass"
) -> tuple[FeatureSpace, dict[int, int]]:
    """Keep the ``k`` best features.

    Returns the reduced space (descriptors in rank order) and a map from
    old indices to new dense indices.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ranking = rank_features(vectors, labels, space, method)
    keep = [i for i, _ in ranking[:k]]
    return space.subspace(keep), {old: new for new, old in enumerate(keep)}


def apply_remap(X: np.ndarray, remap: dict[int, int]) -> np.ndarray:
    keep = sorted(remap, key=remap.get)
    return X[:, keep]


def selection_report(ranking: list[tuple[int, Fraction]], space: FeatureSpace, k: int) -> str:
    """Tab-separated ``rank, chi2, descriptor`` lines for the kept features."""
    lines = ["rank\tchi2\tfeature"]
    for rank, (i, value) in enumerate(ranking[:k], start=1):
        lines.append(f"{rank}\t{float(value):.6f}\t{space.descriptors[i].key.replace(chr(9), ':', 1)}")
    return "\n".join(lines) + "\n"
