"""Cross-validation, accuracy and Cohen's kappa."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .classify import ModelConfig, ModelKind, TrainingError, predict_matrix, train, with_seed
from .corpus import LABEL_INDEX, LABELS, Corpus, StanceLabel
from .features import (
    FAMILIES,
    Thresholds,
    corpus_fingerprint,
    fit_feature_space,
    prepare_documents,
    vectorize_matrix,
)
from .preprocess import EMPTY_STOPWORDS, StopwordList
from .selection import apply_remap, select_top_k

REPORT_VERSION = 1


def accuracy(predictions: Sequence, gold: Sequence) -> float:
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions but {len(gold)} gold labels")
    if not gold:
        raise ValueError("accuracy of an empty sequence is undefined")
    return sum(p == g for p, g in zip(predictions, gold)) / len(gold)


def _categories(values) -> list:
    values = set(values)
    if all(isinstance(v, StanceLabel) for v in values):
        return [c for c in LABELS if c in values]
    return sorted(values, key=str)


def agreement_matrix(a: Sequence, b: Sequence, categories: Optional[Sequence] = None) -> tuple[list, np.ndarray]:
    """Counts of (label in ``a``, label in ``b``) pairs."""
    if categories is None:
        categories = _categories(list(a) + list(b))
    pos = {c: i for i, c in enumerate(categories)}
    m = np.zeros((len(categories), len(categories)), dtype=np.int64)
    for x, y in zip(a, b):
        m[pos[x], pos[y]] += 1
    return list(categories), m


def cohens_kappa(a: Sequence, b: Sequence) -> float:
    """Chance-corrected agreement between two annotators over the same items."""
    if len(a) != len(b):
        raise ValueError("annotation sequences differ in length")
    if not a:
        raise ValueError("kappa of empty sequences is undefined")
    if len(set(a)) == 1 and len(set(b)) == 1:
        # constant annotators: identical is perfect agreement by convention, differing is undefined
        if list(a) == list(b):
            return 1.0
        raise ValueError("kappa undefined: each annotator uses a single, different label")
    _, m = agreement_matrix(a, b)
    n = m.sum()
    p_o = np.trace(m) / n
    p_e = float((m.sum(axis=1) * m.sum(axis=0)).sum()) / (n * n)
    return float((p_o - p_e) / (1.0 - p_e))


def stratified_folds(labels: Sequence, k: int = 10, seed: int = 0, stratify: bool = True) -> list[int]:
    """Fold number for every example.

    Each class is shuffled and dealt round-robin, continuing where the
    previous class stopped, so per-class fold sizes differ by at most one
    and so do total fold sizes.
    """
    n = len(labels)
    if k < 2:
        raise ValueError("need at least two folds")
    if k > n:
        raise ValueError(f"{k} folds for {n} examples")
    rng = np.random.default_rng(seed)
    if stratify:
        order = []
        for label in _categories(labels):
            members = [i for i, y in enumerate(labels) if y == label]
            order.extend(rng.permutation(members).tolist())
    else:
        order = rng.permutation(n).tolist()
    assignment = [0] * n
    for pos, i in enumerate(order):
        assignment[i] = pos % k
    return assignment


@dataclass(frozen=True)
class PipelineConfig:
    features: str = "all"  # char | word | si | all
    thresholds: Thresholds = Thresholds()
    top_k: int = 500
    selection: str = "multiclass"
    model: ModelConfig = ModelConfig()
    folds: int = 10
    seed: int = 0
    stratify: bool = True

    def __post_init__(self):
        if self.features not in FAMILIES:
            raise ValueError(f"unknown feature family {self.features!r}")

    def lines(self) -> list[str]:
        t = self.thresholds
        m = self.model
        return [
            f"features={self.features}",
            f"char_min={t.char_min}",
            f"word_min={t.word_min}",
            f"si_min_count={t.si_min_count}",
            f"si_min_score={t.si_min_score!r}",
            f"count_mode={t.count_mode}",
            f"top_k={self.top_k}",
            f"selection={self.selection}",
            f"model={m.kind.value}",
            f"c={m.c!r}",
            f"gamma={m.gamma!r}".replace("'", ""),
            f"trees={m.trees}",
            f"max_depth={m.max_depth}",
            f"epochs={m.epochs}",
            f"tol={m.tol!r}",
            f"folds={self.folds}",
            f"seed={self.seed}",
            f"stratify={str(self.stratify).lower()}",
        ]


@dataclass
class FoldResult:
    index: int
    accuracy: float
    train_fingerprint: str
    n_train: int
    n_test: int
    n_features_fitted: int
    n_features_selected: int
    space_fingerprint: str
    train_ids: tuple[str, ...] = field(default=(), repr=False)


@dataclass
class EvalReport:
    folds: list[FoldResult]
    confusion: np.ndarray  # rows gold, columns predicted, LABELS order
    config: PipelineConfig
    stopwords_sha256: str
    assignment: list[int]
    ids: list[str]

    @property
    def per_fold_accuracy(self) -> list[float]:
        return [f.accuracy for f in self.folds]

    @property
    def mean_accuracy(self) -> float:
        return float(sum(self.per_fold_accuracy) / len(self.folds))

    def per_class(self) -> dict[StanceLabel, tuple[float, float, float]]:
        """Precision, recall and F1 per label (informational)."""
        out = {}
        for j, label in enumerate(LABELS):
            tp = self.confusion[j, j]
            pred = self.confusion[:, j].sum()
            gold = self.confusion[j, :].sum()
            p = tp / pred if pred else 0.0
            r = tp / gold if gold else 0.0
            f = 2 * p * r / (p + r) if p + r else 0.0
            out[label] = (float(p), float(r), float(f))
        return out

    def to_text(self) -> str:
        lines = [f"# codemix-stance eval report v{REPORT_VERSION}"]
        lines += self.config.lines()
        lines.append(f"stopwords_sha256={self.stopwords_sha256}")
        lines.append(f"mean_accuracy={self.mean_accuracy!r}")
        lines.append(f"mean_accuracy_pct={100 * self.mean_accuracy:.1f}")
        for f in self.folds:
            lines.append(
                f"fold.{f.index}: accuracy={f.accuracy!r} n_train={f.n_train} n_test={f.n_test} "
                f"fitted={f.n_features_fitted} selected={f.n_features_selected} "
                f"train_ids_sha256={f.train_fingerprint} space={f.space_fingerprint}"
            )
        lines.append("confusion (rows gold, columns predicted): " + " ".join(lab.value for lab in LABELS))
        for label, row in zip(LABELS, self.confusion):
            lines.append(f"confusion.{label.value}=" + ",".join(str(int(c)) for c in row))
        for label, (p, r, f1) in self.per_class().items():
            lines.append(f"class.{label.value}: precision={p:.4f} recall={r:.4f} f1={f1:.4f}")
        lines.append("assignment=" + ",".join(f"{i}:{k}" for i, k in zip(self.ids, self.assignment)))
        return "\n".join(lines) + "\n"


class FoldError(RuntimeError):
    def __init__(self, fold: int, cause: Exception):
        self.fold = fold
        super().__init__(f"fold {fold}: {cause}")


def cross_validate(
    corpus: Corpus, config: PipelineConfig = PipelineConfig(), stopwords: StopwordList = EMPTY_STOPWORDS
) -> EvalReport:
    """k-fold evaluation; features, selection and model are fitted per training split."""
    if not corpus.is_stanced:
        raise ValueError("cross-validation needs stance labels on every tweet")
    docs = prepare_documents(corpus, stopwords)
    labels = corpus.labels
    assignment = stratified_folds(labels, config.folds, config.seed, config.stratify)
    families = FAMILIES[config.features]
    confusion = np.zeros((len(LABELS), len(LABELS)), dtype=np.int64)
    seeds = np.random.SeedSequence(config.seed).generate_state(config.folds, dtype=np.uint32)
    results = []
    for fold in range(config.folds):
        train_idx = [i for i, f in enumerate(assignment) if f != fold]
        test_idx = [i for i, f in enumerate(assignment) if f == fold]
        train_docs = [docs[i] for i in train_idx]
        test_docs = [docs[i] for i in test_idx]
        train_y = [labels[i] for i in train_idx]
        try:
            space = fit_feature_space(train_docs, families, config.thresholds, stopwords.sha256)
            X = vectorize_matrix(train_docs, space)
            reduced, remap = select_top_k(X, train_y, space, config.top_k, config.selection)
            model = train(with_seed(config.model, int(seeds[fold])), apply_remap(X, remap), train_y, reduced.fingerprint)
        except (TrainingError, ValueError) as exc:
            raise FoldError(fold, exc) from exc
        pred = predict_matrix(model, vectorize_matrix(test_docs, reduced))
        gold = [labels[i] for i in test_idx]
        for g, p in zip(gold, pred):
            confusion[LABEL_INDEX[g], LABEL_INDEX[p]] += 1
        train_ids = tuple(corpus.tweets[i].id for i in train_idx)
        results.append(
            FoldResult(
                fold,
                accuracy(pred, gold),
                corpus_fingerprint(train_ids),
                len(train_idx),
                len(test_idx),
                len(space),
                len(reduced),
                reduced.fingerprint,
                space.fitted_ids,
            )
        )
    return EvalReport(results, confusion, config, stopwords.sha256, assignment, corpus.ids)


GRID_ROWS = (("char", "Character n-grams"), ("word", "Word n-grams"), ("si", "Stance indicative tokens"), ("all", "All features"))
GRID_COLS = (ModelKind.RBF_SVM, ModelKind.RANDOM_FOREST, ModelKind.LINEAR_SVM)


def format_grid(reports: dict[tuple[str, ModelKind], EvalReport]) -> str:
    """Accuracy grid: feature subsets down, classifiers across (percent, 1 decimal)."""
    cols = [k for k in GRID_COLS if any(key[1] is k for key in reports)]
    rows = [(key, name) for key, name in GRID_ROWS if any(r[0] == key for r in reports)]
    width = max([len("Features")] + [len(name) for _, name in rows])
    header = f"{'Features':<{width}}" + "".join(f"  {k.value:>13}" for k in cols)
    out = [header]
    for key, name in rows:
        cells = []
        for k in cols:
            rep = reports.get((key, k))
            cells.append(f"  {100 * rep.mean_accuracy:>13.1f}" if rep else f"  {'-':>13}")
        out.append(f"{name:<{width}}" + "".join(cells))
    return "\n".join(out) + "\n"
