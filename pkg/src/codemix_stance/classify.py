"""Three-class stance classifiers: linear SVM, RBF SVM and random forest."""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import forest as _forest
from . import svm as _svm
from .corpus import LABEL_INDEX, LABELS, StanceLabel
from .features import FeatureVector, to_matrix

MODEL_FORMAT = "codemix-stance model v1"


class ModelKind(enum.Enum):
    LINEAR_SVM = "linear-svm"
    RBF_SVM = "rbf-svm"
    RANDOM_FOREST = "random-forest"


class TrainingError(RuntimeError):
    pass


class ModelMismatchError(ValueError):
    """Vector or feature space does not belong to the model."""


@dataclass(frozen=True)
class ModelConfig:
    kind: ModelKind = ModelKind.RBF_SVM
    c: float = 1.0
    gamma: Union[float, str] = "auto"  # "auto" = 1 / number of features
    trees: int = 100
    max_depth: Optional[int] = None
    seed: int = 0
    epochs: int = 1000  # linear SVM
    tol: float = 1e-3  # SMO KKT tolerance

    def __post_init__(self):
        if not isinstance(self.kind, ModelKind):
            object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.gamma != "auto" and not (isinstance(self.gamma, (int, float)) and self.gamma > 0):
            raise ValueError("gamma must be positive or 'auto'")
        if self.trees < 1 or self.epochs < 1:
            raise ValueError("trees and epochs must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")

    def resolved_gamma(self, n_features: int) -> float:
        if self.gamma == "auto":
            return 1.0 / n_features if n_features > 0 else 1.0
        return float(self.gamma)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


@dataclass
class TrainedModel:
    config: ModelConfig
    n_features: int
    params: dict
    space_fingerprint: str = ""
    _trees: Optional[list] = field(default=None, repr=False, compare=False)

    @property
    def kind(self) -> ModelKind:
        return self.config.kind

    # -- serialization ----------------------------------------------------
    def dumps(self) -> str:
        payload = {
            "config": self.config.as_dict(),
            "n_features": self.n_features,
            "space_fingerprint": self.space_fingerprint,
            "params": _encode(self.params),
        }
        return MODEL_FORMAT + "\n" + json.dumps(payload, sort_keys=True, indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TrainedModel":
        head, _, body = text.partition("\n")
        if head != MODEL_FORMAT:
            raise ValueError("not a model file (or unsupported version)")
        payload = json.loads(body)
        return cls(
            ModelConfig(**payload["config"]),
            payload["n_features"],
            _decode(payload["params"]),
            payload["space_fingerprint"],
        )

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TrainedModel":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


# floats go through float.hex so a reloaded model is bit-identical
def _encode(obj):
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        if obj.dtype.kind == "f":
            return {"dtype": "f8", "shape": list(obj.shape), "data": [float(x).hex() for x in obj.ravel()]}
        return {"dtype": "i8", "shape": list(obj.shape), "data": [int(x) for x in obj.ravel()]}
    if isinstance(obj, list):
        return [_encode(v) for v in obj]
    if isinstance(obj, float):
        return {"float": obj.hex()}
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        if set(obj) == {"dtype", "shape", "data"}:
            if obj["dtype"] == "f8":
                data = np.array([float.fromhex(x) for x in obj["data"]], dtype=np.float64)
            else:
                data = np.array(obj["data"], dtype=np.int64)
            return data.reshape(obj["shape"])
        if set(obj) == {"float"}:
            return float.fromhex(obj["float"])
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


# --------------------------------------------------------------------------

def _as_matrix(vectors, n_features: Optional[int] = None) -> tuple[np.ndarray, str]:
    if isinstance(vectors, np.ndarray):
        return vectors, ""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, n_features or 0), dtype=np.uint8), ""
    spaces = {v.space for v in vectors}
    if len(spaces) > 1:
        raise ModelMismatchError("vectors come from different feature spaces")
    return to_matrix(vectors, vectors[0].size), spaces.pop()


def train(
    config: ModelConfig,
    vectors: Union[np.ndarray, Sequence[FeatureVector]],
    labels: Sequence[StanceLabel],
    space_fingerprint: str = "",
) -> TrainedModel:
    """Fit one classifier; SVMs are trained one-vs-rest, one binary model per label."""
    X, fp = _as_matrix(vectors)
    space_fingerprint = space_fingerprint or fp
    if X.shape[0] == 0:
        raise TrainingError("no training vectors")
    if X.shape[0] != len(labels):
        raise TrainingError(f"{X.shape[0]} vectors but {len(labels)} labels")
    y = np.array([LABEL_INDEX[label] for label in labels], dtype=np.int64)
    if len(set(y.tolist())) < 2:
        raise TrainingError("training data must contain at least two stance labels")
    X = (X != 0).astype(np.uint8)
    d = X.shape[1]

    if config.kind is ModelKind.LINEAR_SVM:
        W = np.zeros((len(LABELS), d))
        b = np.zeros(len(LABELS))
        epochs = []
        for k in range(len(LABELS)):
            yk = np.where(y == k, 1, -1)
            W[k], b[k], ran = _svm.linear_svm(X, yk, config.c, config.epochs)
            epochs.append(ran)
        params = {"weights": W, "bias": b, "epochs_run": np.array(epochs)}

    elif config.kind is ModelKind.RBF_SVM:
        gamma = config.resolved_gamma(d)
        K = _svm.rbf_kernel_matrix(X, X, gamma)
        coef = np.zeros((X.shape[0], len(LABELS)))
        rho = np.zeros(len(LABELS))
        iters = []
        for k in range(len(LABELS)):
            yk = np.where(y == k, 1, -1)
            alpha, rho[k], it = _svm.smo(K, yk, config.c, config.tol)
            coef[:, k] = alpha * yk
            iters.append(it)
        support = np.flatnonzero(np.any(coef != 0, axis=1))
        params = {
            "gamma": gamma,
            "support_vectors": X[support].astype(np.int64),
            "dual_coef": coef[support],
            "rho": rho,
            "iterations": np.array(iters),
        }

    else:
        trees = _forest.fit_forest(X, y, len(LABELS), config.trees, config.max_depth, config.seed)
        params = {
            "trees": [
                {"feature": t.feature, "left": t.left, "right": t.right, "counts": t.counts} for t in trees
            ]
        }
        return TrainedModel(config, d, params, space_fingerprint, trees)

    return TrainedModel(config, d, params, space_fingerprint)


def decision_values(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """``(rows, 3)`` per-label scores; forest scores are vote counts."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.n_features:
        raise ModelMismatchError(f"model expects {model.n_features} features, got {X.shape[1]}")
    p = model.params
    if model.kind is ModelKind.LINEAR_SVM:
        return X.astype(np.float64) @ p["weights"].T + p["bias"]
    if model.kind is ModelKind.RBF_SVM:
        K = _svm.rbf_kernel_matrix(X, p["support_vectors"], p["gamma"])
        return K @ p["dual_coef"] - p["rho"]
    if model._trees is None:
        model._trees = [_forest.Tree(t["feature"], t["left"], t["right"], t["counts"]) for t in p["trees"]]
    return _forest.forest_votes(model._trees, X, len(LABELS)).astype(np.float64)


def predict_matrix(model: TrainedModel, X: np.ndarray) -> list[StanceLabel]:
    # argmax returns the first maximum, i.e. FAVOR < AGAINST < NONE on ties
    return [LABELS[i] for i in np.argmax(decision_values(model, X), axis=1)]


def predict(model: TrainedModel, vector: Union[FeatureVector, np.ndarray]) -> StanceLabel:
    if isinstance(vector, FeatureVector):
        if vector.space != model.space_fingerprint:
            raise ModelMismatchError("vector was built in a different feature space")
        vector = vector.dense()
    return predict_matrix(model, np.asarray(vector)[None, :])[0]


def with_seed(config: ModelConfig, seed: int) -> ModelConfig:
    return replace(config, seed=seed)
