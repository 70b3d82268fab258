import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codemix_stance.classify import (
    ModelConfig,
    ModelKind,
    ModelMismatchError,
    TrainedModel,
    TrainingError,
    decision_values,
    predict,
    predict_matrix,
    train,
)
from codemix_stance.corpus import StanceLabel
from codemix_stance.features import FeatureVector
from codemix_stance.svm import linear_svm, rbf_kernel, rbf_kernel_matrix, smo, squared_distances

F, A, N = StanceLabel.FAVOR, StanceLabel.AGAINST, StanceLabel.NONE


def separable_set(n=40, noise=8, seed=0):
    """Feature 0 marks FAVOR, feature 1 marks AGAINST; the rest is noise."""
    rng = np.random.default_rng(seed)
    X = (rng.random((n, 2 + noise)) < 0.4).astype(np.uint8)
    labels = [F if i % 2 == 0 else A for i in range(n)]
    X[:, 0] = [lab is F for lab in labels]
    X[:, 1] = [lab is A for lab in labels]
    return X, labels


XOR_X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=np.uint8)
XOR_Y = [F, F, A, A]


def test_rbf_kernel_values():
    assert rbf_kernel([1, 0, 1], [1, 0, 1], 0.5) == 1.0
    assert rbf_kernel([1, 0], [1, 1], 1.0) == math.exp(-1) == 0.36787944117144233
    assert rbf_kernel([1, 0, 1], [0, 1, 0], 1e-12) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rbf_kernel([1, 0], [1, 0, 0], 1.0)
    with pytest.raises(ValueError):
        rbf_kernel([1], [1], 0.0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=12), st.data(), st.floats(1e-3, 5))
def test_rbf_kernel_symmetry(x, data, gamma):
    y = data.draw(st.lists(st.integers(0, 1), min_size=len(x), max_size=len(x)))
    assert rbf_kernel(x, y, gamma) == rbf_kernel(y, x, gamma)
    assert rbf_kernel(x, x, gamma) == 1.0
    assert 0 < rbf_kernel(x, y, gamma) <= 1
    assert squared_distances(np.array([x]), np.array([y]))[0, 0] == sum(a != b for a, b in zip(x, y))


def test_kernel_matrix_symmetric_with_unit_diagonal():
    X, _ = separable_set()
    K = rbf_kernel_matrix(X, X, 0.1)
    assert np.array_equal(K, K.T)
    assert np.all(np.diag(K) == 1.0)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_separable_set_training_accuracy(kind):
    X, labels = separable_set()
    model = train(ModelConfig(kind, seed=1), X, labels)
    acc = np.mean([p == g for p, g in zip(predict_matrix(model, X), labels)])
    assert acc >= (0.95 if kind is ModelKind.RANDOM_FOREST else 1.0)
    assert predict(model, X[0]) == labels[0]


def test_rbf_xor():
    model = train(ModelConfig(ModelKind.RBF_SVM, c=10, gamma=1.0), XOR_X, XOR_Y)
    assert predict_matrix(model, XOR_X) == XOR_Y


def test_linear_cannot_do_xor():
    model = train(ModelConfig(ModelKind.LINEAR_SVM), XOR_X, XOR_Y)
    assert predict_matrix(model, XOR_X) != XOR_Y


def test_training_errors():
    X, _ = separable_set(6)
    with pytest.raises(TrainingError):
        train(ModelConfig(), X, [F] * 6)
    with pytest.raises(TrainingError):
        train(ModelConfig(), np.zeros((0, 3), dtype=np.uint8), [])
    with pytest.raises(TrainingError):
        train(ModelConfig(), X, [F, A])


@pytest.mark.parametrize("kwargs", [{"c": 0}, {"gamma": -1.0}, {"trees": 0}, {"max_depth": 0}, {"kind": "svm"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ModelConfig(**kwargs)


def test_forest_zero_vector_goes_to_majority():
    X = np.array([[1, 0], [0, 1], [0, 0], [0, 0], [0, 0]], dtype=np.uint8)
    model = train(ModelConfig(ModelKind.RANDOM_FOREST, seed=3), X, [F, A, N, N, N])
    assert predict(model, np.zeros(2, dtype=np.uint8)) is N


def test_ties_go_to_favor():
    model = TrainedModel(ModelConfig(ModelKind.LINEAR_SVM), 2, {"weights": np.zeros((3, 2)), "bias": np.zeros(3)})
    assert predict(model, np.array([1, 0])) is F
    model.params["bias"] = np.array([0.0, 1.0, 1.0])
    assert predict(model, np.array([1, 0])) is A


def test_linear_decision_is_additive():
    X, labels = separable_set()
    model = train(ModelConfig(ModelKind.LINEAR_SVM), X, labels)
    x = X[3].copy()
    base = decision_values(model, x)
    for j in np.flatnonzero(x):
        y = x.copy()
        y[j] = 0
        assert np.allclose(base - decision_values(model, y), model.params["weights"][:, j])


def test_linear_svm_near_optimum():
    """Subgradient solution is close to the exact primal optimum."""
    sklearn_svm = pytest.importorskip("sklearn.svm")
    rng = np.random.default_rng(5)
    X = (rng.random((80, 15)) < 0.3).astype(np.uint8)
    y = np.where(X[:, 0] + X[:, 1] + rng.random(80) * 0.8 > 1.0, 1, -1)
    w, b, _ = linear_svm(X, y, 1.0)
    Xa = np.hstack([X, np.ones((80, 1))]).astype(float)
    obj = lambda v: 0.5 * v @ v + np.maximum(0, 1 - y * (Xa @ v)).sum()  # noqa: E731
    # exact optimum of the same objective (bias regularized via a constant feature)
    ref = sklearn_svm.LinearSVC(C=1.0, loss="hinge", fit_intercept=False, dual=True, tol=1e-10, max_iter=200000)
    ref.fit(Xa, y)
    assert obj(np.append(w, b)) <= obj(ref.coef_.ravel()) * 1.02


def test_smo_matches_libsvm():
    svm = pytest.importorskip("sklearn.svm")
    rng = np.random.default_rng(11)
    X = (rng.random((60, 20)) < 0.3).astype(np.uint8)
    y = np.where(X[:, :4].sum(axis=1) + rng.random(60) > 2.0, 1, -1)
    K = rbf_kernel_matrix(X, X, 0.05)
    alpha, rho, _ = smo(K, y, 1.0, tol=1e-3)
    ours = K @ (alpha * y) - rho
    ref = svm.SVC(C=1.0, kernel="precomputed", tol=1e-3).fit(K, y)
    assert np.max(np.abs(ours - ref.decision_function(K))) < 5e-3


def test_rbf_permutation_invariance():
    X, labels = separable_set(30, noise=10, seed=4)
    labels = [N if i % 5 == 0 else lab for i, lab in enumerate(labels)]
    config = ModelConfig(ModelKind.RBF_SVM, tol=1e-9)
    perm = np.random.default_rng(0).permutation(len(labels))
    a = train(config, X, labels)
    b = train(config, X[perm], [labels[i] for i in perm])
    probe = (np.random.default_rng(1).random((25, X.shape[1])) < 0.4).astype(np.uint8)
    assert np.max(np.abs(decision_values(a, probe) - decision_values(b, probe))) < 1e-6


@pytest.mark.parametrize("kind", list(ModelKind))
def test_determinism_and_serialization(kind, tmp_path):
    X, labels = separable_set(30)
    labels = [N if i % 4 == 0 else lab for i, lab in enumerate(labels)]
    config = ModelConfig(kind, seed=7, trees=15)
    a = train(config, X, labels, "fp")
    b = train(config, X, labels, "fp")
    assert a.dumps() == b.dumps()
    a.save(tmp_path / "m.txt")
    loaded = TrainedModel.load(tmp_path / "m.txt")
    assert loaded.dumps() == a.dumps()
    assert np.array_equal(decision_values(loaded, X), decision_values(a, X))


def test_forest_seed_matters():
    X, labels = separable_set(30, noise=12)
    labels = [N if i % 3 == 0 else lab for i, lab in enumerate(labels)]
    a = train(ModelConfig(ModelKind.RANDOM_FOREST, seed=1, trees=5), X, labels)
    b = train(ModelConfig(ModelKind.RANDOM_FOREST, seed=2, trees=5), X, labels)
    assert a.dumps() != b.dumps()


def test_fingerprint_mismatch():
    X, labels = separable_set(10)
    vecs = [FeatureVector(tuple(np.flatnonzero(r).tolist()), X.shape[1], "space-a") for r in X]
    model = train(ModelConfig(ModelKind.LINEAR_SVM), vecs, labels)
    assert model.space_fingerprint == "space-a"
    assert predict(model, vecs[0]) == labels[0]
    with pytest.raises(ModelMismatchError):
        predict(model, FeatureVector(vecs[0].indices, X.shape[1], "space-b"))
    with pytest.raises(ModelMismatchError):
        decision_values(model, np.zeros((1, X.shape[1] + 1)))


def test_bad_model_file():
    with pytest.raises(ValueError):
        TrainedModel.loads("something else\n{}")
