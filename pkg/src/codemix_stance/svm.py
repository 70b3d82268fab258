"""Support vector machines over binary feature matrices.

Both solvers are binary; :mod:`codemix_stance.classify` wraps them one-vs-rest.
"""
from __future__ import annotations

import math

import numpy as np

TAU = 1e-12


def squared_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise squared euclidean distances between rows of two binary matrices.

    For 0/1 rows this is the size of the symmetric difference, computed in
    integers so the result is exact and symmetric.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    na = (A * A).sum(axis=1)
    nb = (B * B).sum(axis=1)
    return na[:, None] + nb[None, :] - 2 * (A @ B.T)


def rbf_kernel_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(-gamma * squared_distances(A, B).astype(np.float64))


def rbf_kernel(x, y, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2) for two vectors of equal length."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = x.astype(np.float64) - y.astype(np.float64)
    return math.exp(-gamma * float(diff @ diff))


def smo(K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-3, max_iter: int | None = None):
    """Solve the C-SVM dual with SMO and second-order working set selection.

    ``K`` is the precomputed kernel matrix and ``y`` holds +1/-1 labels.
    Iterates until the maximal KKT violation drops below ``tol``.
    Returns ``(alpha, rho, iterations)``; the decision function is
    ``sum_t alpha_t y_t K(x_t, x) - rho``.
    """
    n = len(y)
    y = y.astype(np.float64)
    if max_iter is None:
        max_iter = max(10_000_000, 100 * n)
    alpha = np.zeros(n)
    G = -np.ones(n)
    diag = np.diag(K).copy()
    it = 0
    while it < max_iter:
        minus_yG = -y * G
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            break
        masked = np.where(up, minus_yG, -np.inf)
        i = int(np.argmax(masked))
        m = masked[i]
        M = np.where(low, minus_yG, np.inf).min()
        if m - M < tol:
            break

        Ki = K[i]
        b = m - minus_yG
        cand = low & (b > 0)
        a = diag[i] + diag - 2.0 * Ki
        a = np.where(a > 0, a, TAU)
        gain = np.where(cand, -(b * b) / a, np.inf)
        j = int(np.argmin(gain))

        yi, yj = y[i], y[j]
        a_ij = a[j]
        b_ij = b[j]
        old_i, old_j = alpha[i], alpha[j]
        total = yi * old_i + yj * old_j
        new_i = old_i + yi * b_ij / a_ij
        new_i = min(max(new_i, 0.0), C)
        new_j = yj * (total - yi * new_i)
        new_j = min(max(new_j, 0.0), C)
        new_i = yi * (total - yj * new_j)
        alpha[i], alpha[j] = new_i, new_j

        d_i, d_j = new_i - old_i, new_j - old_j
        G += y * (yi * d_i * Ki + yj * d_j * K[j])
        it += 1
    return alpha, _rho(alpha, y, G, C), it


def _rho(alpha, y, G, C) -> float:
    yG = y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(yG[free].mean())
    at_upper = alpha >= C
    at_lower = alpha <= 0
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yG[ub_mask].min() if ub_mask.any() else np.inf
    lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
    if np.isinf(ub) or np.isinf(lb):
        return float(ub if np.isfinite(ub) else lb if np.isfinite(lb) else 0.0)
    return float((ub + lb) / 2)


def hinge_objective(w: np.ndarray, Xa: np.ndarray, y: np.ndarray, C: float) -> float:
    margins = y * (Xa @ w)
    return 0.5 * float(w @ w) + C * float(np.maximum(0.0, 1.0 - margins).sum())


def linear_svm(X: np.ndarray, y: np.ndarray, C: float, epochs: int = 1000, tol: float = 1e-6):
    """Primal L2-regularized hinge loss by full-batch subgradient descent.

    Minimizes ``0.5 ||w||^2 + C sum_i max(0, 1 - y_i (w.x_i + b))`` with the
    bias folded in as a constant feature. Step size ``1/t`` with projection
    onto the ball that contains the optimum. Returns ``(w, b, epochs_run)``
    for the best iterate seen; stops once the objective changes by less than
    ``tol`` between epochs.
    """
    n = X.shape[0]
    Xa = np.hstack([X.astype(np.float64), np.ones((n, 1))])
    y = y.astype(np.float64)
    radius = math.sqrt(C * n)
    w = np.zeros(Xa.shape[1])
    best_w, best_obj = w, math.inf
    prev = math.inf
    t = 0
    for t in range(1, epochs + 1):
        margins = y * (Xa @ w)
        obj = 0.5 * float(w @ w) + C * float(np.maximum(0.0, 1.0 - margins).sum())
        if obj < best_obj:
            best_obj, best_w = obj, w
        if abs(prev - obj) < tol:
            break
        prev = obj
        push = Xa.T @ np.where(margins < 1.0, y, 0.0)
        w = (1.0 - 1.0 / t) * w + (C / t) * push
        norm = math.sqrt(float(w @ w))
        if norm > radius:
            w = w * (radius / norm)
    return best_w[:-1].copy(), float(best_w[-1]), t
