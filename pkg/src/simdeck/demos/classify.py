"""Two-class classifiers on bias-extended inputs: a regularized
least-squares discriminant and its kernelized twin working on the Gram
matrix, plus the small geometric helpers the interactive demos need.

The discriminant y(x) = w^T phi(x) classifies x as +1 iff y >= 0.  The
kernel variant y(x) = w^T h(Phi phi(x)) solves w^T = T^T (h(K) + lambda*I)^-1
with K = Phi Phi^T; for the linear kernel and equal lambda both discriminants
coincide (push-through identity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KERNELS = ("linear", "tanh", "gauss")


class EmptyDataError(ValueError):
    pass


class SingularModelError(ValueError):
    pass


def build_design_matrix(X) -> np.ndarray:
    """N x (D+1) matrix with a leading all-ones bias column."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.size == 0 or X.shape[0] == 0:
        raise EmptyDataError("empty data")
    return np.hstack([np.ones((X.shape[0], 1)), X])


def kernel_activation(a, kind: str, sigma: float = 1.0):
    """Elementwise kernel activation: identity, tanh(a/sigma), or
    1 - exp(-a^2 / (2*sigma))."""
    a = np.asarray(a, dtype=np.float64)
    if kind == "linear":
        return a
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0 for kernel '{kind}'")
    if kind == "tanh":
        return np.tanh(a / sigma)
    if kind == "gauss":
        return 1.0 - np.exp(-(a ** 2) / (2.0 * sigma))
    raise ValueError(f"bad kernel '{kind}'")


@dataclass
class LeastSquaresModel:
    w: np.ndarray

    def discriminant(self, X) -> np.ndarray:
        return build_design_matrix(X) @ self.w


@dataclass
class KernelMlpModel:
    w: np.ndarray
    phi: np.ndarray
    kind: str
    sigma: float

    def discriminant(self, X) -> np.ndarray:
        z = kernel_activation(build_design_matrix(X) @ self.phi.T, self.kind, self.sigma)
        return z @ self.w


def _solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        w = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        raise SingularModelError("singular; increase lambda") from None
    if not np.all(np.isfinite(w)):
        raise SingularModelError("singular; increase lambda")
    return w


def fit_least_squares(X, T, lam: float = 0.0) -> LeastSquaresModel:
    """Solve (Phi^T Phi + lambda*I) w = Phi^T T via a linear solve."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    phi = build_design_matrix(X)
    T = np.asarray(T, dtype=np.float64).reshape(-1)
    if T.shape[0] != phi.shape[0]:
        raise ValueError("X and T length mismatch")
    A = phi.T @ phi + lam * np.eye(phi.shape[1])
    return LeastSquaresModel(_solve(A, phi.T @ T))


def fit_kernel_mlp(X, T, kind: str = "tanh", sigma: float = 1.0,
                   lam: float = 0.0) -> KernelMlpModel:
    """Solve w^T = T^T (h(K) + lambda*I)^-1 on the Gram matrix K = Phi
    Phi^T.  The regularizer sits outside the kernel activation so the system
    stays symmetric; at lambda = 0 both placements coincide."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if kind not in KERNELS:
        raise ValueError(f"bad kernel '{kind}'")
    phi = build_design_matrix(X)
    T = np.asarray(T, dtype=np.float64).reshape(-1)
    if T.shape[0] != phi.shape[0]:
        raise ValueError("X and T length mismatch")
    K = phi @ phi.T
    A = kernel_activation(K, kind, sigma) + lam * np.eye(K.shape[0])
    # A is symmetric, so solving A w = T gives w^T = T^T A^-1
    return KernelMlpModel(_solve(A, T), phi, kind, sigma)


def nearest_neighbor(X, x) -> int:
    """Index of the row of X closest to x (Euclidean); ties resolve to the
    lowest index."""
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0 or X.shape[0] == 0:
        raise EmptyDataError("empty data")
    d = np.sum((X - np.asarray(x, dtype=np.float64)) ** 2, axis=1)
    return int(np.argmin(d))


def count_errors(model, X, T) -> int:
    """Number of training points whose predicted sign differs from the
    target; y = 0 counts as class +1."""
    y = model.discriminant(X)
    pred = np.where(y >= 0, 1.0, -1.0)
    return int(np.sum(pred != np.asarray(T, dtype=np.float64).reshape(-1)))
