"""L2-regularized logistic regression trained with a built-in L-BFGS.

Objective, with z = X w + b and the bias left unregularized:

    J(w, b) = 0.5 * ||w||^2 + C * sum_i log(1 + exp(-(2 y_i - 1) z_i))

The optimizer is a standard limited-memory BFGS (two-loop recursion,
history 10) with Armijo backtracking. It starts from w = 0, b = 0 and stops
when the gradient's max-norm drops to ``tol`` or after ``max_iter``
iterations.
"""

from __future__ import annotations

import numpy as np

_ARMIJO_C1 = 1e-4
_MAX_HALVINGS = 40
_CURVATURE_MIN = 1e-10
_HISTORY = 10


def _sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    out = np.empty_like(z)
    pos = z >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(
    theta: np.ndarray, X: np.ndarray, y: np.ndarray, C: float
) -> tuple[float, np.ndarray]:
    """Objective value and gradient at theta = [w_1..w_m, b]."""
    w = theta[:-1]
    b = theta[-1]
    z = X @ w + b
    sign = 1.0 - 2.0 * y  # -1 for positives, +1 for negatives
    a = sign * z
    loss = 0.5 * float(w @ w) + C * float(np.logaddexp(0.0, a).sum())
    dz = C * sign * _sigmoid(a)
    grad = np.empty_like(theta)
    grad[:-1] = w + X.T @ dz
    grad[-1] = dz.sum()
    return loss, grad


def _lbfgs_direction(
    g: np.ndarray, S: list[np.ndarray], Y: list[np.ndarray], rho: list[float]
) -> np.ndarray:
    q = g.copy()
    alphas: list[float] = []
    for s, yv, r in zip(reversed(S), reversed(Y), reversed(rho)):
        a = r * float(s @ q)
        q -= a * yv
        alphas.append(a)
    if S:
        yv = Y[-1]
        gamma = float(S[-1] @ yv) / float(yv @ yv)
        q *= gamma
    for s, yv, r, a in zip(S, Y, rho, reversed(alphas)):
        beta = r * float(yv @ q)
        q += (a - beta) * s
    return -q


class LogisticClassifier:
    """Binary logistic regression; positive class scored by ``predict_proba``."""

    def __init__(self, C: float = 1.0, max_iter: int = 100, tol: float = 1e-6):
        self.C = float(C)
        self.max_iter = int(max_iter)
        self.tol = float(tol)
        self.coef_: np.ndarray | None = None
        self.intercept_: float = 0.0
        self.n_iter_: int = 0
        self.converged_: bool = False

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticClassifier":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError("X must be (n, m) and y must be (n,)")
        theta = np.zeros(X.shape[1] + 1)
        f, g = loss_and_grad(theta, X, y, self.C)
        S: list[np.ndarray] = []
        Y: list[np.ndarray] = []
        rho: list[float] = []
        self.n_iter_ = 0
        self.converged_ = float(np.abs(g).max()) <= self.tol
        while self.n_iter_ < self.max_iter and not self.converged_:
            d = _lbfgs_direction(g, S, Y, rho)
            gd = float(g @ d)
            if gd >= 0.0:  # numerically non-descent: fall back to steepest
                S.clear(); Y.clear(); rho.clear()
                d = -g
                gd = -float(g @ g)
            t = 1.0
            ok = False
            for _ in range(_MAX_HALVINGS):
                theta_n = theta + t * d
                fn, gn = loss_and_grad(theta_n, X, y, self.C)
                if fn <= f + _ARMIJO_C1 * t * gd:
                    ok = True
                    break
                t *= 0.5
            if not ok:
                if not S:
                    break  # no progress even along -g: give up
                S.clear(); Y.clear(); rho.clear()
                continue
            s = theta_n - theta
            yv = gn - g
            ys = float(s @ yv)
            if ys > _CURVATURE_MIN:
                S.append(s)
                Y.append(yv)
                rho.append(1.0 / ys)
                if len(S) > _HISTORY:
                    S.pop(0); Y.pop(0); rho.pop(0)
            theta, f, g = theta_n, fn, gn
            self.n_iter_ += 1
            self.converged_ = float(np.abs(g).max()) <= self.tol
        self.coef_ = theta[:-1].copy()
        self.intercept_ = float(theta[-1])
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        if self.coef_ is None:
            raise RuntimeError("fit before predicting")
        return np.asarray(X, dtype=np.float64) @ self.coef_ + self.intercept_

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) > threshold).astype(np.int64)
