"""Geodesic basis-function regression on a manifold.

Fits a model y_hat(z) = Exp_p(W phi(z)) to one trajectory by gradient
descent on the manifold, with residuals pulled back to the base point by
parallel transport and an adaptive double-or-halve step size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import BasisConfig, phi_grid
from .errors import SingularityError
from .manifolds import Euclidean, Manifold, Sphere

DEFAULT_ETA = 0.005
DEFAULT_ETA_MAX = 0.03
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 2000
ETA_UNDERFLOW = 1e-12
_TOL_WINDOW = 5  # accepted steps over which relative progress is measured


def _sphere_exp_rows(base, B, U):
    """Row-wise sphere exponential map: U holds intrinsic tangent rows at base."""
    amb = U @ B.T
    norms = np.linalg.norm(amb, axis=1)
    safe = np.maximum(norms, 1e-300)
    out = np.cos(norms)[:, None] * base + np.sin(norms)[:, None] * (amb / safe[:, None])
    out[norms < 1e-12] = base
    return out / np.linalg.norm(out, axis=1)[:, None]


@dataclass(frozen=True)
class GeodesicModel:
    """Base point p plus a tangent weight matrix W (intrinsic_dim x n_basis)."""

    manifold: Manifold
    base: np.ndarray
    weights: np.ndarray
    basis: BasisConfig

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    def predict(self, phases) -> np.ndarray:
        """Reconstructed trajectory points over a phase grid (ambient rows)."""
        Phi = phi_grid(self.basis, phases)
        if isinstance(self.manifold, Sphere):
            B = self.manifold.tangent_basis(self.base)
            return _sphere_exp_rows(self.base, B, Phi @ self.weights.T)
        return np.vstack([self.manifold.exp(self.base, self.weights @ row) for row in Phi])


@dataclass
class FitReport:
    final_error: float
    iterations: int
    converged: bool
    error_history: list[float] = field(default_factory=list)
    step_sizes: list[float] = field(default_factory=list)


def reconstruction_error(model: GeodesicModel, traj, phases) -> float:
    """Half the sum of squared geodesic residuals."""
    traj = np.asarray(traj, dtype=float)
    pred = model.predict(phases)
    if isinstance(model.manifold, Sphere):
        dots = np.clip(np.sum(pred * traj, axis=1), -1.0, 1.0)
        return 0.5 * float(np.sum(np.arccos(dots) ** 2))
    return 0.5 * sum(
        model.manifold.distance(yh, y) ** 2 for yh, y in zip(pred, traj)
    )


def _sphere_log_rows(X, Y):
    """Row-wise ambient Log_x(y) on a sphere; raises near antipodes."""
    dots = np.clip(np.sum(X * Y, axis=1), -1.0, 1.0)
    if np.any(dots <= -1.0 + 1e-8):
        raise SingularityError("log map undefined between (near-)antipodal sphere points")
    d = np.arccos(dots)
    U = Y - dots[:, None] * X
    norms = np.maximum(np.linalg.norm(U, axis=1), 1e-300)
    V = (d / norms)[:, None] * U
    V[d < 1e-12] = 0.0
    return V


def _sphere_pullback(base, B, pred, traj):
    """Residual logs at each prediction, transported to base, intrinsic coords."""
    V = _sphere_log_rows(pred, traj)
    Wd = _sphere_log_rows(pred, np.broadcast_to(base, pred.shape))
    dp = np.linalg.norm(Wd, axis=1)
    safe = np.maximum(dp, 1e-300)
    What = Wd / safe[:, None]
    coef = np.sum(What * V, axis=1)
    moved = V + coef[:, None] * (
        (np.cos(dp) - 1.0)[:, None] * What - np.sin(dp)[:, None] * pred
    )
    moved[dp < 1e-12] = V[dp < 1e-12]
    return moved @ B


def _pullback_residuals(manifold, base, pred, traj):
    """Residual tangent vectors Log_(y_hat)(y), transported to the base point."""
    if isinstance(manifold, Sphere):
        return _sphere_pullback(base, manifold.tangent_basis(base), pred, traj)
    rows = []
    for yh, y in zip(pred, traj):
        v = manifold.log(yh, y)
        rows.append(manifold.transport_matrix(yh, base) @ v)
    return np.vstack(rows)  # (T x intrinsic_dim)


def gradients(model: GeodesicModel, traj, phases):
    """Approximate gradients of the reconstruction error.

    Residuals are parallel-transported from each reconstruction point to
    the base point; the weight gradient is their basis-weighted sum. On
    Euclidean manifolds this is the exact least-squares gradient.
    """
    traj = np.asarray(traj, dtype=float)
    Phi = phi_grid(model.basis, phases)
    pred = model.predict(phases)
    res = _pullback_residuals(model.manifold, model.base, pred, traj)
    grad_base = -res.sum(axis=0)
    grad_weights = -(res.T @ Phi)
    return grad_base, grad_weights


def fit(
    traj,
    phases,
    config: BasisConfig,
    manifold: Manifold,
    p_fixed=None,
    eta: float = DEFAULT_ETA,
    eta_max: float = DEFAULT_ETA_MAX,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
):
    """Fit a geodesic basis-function model to one trajectory.

    When p_fixed is given, the base point stays put and only the weights
    are updated. A proposed step is accepted only if it strictly decreases
    the error; on acceptance the step size doubles (capped at eta_max),
    otherwise it halves. Returns (GeodesicModel, FitReport).
    """
    traj = np.asarray(traj, dtype=float)
    if traj.shape[0] < 2:
        raise ValueError("need at least two trajectory points")

    if p_fixed is not None:
        p = np.asarray(p_fixed, dtype=float)
        free_base = False
    else:
        p = traj[0].copy()
        free_base = True
    W = np.zeros((manifold.intrinsic_dim, config.n_basis))

    # The inner loop reuses the basis matrix and (for spheres) the tangent
    # basis at the current base point instead of rebuilding them per call.
    Phi = phi_grid(config, phases)
    on_sphere = isinstance(manifold, Sphere)
    flat = isinstance(manifold, Euclidean)

    def predict_at(p_cur, W_cur, B_cur):
        if on_sphere:
            return _sphere_exp_rows(p_cur, B_cur, Phi @ W_cur.T)
        if flat:
            return p_cur + Phi @ W_cur.T
        return np.vstack([manifold.exp(p_cur, W_cur @ row) for row in Phi])

    def error_of(pred):
        if on_sphere:
            dots = np.clip(np.sum(pred * traj, axis=1), -1.0, 1.0)
            return 0.5 * float(np.sum(np.arccos(dots) ** 2))
        if flat:
            return 0.5 * float(np.sum((pred - traj) ** 2))
        return 0.5 * sum(manifold.distance(yh, y) ** 2 for yh, y in zip(pred, traj))

    def gradients_at(p_cur, B_cur, pred):
        if on_sphere:
            res = _sphere_pullback(p_cur, B_cur, pred, traj)
        elif flat:
            res = traj - pred
        else:
            res = np.vstack(
                [
                    manifold.transport_matrix(yh, p_cur) @ manifold.log(yh, y)
                    for yh, y in zip(pred, traj)
                ]
            )
        return -res.sum(axis=0), -(res.T @ Phi)

    B = manifold.tangent_basis(p)
    pred = predict_at(p, W, B)
    err = error_of(pred)
    history = [err]
    steps = []
    converged = False
    grad_p, grad_W = gradients_at(p, B, pred)

    iterations = 0
    while iterations < max_iter:
        iterations += 1
        try:
            if free_base:
                p_new = manifold.exp(p, -eta * grad_p)
                B_new = manifold.tangent_basis(p_new)
                R = manifold.transport_matrix(p, p_new)
                W_new = R @ (W - eta * grad_W)
            else:
                p_new, B_new = p, B
                W_new = W - eta * grad_W
            pred_new = predict_at(p_new, W_new, B_new)
            err_new = error_of(pred_new)
        except SingularityError:
            # A reconstruction point crossed an antipode; treat as rejected.
            err_new = np.inf

        if err_new < err:
            p, W, B, err, pred = p_new, W_new, B_new, err_new, pred_new
            history.append(err)
            steps.append(eta)
            eta = min(2.0 * eta, eta_max)
            grad_p, grad_W = gradients_at(p, B, pred)
            if len(history) > _TOL_WINDOW:
                prev = history[-1 - _TOL_WINDOW]
                if abs(prev - err) <= tol * max(err, 1e-300):
                    converged = True
                    break
        else:
            eta *= 0.5
            if eta < ETA_UNDERFLOW:
                converged = True
                break

    model = GeodesicModel(manifold, p, W, config)
    report = FitReport(
        final_error=err,
        iterations=iterations,
        converged=converged,
        error_history=history,
        step_sizes=steps,
    )
    return model, report
