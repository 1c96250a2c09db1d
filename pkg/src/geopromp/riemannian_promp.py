"""Probabilistic movement primitives on Riemannian manifolds.

A Gaussian over stacked tangent weight vectors at a shared base point
induces a trajectory distribution through the geodesic basis-function
model. Learning runs one geodesic regression per demonstration (the base
point is estimated on the first demonstration and frozen afterwards, so
all weight vectors live in the same tangent space).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import geodesic_fit
from .basis import BasisConfig, phase_from_times, psi_matrix
from .errors import ConvergenceError, InvalidArgumentError
from .gaussians import (
    EuclideanGaussian,
    RiemannianGaussian,
    fit_gaussian_mle,
    gaussian_product_manifold,
)
from .manifolds import Manifold, Sphere
from .promp import EuclideanPromp, ViaPoint
from . import promp as euclidean_promp

DEFAULT_RESAMPLE = 100
NOISE_FLOOR = 1e-8


def _symmetrize(A):
    return 0.5 * (A + A.T)


def preprocess_quaternions(traj) -> np.ndarray:
    """Normalize a quaternion sequence and remove antipodal sign flips.

    The first quaternion's sign is fixed so its scalar part is
    nonnegative; each subsequent sample is flipped whenever its dot
    product with the previous one is negative.
    """
    Q = np.asarray(traj, dtype=float).copy()
    if Q.ndim != 2 or Q.shape[1] != 4:
        raise InvalidArgumentError("expected a (T x 4) quaternion array")
    norms = np.linalg.norm(Q, axis=1)
    if np.any(norms < 1e-12):
        raise InvalidArgumentError("zero-norm quaternion in trajectory")
    Q /= norms[:, None]
    if Q[0, 0] < 0:
        Q[0] = -Q[0]
    for t in range(1, Q.shape[0]):
        if np.dot(Q[t], Q[t - 1]) < 0:
            Q[t] = -Q[t]
    return Q


def resample_on_manifold(manifold: Manifold, phases, points, grid) -> np.ndarray:
    """Geodesic interpolation of a manifold trajectory onto a phase grid."""
    phases = np.asarray(phases, dtype=float)
    points = np.asarray(points, dtype=float)
    grid = np.asarray(grid, dtype=float)
    out = np.empty((grid.size, manifold.ambient_dim))
    for k, z in enumerate(grid):
        i = int(np.searchsorted(phases, z, side="right")) - 1
        i = min(max(i, 0), phases.size - 2)
        span = phases[i + 1] - phases[i]
        s = 0.0 if span <= 0 else (z - phases[i]) / span
        out[k] = manifold.exp(points[i], s * manifold.log(points[i], points[i + 1]))
    return out


@dataclass(frozen=True)
class RiemannianPromp:
    """Trajectory distribution on a manifold, parametrized in T_p M."""

    manifold: Manifold
    basis: BasisConfig
    base: np.ndarray  # shared tangent-space origin, ambient coordinates
    weights: EuclideanGaussian  # over stacked intrinsic weights (m * n_basis)
    noise: np.ndarray  # (m x m) observation covariance in tangent coordinates

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "noise", np.asarray(self.noise, dtype=float))
        m = self.manifold.intrinsic_dim
        if self.weights.mean.size != m * self.basis.n_basis:
            raise InvalidArgumentError("weight dimension must equal intrinsic_dim * n_basis")
        if self.noise.shape != (m, m):
            raise InvalidArgumentError("noise covariance must be intrinsic-dim square")

    def _psi(self, z):
        return psi_matrix(self.basis, z, self.manifold.intrinsic_dim)

    def marginal(self, z: float) -> RiemannianGaussian:
        """Mean on the manifold; covariance transported to the mean's tangent space."""
        Psi = self._psi(z)
        v = Psi @ self.weights.mean
        if np.linalg.norm(v) > np.pi / 2:
            warnings.warn(
                "marginal mean is far from the tangent-space origin; "
                "the tangent-space approximation degrades beyond pi/2",
                stacklevel=2,
            )
        mean = self.manifold.exp(self.base, v)
        cov_at_base = _symmetrize(Psi @ self.weights.covariance @ Psi.T) + self.noise
        cov = self.manifold.transport_spd(self.base, mean, cov_at_base)
        return RiemannianGaussian(self.manifold, mean, cov)

    def mean_trajectory(self, phases) -> np.ndarray:
        return np.vstack([self.marginal(z).mean for z in np.asarray(phases, dtype=float)])

    def condition(self, via: ViaPoint) -> "RiemannianPromp":
        """Via-point conditioning: the observation is mapped to the base
        tangent space, its covariance parallel-transported there, then the
        weight distribution gets the standard Gaussian update."""
        y_star = self.manifold.project(via.target)
        obs = self.manifold.log(self.base, y_star)
        cov_obs = self.manifold.transport_spd(y_star, self.base, via.covariance)
        Psi = self._psi(via.phase)
        obs_prec = np.linalg.inv(cov_obs)
        prior_prec = np.linalg.inv(self.weights.covariance)
        post_cov = _symmetrize(np.linalg.inv(prior_prec + Psi.T @ obs_prec @ Psi))
        post_mean = post_cov @ (Psi.T @ obs_prec @ obs + prior_prec @ self.weights.mean)
        return RiemannianPromp(
            self.manifold, self.basis, self.base, EuclideanGaussian(post_mean, post_cov), self.noise
        )

    def sample_trajectory(self, phases, seed) -> np.ndarray:
        """One weight draw, mapped through the geodesic model over the grid."""
        rng = np.random.default_rng(seed)
        L = np.linalg.cholesky(self.weights.covariance)
        w = self.weights.mean + L @ rng.standard_normal(self.weights.mean.size)
        return np.vstack(
            [self.manifold.exp(self.base, self._psi(z) @ w) for z in np.asarray(phases, dtype=float)]
        )


def fit(
    demos,
    config: BasisConfig,
    manifold: Manifold,
    eta: float = geodesic_fit.DEFAULT_ETA,
    eta_max: float = geodesic_fit.DEFAULT_ETA_MAX,
    tol: float = geodesic_fit.DEFAULT_TOL,
    max_iter: int = geodesic_fit.DEFAULT_MAX_ITER,
    weight_reg: float = 1e-6,
    resample_size: int = DEFAULT_RESAMPLE,
    noise: np.ndarray | None = None,
) -> RiemannianPromp:
    """Learn a Riemannian ProMP from (times, trajectory) demonstrations.

    Demonstrations are resampled onto a common uniform phase grid so the
    basis matrix is shared. The base point comes from the first
    demonstration's regression and is frozen for the rest.
    """
    if len(demos) < 2:
        raise InvalidArgumentError("need at least two demonstrations")
    grid = np.linspace(0.0, 1.0, resample_size)
    m = manifold.intrinsic_dim

    base = None
    weights = []
    sq_residuals = []
    for n, (times, traj) in enumerate(demos):
        traj = np.asarray(traj, dtype=float)
        phases = phase_from_times(times)
        traj = resample_on_manifold(manifold, phases, traj, grid)
        model, report = geodesic_fit.fit(
            traj,
            grid,
            config,
            manifold,
            p_fixed=base,
            eta=eta,
            eta_max=eta_max,
            tol=tol,
            max_iter=max_iter,
        )
        if not report.converged:
            raise ConvergenceError(
                f"geodesic regression did not converge on demonstration {n}",
                last_iterate=model,
            )
        if base is None:
            base = model.base
        weights.append(model.weights.ravel())
        pred = model.predict(grid)
        sq_residuals.append(
            np.mean([manifold.distance(yh, y) ** 2 for yh, y in zip(pred, traj)]) / m
        )

    dist = fit_gaussian_mle(np.vstack(weights), weight_reg)
    if noise is None:
        noise = max(float(np.mean(sq_residuals)), NOISE_FLOOR) * np.eye(m)
    return RiemannianPromp(manifold, config, base, dist, noise)


def blend(models: list[RiemannianPromp], alphas, z: float) -> RiemannianGaussian:
    """Blend per-model marginals at phase z via the manifold Gaussian product."""
    if not models:
        raise InvalidArgumentError("need at least one model")
    marginals = [model.marginal(z) for model in models]
    return gaussian_product_manifold(marginals, alphas)


def fit_s3(demos, config: BasisConfig, **kwargs) -> RiemannianPromp:
    """Convenience wrapper: sign-continuous preprocessing plus unit-sphere fit."""
    prepared = [(times, preprocess_quaternions(traj)) for times, traj in demos]
    return fit(prepared, config, Sphere(3), **kwargs)


def time_to_phase(t: float, mean_duration: float) -> float:
    """Map an absolute time to a phase using the mean demonstration duration."""
    if mean_duration <= 0:
        raise InvalidArgumentError("mean duration must be positive")
    return min(max(t / mean_duration, 0.0), 1.0)


@dataclass(frozen=True)
class FullPosePromp:
    """Factorized full-pose model: Euclidean ProMP for position (R^3) and a
    Riemannian ProMP for orientation (S^3)."""

    position: EuclideanPromp
    orientation: RiemannianPromp

    def marginal(self, z: float):
        return self.position.marginal(z), self.orientation.marginal(z)

    def mean_trajectory(self, phases) -> np.ndarray:
        pos = self.position.mean_trajectory(phases)
        quat = self.orientation.mean_trajectory(phases)
        return np.hstack([pos, quat])

    def condition(
        self, position_via: ViaPoint | None = None, orientation_via: ViaPoint | None = None
    ) -> "FullPosePromp":
        pos = self.position if position_via is None else self.position.condition(position_via)
        ori = self.orientation if orientation_via is None else self.orientation.condition(orientation_via)
        return FullPosePromp(pos, ori)


def fullpose_fit(demos, config: BasisConfig, **kwargs) -> FullPosePromp:
    """Fit a full-pose model from (times, T x 7 [x y z qw qx qy qz]) demos."""
    pos_demos = []
    quat_demos = []
    for times, traj in demos:
        traj = np.asarray(traj, dtype=float)
        if traj.shape[1] != 7:
            raise InvalidArgumentError("full-pose rows must be [x y z qw qx qy qz]")
        pos_demos.append((times, traj[:, :3]))
        quat_demos.append((times, traj[:, 3:]))
    ridge = kwargs.pop("ridge", euclidean_promp.DEFAULT_RIDGE)
    weight_reg = kwargs.get("weight_reg", 1e-6)
    position = euclidean_promp.fit(pos_demos, config, ridge=ridge, weight_reg=weight_reg)
    orientation = fit_s3(quat_demos, config, **kwargs)
    return FullPosePromp(position, orientation)


def fullpose_blend(models: list[FullPosePromp], alphas, z: float):
    """Blend position (closed form) and orientation (iterative) independently."""
    pos = euclidean_promp.blend([m.position for m in models], alphas, z)
    ori = blend([m.orientation for m in models], alphas, z)
    return pos, ori
