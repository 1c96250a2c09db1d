"""Classic probabilistic movement primitive over Euclidean trajectories.

Weight estimation by ridge regression, Gaussian weight distribution over
demonstrations, marginal trajectory distribution, via-point conditioning,
blending, and the affine task-parameter mapping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisConfig, phase_from_times, phi_grid, psi_matrix
from .errors import InvalidArgumentError
from .gaussians import EuclideanGaussian, fit_gaussian_mle

DEFAULT_RIDGE = 1e-6
DEFAULT_WEIGHT_REG = 1e-6
NOISE_FLOOR = 1e-8


def _symmetrize(A):
    return 0.5 * (A + A.T)


@dataclass(frozen=True)
class ViaPoint:
    """Desired trajectory point with an observation covariance.

    target is a d-vector for Euclidean models, or an ambient manifold point
    for Riemannian models (with an intrinsic-coordinate covariance).
    """

    phase: float
    target: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.phase <= 1.0:
            raise InvalidArgumentError("via-point phase must lie in [0, 1]")
        object.__setattr__(self, "target", np.asarray(self.target, dtype=float))
        object.__setattr__(self, "covariance", np.asarray(self.covariance, dtype=float))


@dataclass(frozen=True)
class EuclideanPromp:
    basis: BasisConfig
    dim: int
    weights: EuclideanGaussian
    noise: np.ndarray  # (dim x dim) observation covariance

    def __post_init__(self):
        object.__setattr__(self, "noise", np.asarray(self.noise, dtype=float))
        if self.weights.mean.size != self.dim * self.basis.n_basis:
            raise InvalidArgumentError("weight dimension must equal dim * n_basis")
        if self.noise.shape != (self.dim, self.dim):
            raise InvalidArgumentError("noise covariance must be dim x dim")

    def marginal(self, z: float) -> EuclideanGaussian:
        """Trajectory distribution at phase z."""
        Psi = psi_matrix(self.basis, z, self.dim)
        mean = Psi @ self.weights.mean
        cov = _symmetrize(Psi @ self.weights.covariance @ Psi.T) + self.noise
        return EuclideanGaussian(mean, cov)

    def mean_trajectory(self, phases) -> np.ndarray:
        return np.vstack([self.marginal(z).mean for z in np.asarray(phases, dtype=float)])

    def condition(self, via: ViaPoint) -> "EuclideanPromp":
        """Bayesian update of the weight distribution toward a via-point."""
        Psi = psi_matrix(self.basis, via.phase, self.dim)
        if via.target.shape != (self.dim,):
            raise InvalidArgumentError("via-point target dimension mismatch")
        obs_prec = np.linalg.inv(via.covariance)
        prior_prec = np.linalg.inv(self.weights.covariance)
        post_cov = _symmetrize(np.linalg.inv(prior_prec + Psi.T @ obs_prec @ Psi))
        post_mean = post_cov @ (Psi.T @ obs_prec @ via.target + prior_prec @ self.weights.mean)
        return EuclideanPromp(self.basis, self.dim, EuclideanGaussian(post_mean, post_cov), self.noise)


def fit_weights_ridge(traj, phases, config: BasisConfig, ridge: float = DEFAULT_RIDGE) -> np.ndarray:
    """Per-demonstration weights via a ridge-regularized least-squares solve.

    Returns the dimension-major stacked weight vector of length d * n_basis.
    The block-diagonal structure decouples the solve per output dimension.
    """
    Y = np.asarray(traj, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    Phi = phi_grid(config, phases)  # (T x n_basis)
    A = Phi.T @ Phi + ridge * np.eye(config.n_basis)
    W = np.linalg.solve(A, Phi.T @ Y)  # (n_basis x d)
    return W.T.ravel()


def fit(
    demos,
    config: BasisConfig,
    ridge: float = DEFAULT_RIDGE,
    weight_reg: float = DEFAULT_WEIGHT_REG,
    noise: np.ndarray | None = None,
) -> EuclideanPromp:
    """Learn a ProMP from (times, T x d trajectory) demonstration pairs."""
    if len(demos) < 2:
        raise InvalidArgumentError("need at least two demonstrations")
    dim = np.asarray(demos[0][1]).shape[1]
    weights = []
    sq_residuals = []
    for times, traj in demos:
        traj = np.asarray(traj, dtype=float)
        if traj.ndim != 2 or traj.shape[1] != dim:
            raise InvalidArgumentError("demonstrations must share the trajectory dimension")
        phases = phase_from_times(times)
        w = fit_weights_ridge(traj, phases, config, ridge)
        weights.append(w)
        recon = phi_grid(config, phases) @ w.reshape(dim, config.n_basis).T
        sq_residuals.append(np.mean((recon - traj) ** 2))
    dist = fit_gaussian_mle(np.vstack(weights), weight_reg)
    if noise is None:
        # Residual-matched isotropic noise keeps the marginal calibrated.
        noise = max(float(np.mean(sq_residuals)), NOISE_FLOOR) * np.eye(dim)
    return EuclideanPromp(config, dim, dist, noise)


def blend(models: list[EuclideanPromp], alphas, z: float) -> EuclideanGaussian:
    """Precision-weighted combination of per-model marginals at phase z."""
    if not models:
        raise InvalidArgumentError("need at least one model")
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (len(models),):
        raise InvalidArgumentError("need one blending weight per model")
    if np.any(alphas < 0) or alphas.sum() <= 0:
        raise InvalidArgumentError("blending weights must be nonnegative with positive sum")
    dim = models[0].dim
    if any(m.dim != dim for m in models):
        raise InvalidArgumentError("models must share the output dimension")
    total = np.zeros((dim, dim))
    pull = np.zeros(dim)
    for model, a in zip(models, alphas):
        if a == 0:
            continue
        g = model.marginal(z)
        prec = a * np.linalg.inv(g.covariance)
        total += prec
        pull += prec @ g.mean
    cov = _symmetrize(np.linalg.inv(total))
    return EuclideanGaussian(cov @ pull, cov)


def task_affine(weights, states, ridge: float = 1e-12):
    """Least-squares affine map from task-parameter states to mean weights.

    Returns (O, o) with predicted weights O @ s + o. Degenerate regressors
    (identical states) collapse O to zero and o to the mean weight.
    """
    W = np.asarray(weights, dtype=float)
    S = np.atleast_2d(np.asarray(states, dtype=float))
    if S.shape[0] != W.shape[0]:
        S = S.T
    if S.shape[0] != W.shape[0]:
        raise InvalidArgumentError("weights and states must pair up")
    mean_w = W.mean(axis=0)
    mean_s = S.mean(axis=0)
    Dc = S - mean_s
    Wc = W - mean_w
    G = Dc.T @ Dc + ridge * np.eye(S.shape[1])
    O = np.linalg.solve(G, Dc.T @ Wc).T
    o = mean_w - O @ mean_s
    return O, o
