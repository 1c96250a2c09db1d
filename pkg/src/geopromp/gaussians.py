"""Gaussian distributions on manifolds.

Covers density evaluation of tangent-space Gaussians, maximum-likelihood
fitting of weight distributions, and the iterative precision-weighted
product of Gaussians on a manifold used by blending.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError
from .manifolds import Manifold


def _symmetrize(A):
    return 0.5 * (A + A.T)


@dataclass(frozen=True)
class EuclideanGaussian:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))
        object.__setattr__(self, "covariance", np.asarray(self.covariance, dtype=float))
        d = self.mean.size
        if self.covariance.shape != (d, d):
            raise InvalidArgumentError("covariance shape does not match mean")


@dataclass(frozen=True)
class RiemannianGaussian:
    """Mean on the manifold plus an intrinsic-coordinate covariance at the mean."""

    manifold: Manifold
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))
        object.__setattr__(self, "covariance", np.asarray(self.covariance, dtype=float))
        m = self.manifold.intrinsic_dim
        if self.covariance.shape != (m, m):
            raise InvalidArgumentError("covariance must be intrinsic-dim square")


def riemannian_density(g: RiemannianGaussian, x) -> float:
    """Tangent-space Gaussian density at x, maximal at the mean."""
    m = g.manifold.intrinsic_dim
    v = g.manifold.log(g.mean, x)
    sign, logdet = np.linalg.slogdet(g.covariance)
    if sign <= 0:
        raise np.linalg.LinAlgError("covariance is not positive definite")
    maha = float(v @ np.linalg.solve(g.covariance, v))
    return float(np.exp(-0.5 * (m * np.log(2.0 * np.pi) + logdet + maha)))


def fit_gaussian_mle(samples, reg: float = 1e-6) -> EuclideanGaussian:
    """Mean and biased sample covariance, ridge-regularized by reg * I.

    The regularization matters: with few demonstrations the raw covariance
    over high-dimensional weight vectors is singular, and downstream
    conditioning needs its inverse.
    """
    W = np.asarray(samples, dtype=float)
    if W.ndim != 2 or W.shape[0] < 2:
        raise InvalidArgumentError("need at least two samples")
    mu = W.mean(axis=0)
    D = W - mu
    cov = _symmetrize(D.T @ D / W.shape[0]) + reg * np.eye(W.shape[1])
    return EuclideanGaussian(mu, cov)


def _product_iterate(members, alphas, init, tol, max_iter):
    alphas = np.asarray(alphas, dtype=float)
    if len(members) == 0 or alphas.shape != (len(members),):
        raise InvalidArgumentError("need one weight per member distribution")
    if np.any(alphas < 0) or alphas.sum() <= 0:
        raise InvalidArgumentError("weights must be nonnegative with positive sum")
    manifold = members[0].manifold
    if any(g.manifold != manifold for g in members):
        raise InvalidArgumentError("all members must share a manifold")

    # Zero-weight members contribute no precision; skip them entirely.
    active = [(g, a) for g, a in zip(members, alphas) if a > 0]
    if init is None:
        init = max(active, key=lambda ga: ga[1])[0].mean
    mu = np.asarray(init, dtype=float)

    precisions = [np.linalg.inv(g.covariance) for g, _ in active]
    for k in range(max_iter):
        total = np.zeros((manifold.intrinsic_dim, manifold.intrinsic_dim))
        pull = np.zeros(manifold.intrinsic_dim)
        for (g, a), P in zip(active, precisions):
            lam = a * manifold.transport_spd(g.mean, mu, P)
            total += lam
            pull += lam @ manifold.log(mu, g.mean)
        delta = np.linalg.solve(total, pull)
        if np.linalg.norm(delta) < tol:
            cov = _symmetrize(np.linalg.inv(total))
            return RiemannianGaussian(manifold, mu, cov), k
        mu = manifold.exp(mu, delta)
    raise ConvergenceError(
        f"Gaussian product did not converge in {max_iter} iterations",
        last_iterate=mu,
    )


def gaussian_product_manifold(
    members: list[RiemannianGaussian],
    alphas,
    init=None,
    tol: float = 1e-9,
    max_iter: int = 100,
) -> RiemannianGaussian:
    """Weighted product of Gaussians on a manifold, solved iteratively.

    At each iterate the member precisions are parallel-transported to the
    current mean estimate, a Gauss-Newton step is taken in the tangent
    space, and the mean moves along the exponential map. The combined
    covariance is evaluated at the converged mean. On Euclidean manifolds
    this reproduces the closed-form weighted product of Gaussians.
    """
    result, _ = _product_iterate(members, alphas, init, tol, max_iter)
    return result


def product_iteration_count(
    members, alphas, init=None, tol: float = 1e-9, max_iter: int = 100
) -> int:
    """Number of mean updates until the product iteration converges."""
    _, k = _product_iterate(members, alphas, init, tol, max_iter)
    return k
