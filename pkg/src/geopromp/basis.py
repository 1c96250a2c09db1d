"""Phase variable and normalized Gaussian basis functions.

The weight vector convention used throughout the package is
dimension-major: w = [w^(1)^T ... w^(d)^T]^T with each block of length
n_basis, matching the block-diagonal basis matrix built here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

# Switch to log-space evaluation when all kernels underflow this badly.
_LOG_SPACE_EXPONENT = -300.0


@dataclass(frozen=True)
class BasisConfig:
    """Normalized Gaussian kernels b_m(z) = exp(-(z - c_m)^2 / (2 h))."""

    n_basis: int
    width: float
    centers: tuple[float, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n_basis < 1:
            raise InvalidArgumentError("n_basis must be positive")
        if self.width <= 0:
            raise InvalidArgumentError("width must be positive")
        if self.centers is None:
            if self.n_basis == 1:
                centers = (0.5,)
            else:
                centers = tuple(np.linspace(0.0, 1.0, self.n_basis))
            object.__setattr__(self, "centers", centers)
        else:
            centers = tuple(float(c) for c in self.centers)
            if len(centers) != self.n_basis:
                raise InvalidArgumentError("centers length must equal n_basis")
            if any(b <= a for a, b in zip(centers, centers[1:])):
                raise InvalidArgumentError("centers must be strictly increasing")
            object.__setattr__(self, "centers", centers)


def phase_from_times(times) -> np.ndarray:
    """Normalize a nondecreasing time vector onto [0, 1]."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise InvalidArgumentError("need at least two time samples")
    if np.any(np.diff(times) < 0):
        raise InvalidArgumentError("times must be nondecreasing")
    duration = times[-1] - times[0]
    if duration <= 0:
        raise InvalidArgumentError("zero total duration")
    return (times - times[0]) / duration


def phi(config: BasisConfig, z: float) -> np.ndarray:
    """Normalized basis activations at phase z; positive, summing to 1."""
    c = np.asarray(config.centers)
    expo = -((z - c) ** 2) / (2.0 * config.width)
    peak = expo.max()
    if peak < _LOG_SPACE_EXPONENT:
        expo = expo - peak  # shift before exponentiating to dodge underflow
    b = np.exp(expo)
    return b / b.sum()


def phi_grid(config: BasisConfig, phases) -> np.ndarray:
    """(T x n_basis) matrix of activations over a phase grid."""
    return np.vstack([phi(config, z) for z in np.asarray(phases, dtype=float)])


def psi_matrix(config: BasisConfig, z: float, dim: int) -> np.ndarray:
    """Block-diagonal (dim x dim*n_basis) basis matrix at phase z."""
    if dim < 1:
        raise InvalidArgumentError("output dimension must be >= 1")
    row = phi(config, z)
    out = np.zeros((dim, dim * config.n_basis))
    for j in range(dim):
        out[j, j * config.n_basis : (j + 1) * config.n_basis] = row
    return out


def psi_stack(config: BasisConfig, phases, dim: int) -> np.ndarray:
    """Stack psi_matrix over a phase grid: (dim*T x dim*n_basis)."""
    return np.vstack([psi_matrix(config, z, dim) for z in np.asarray(phases, dtype=float)])
