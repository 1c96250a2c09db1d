"""Euclidean baselines for orientation learning: a ProMP over Euler angles
and a ProMP over raw quaternion components with post-hoc normalization.

Both wrap the classic ProMP with representation conversions at the
boundary, and exist to quantify what ignoring the quaternion geometry
costs in smoothness and via-point accuracy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import promp as euclidean_promp
from .basis import BasisConfig
from .errors import InvalidArgumentError
from .promp import EuclideanPromp, ViaPoint
from .riemannian_promp import preprocess_quaternions

# |pitch| this close to pi/2 counts as gimbal lock; roll is pinned to zero there.
GIMBAL_LOCK_TOL = 1e-6


def quat_multiply(a, b) -> np.ndarray:
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def euler_to_quat(angles) -> np.ndarray:
    """Intrinsic ZYX (yaw, pitch, roll) angles to a scalar-first unit quaternion."""
    yaw, pitch, roll = np.asarray(angles, dtype=float)
    qz = np.array([math.cos(yaw / 2), 0.0, 0.0, math.sin(yaw / 2)])
    qy = np.array([math.cos(pitch / 2), 0.0, math.sin(pitch / 2), 0.0])
    qx = np.array([math.cos(roll / 2), math.sin(roll / 2), 0.0, 0.0])
    q = quat_multiply(quat_multiply(qz, qy), qx)
    return q / np.linalg.norm(q)


def quat_to_euler(q) -> np.ndarray:
    """Scalar-first unit quaternion to intrinsic ZYX (yaw, pitch, roll) angles.

    Near gimbal lock (|pitch| at pi/2) roll is set to zero and yaw absorbs
    the remaining rotation; a warning flags the degeneracy.
    """
    w, x, y, z = np.asarray(q, dtype=float) / np.linalg.norm(q)
    sin_pitch = 2.0 * (w * y - z * x)
    if abs(sin_pitch) >= 1.0 - GIMBAL_LOCK_TOL:
        warnings.warn("quaternion at gimbal lock; roll pinned to zero", stacklevel=2)
        pitch = math.copysign(math.pi / 2, sin_pitch)
        # At lock only yaw -/+ roll is observable; put it all in yaw.
        yaw = 2.0 * math.atan2(z, w)
        return np.array([yaw, pitch, 0.0])
    pitch = math.asin(sin_pitch)
    yaw = math.atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
    roll = math.atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
    return np.array([yaw, pitch, roll])


def quats_to_euler_traj(quats) -> np.ndarray:
    """Convert a quaternion trajectory to unwrapped, per-demo-continuous angles."""
    Q = preprocess_quaternions(quats)
    angles = np.vstack([quat_to_euler(q) for q in Q])
    return np.unwrap(angles, axis=0)


def euler_traj_to_quats(angles) -> np.ndarray:
    Q = np.vstack([euler_to_quat(a) for a in np.asarray(angles, dtype=float)])
    return preprocess_quaternions(Q)


def _nearest_angles(angles, reference) -> np.ndarray:
    """Shift each angle by multiples of 2*pi to land nearest the reference."""
    angles = np.asarray(angles, dtype=float)
    reference = np.asarray(reference, dtype=float)
    return angles + 2.0 * np.pi * np.round((reference - angles) / (2.0 * np.pi))


@dataclass(frozen=True)
class EulerPromp:
    """Classic ProMP over unwrapped intrinsic-ZYX Euler angles."""

    inner: EuclideanPromp
    convention: str = "ZYX-intrinsic"

    def mean_trajectory(self, phases) -> np.ndarray:
        """Marginal mean path converted back to unit quaternions."""
        return euler_traj_to_quats(self.inner.mean_trajectory(phases))

    def condition(self, via: ViaPoint) -> "EulerPromp":
        """Via-point given as a quaternion; converted to angles continuous
        with the model's own mean path at that phase."""
        target = quat_to_euler(via.target)
        mean_here = self.inner.marginal(via.phase).mean
        target = _nearest_angles(target, mean_here)
        cov = via.covariance
        if np.isscalar(cov) or np.asarray(cov).ndim == 0:
            cov = float(cov) * np.eye(3)
        inner = self.inner.condition(ViaPoint(via.phase, target, cov))
        return EulerPromp(inner, self.convention)


@dataclass(frozen=True)
class UnitNormPromp:
    """Classic ProMP over raw quaternion components, normalized on output."""

    inner: EuclideanPromp

    def raw_mean_trajectory(self, phases) -> np.ndarray:
        """Marginal mean path before normalization (norms may dip below 1)."""
        return self.inner.mean_trajectory(phases)

    def mean_trajectory(self, phases) -> np.ndarray:
        raw = self.raw_mean_trajectory(phases)
        return raw / np.linalg.norm(raw, axis=1)[:, None]

    def condition(self, via: ViaPoint) -> "UnitNormPromp":
        target = np.asarray(via.target, dtype=float)
        target = target / np.linalg.norm(target)
        mean_here = self.inner.marginal(via.phase).mean
        if np.dot(target, mean_here) < 0:
            target = -target  # stay on the model's sign sheet
        cov = via.covariance
        if np.isscalar(cov) or np.asarray(cov).ndim == 0:
            cov = float(cov) * np.eye(4)
        return UnitNormPromp(self.inner.condition(ViaPoint(via.phase, target, cov)))


def fit_euler(demos, config: BasisConfig, **kwargs) -> EulerPromp:
    """Train the Euler-angle baseline from (times, quaternion traj) demos."""
    angle_demos = [(times, quats_to_euler_traj(traj)) for times, traj in demos]
    return EulerPromp(euclidean_promp.fit(angle_demos, config, **kwargs))


def fit_unitnorm(demos, config: BasisConfig, **kwargs) -> UnitNormPromp:
    """Train the unit-norm-approximation baseline from quaternion demos."""
    quat_demos = [(times, preprocess_quaternions(traj)) for times, traj in demos]
    return UnitNormPromp(euclidean_promp.fit(quat_demos, config, **kwargs))
