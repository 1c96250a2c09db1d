"""Comparison metrics for orientation trajectories: jerkiness, via-point
tracking accuracy, and deviation from a reference mean path."""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .manifolds import Manifold, Sphere


def jerkiness(traj, dt) -> float:
    """Discrete integral of the squared third derivative, per component.

    Uses the five-point central third difference; dt may be a scalar step
    or the full time vector (which must be uniform).
    """
    Y = np.asarray(traj, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    dt_arr = np.asarray(dt, dtype=float)
    if dt_arr.ndim == 1:
        steps = np.diff(dt_arr)
        if steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            raise InvalidArgumentError("jerkiness requires a uniform time step")
        step = float(steps[0])
    else:
        step = float(dt_arr)
    if step <= 0:
        raise InvalidArgumentError("time step must be positive")
    if Y.shape[0] < 5:
        raise InvalidArgumentError("need at least five samples for the central stencil")
    # (y[t+2] - 2 y[t+1] + 2 y[t-1] - y[t-2]) / 2 equals d3y * step^3 for cubics.
    d3 = 0.5 * (Y[4:] - 2.0 * Y[3:-1] + 2.0 * Y[1:-3] - Y[:-4])
    return float(np.sum(d3**2) / step**5)


def tracking_accuracy(manifold: Manifold, traj, phases, z_star: float, y_star) -> float:
    """Geodesic distance to the via-point at the nearest grid phase."""
    phases = np.asarray(phases, dtype=float)
    traj = np.asarray(traj, dtype=float)
    i = int(np.argmin(np.abs(phases - z_star)))
    return manifold.distance(traj[i], np.asarray(y_star, dtype=float))


def deviation_from_mean(manifold: Manifold, traj, ref_traj) -> float:
    """Sum of per-step geodesic distances between two equal-length paths."""
    traj = np.asarray(traj, dtype=float)
    ref = np.asarray(ref_traj, dtype=float)
    if traj.shape != ref.shape:
        raise InvalidArgumentError("trajectories must have equal shapes")
    return float(sum(manifold.distance(a, b) for a, b in zip(traj, ref)))


def quat_distance(a, b) -> float:
    """Geodesic distance on S^3, sign-insensitive (antipodes are one rotation)."""
    s3 = Sphere(3)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return min(s3.distance(a, b), s3.distance(a, -b))
