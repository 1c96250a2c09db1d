"""Synthetic demonstration generators.

Letter-like 2D curves lifted to S^2, a full-pose re-orient-style skill,
and a key-turning-style skill on R^3 x S^3. All generators are seeded and
add smooth per-demo tangent-space noise so the fitted weight distributions
have realistic variability.
"""

from __future__ import annotations

import math

import numpy as np

from .baselines import euler_to_quat
from .errors import InvalidArgumentError
from .manifolds import Sphere

DEFAULT_DURATION = 10.0
DEFAULT_LIFT_RADIUS = 1.2

_S2 = Sphere(2)
_S3 = Sphere(3)
_NORTH = np.array([0.0, 0.0, 1.0])


def smooth_noise(rng, n_samples: int, dim: int, scale: float, harmonics: int = 3) -> np.ndarray:
    """Smooth zero-endpoint noise curves built from a few random sinusoids."""
    t = np.linspace(0.0, 1.0, n_samples)
    out = np.zeros((n_samples, dim))
    for k in range(1, harmonics + 1):
        amp = rng.normal(0.0, scale / k, size=dim)
        out += np.sin(math.pi * k * t)[:, None] * amp[None, :]
    return out


def letter_curve_2d(letter: str, n_samples: int) -> np.ndarray:
    """Stylized 2D stroke for a letter-like shape, roughly unit-scale."""
    t = np.linspace(0.0, 1.0, n_samples)
    if letter == "s":
        x = 0.45 * np.sin(2.0 * math.pi * t)
        y = 0.9 * (0.5 - t)
    elif letter == "g":
        angle = 2.0 * math.pi * 1.15 * t
        r = 0.55 - 0.25 * t
        x = r * np.cos(angle)
        y = r * np.sin(angle)
    elif letter == "i":
        x = np.zeros_like(t)
        y = 0.9 * (0.5 - t)
    elif letter == "j":
        y = 0.9 * (0.5 - t)
        x = np.where(t < 0.7, 0.0, -0.4 * np.sin(math.pi * (t - 0.7) / 0.3 / 2.0))
    else:
        raise InvalidArgumentError(f"unknown letter {letter!r} (have s, g, i, j)")
    return np.column_stack([x, y])


def lift_2d_to_s2(points, radius: float = DEFAULT_LIFT_RADIUS) -> np.ndarray:
    """Scale a 2D curve into a disc of the given radius and exp-map it onto
    S^2 at the north pole (tangent axes = e1, e2)."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 2:
        raise InvalidArgumentError("expected a (T x 2) curve")
    if radius >= math.pi:
        raise InvalidArgumentError("lift radius must be below pi")
    max_norm = float(np.max(np.linalg.norm(P, axis=1)))
    if max_norm > 0:
        P = P * (radius / max_norm)
    return np.vstack([_S2.exp(_NORTH, row) for row in P])


def make_letter_demos(
    letter: str = "s",
    n_demos: int = 8,
    n_samples: int = 100,
    noise: float = 0.03,
    seed: int = 0,
    radius: float = DEFAULT_LIFT_RADIUS,
):
    """Noisy S^2 demonstrations of a letter-like stroke.

    Noise is added in the lifting tangent plane before the exp map, so each
    demo is a smooth tangent-space perturbation of the base stroke.
    """
    base = letter_curve_2d(letter, n_samples)
    max_norm = float(np.max(np.linalg.norm(base, axis=1)))
    scaled = base * (radius / max_norm) if max_norm > 0 else base
    demos = []
    for d in range(n_demos):
        rng = np.random.default_rng(seed + 1000 * d)
        tangent = scaled + smooth_noise(rng, n_samples, 2, noise)
        points = np.vstack([_S2.exp(_NORTH, row) for row in tangent])
        duration = DEFAULT_DURATION * (1.0 + 0.05 * rng.uniform(-1.0, 1.0))
        times = np.linspace(0.0, duration, n_samples)
        demos.append((times, points))
    return demos


def _smoothstep(t):
    return 3.0 * t**2 - 2.0 * t**3


def _orientation_track(t, total_angle):
    """Quaternion path rotating by total_angle about a slowly drifting axis.

    The axis drift keeps the Euler-angle image of the path well away from a
    single-axis rotation, and the pitch excursion approaches gimbal lock
    (peak about 86 degrees), which is the regime where Euclidean baselines
    behave worst.
    """
    s = _smoothstep(t)
    yaw = 0.9 * total_angle * s
    pitch = 1.5 * np.sin(math.pi * s)
    roll = 0.35 * total_angle * s
    return np.vstack([euler_to_quat((y, p, r)) for y, p, r in zip(yaw, pitch, roll)])


def _noisy_quat_demo(rng, base_quats, noise):
    eps = smooth_noise(rng, base_quats.shape[0], 3, noise)
    return np.vstack([_S3.exp(q, e) for q, e in zip(base_quats, eps)])


def make_reorient_demos(
    n_demos: int = 4,
    n_samples: int = 100,
    rotation_deg: float = 90.0,
    noise: float = 0.02,
    seed: int = 0,
):
    """Full-pose lift-rotate-place demonstrations on R^3 x S^3."""
    t = np.linspace(0.0, 1.0, n_samples)
    total = math.radians(rotation_deg)
    base_pos = np.column_stack(
        [
            0.4 * _smoothstep(t),
            0.15 * np.sin(math.pi * t),
            0.25 * np.sin(math.pi * t),  # lift and place back
        ]
    )
    base_quat = _orientation_track(t, total)
    demos = []
    for d in range(n_demos):
        rng = np.random.default_rng(seed + 1000 * d)
        pos = base_pos + smooth_noise(rng, n_samples, 3, 0.6 * noise)
        quat = _noisy_quat_demo(rng, base_quat, noise)
        duration = DEFAULT_DURATION * (1.0 + 0.05 * rng.uniform(-1.0, 1.0))
        times = np.linspace(0.0, duration, n_samples)
        demos.append((times, np.hstack([pos, quat])))
    return demos


def make_keyturn_demos(
    n_demos: int = 4,
    n_samples: int = 100,
    rotation_deg: float = 90.0,
    noise: float = 0.015,
    seed: int = 0,
):
    """Approach-then-turn demonstrations on R^3 x S^3: move toward the
    keyhole with steady orientation, then turn by rotation_deg about x."""
    t = np.linspace(0.0, 1.0, n_samples)
    total = math.radians(rotation_deg)
    approach = np.clip(t / 0.6, 0.0, 1.0)
    turn = np.clip((t - 0.6) / 0.4, 0.0, 1.0)
    base_pos = np.column_stack(
        [
            0.3 * _smoothstep(approach),
            0.05 * np.sin(math.pi * approach),
            -0.1 * _smoothstep(approach),
        ]
    )
    base_quat = np.vstack(
        [euler_to_quat((0.15 * _smoothstep(a), 0.0, total * _smoothstep(u))) for a, u in zip(approach, turn)]
    )
    demos = []
    for d in range(n_demos):
        rng = np.random.default_rng(seed + 1000 * d)
        pos = base_pos + smooth_noise(rng, n_samples, 3, 0.6 * noise)
        quat = _noisy_quat_demo(rng, base_quat, noise)
        duration = DEFAULT_DURATION * (1.0 + 0.05 * rng.uniform(-1.0, 1.0))
        times = np.linspace(0.0, duration, n_samples)
        demos.append((times, np.hstack([pos, quat])))
    return demos
