"""Euclidean ProMP tests: ridge weights against an explicit solve,
conditioning against the joint-Gaussian oracle, blending against the
closed-form product, and the task-parameter affine map."""

import numpy as np
import pytest

from geopromp import promp
from geopromp.basis import BasisConfig, phi_grid, psi_matrix
from geopromp.errors import InvalidArgumentError
from geopromp.gaussians import EuclideanGaussian
from geopromp.promp import EuclideanPromp, ViaPoint


def make_demos(n_demos=6, n_samples=80, dim=2, seed=0):
    demos = []
    for d in range(n_demos):
        rng = np.random.default_rng(seed + d)
        t = np.linspace(0.0, 5.0, n_samples)
        s = t / t[-1]
        base = np.column_stack([np.sin(2 * np.pi * s), np.cos(np.pi * s)])[:, :dim]
        # Smooth per-demo variability plus small sample noise, so the weight
        # distribution has realistic spread for conditioning to act on.
        wobble = np.outer(np.sin(np.pi * s), 0.1 * rng.standard_normal(dim))
        wobble += np.outer(np.sin(2 * np.pi * s), 0.05 * rng.standard_normal(dim))
        demos.append((t, base + wobble + 0.01 * rng.standard_normal((n_samples, dim))))
    return demos


def test_fit_weights_ridge_matches_explicit_solve():
    config = BasisConfig(12, 0.02)
    rng = np.random.default_rng(1)
    phases = np.linspace(0, 1, 60)
    Y = rng.standard_normal((60, 3))
    w = promp.fit_weights_ridge(Y, phases, config, ridge=1e-6)
    Phi = phi_grid(config, phases)
    A = Phi.T @ Phi + 1e-6 * np.eye(12)
    for j in range(3):
        expected = np.linalg.solve(A, Phi.T @ Y[:, j])
        np.testing.assert_allclose(w[12 * j : 12 * (j + 1)], expected, atol=1e-12)


def test_fit_reconstructs_smooth_demos():
    config = BasisConfig(20, 0.01)
    demos = make_demos()
    model = promp.fit(demos, config)
    phases = np.linspace(0, 1, 80)
    mean_path = model.mean_trajectory(phases)
    stacked = np.mean([traj for _, traj in demos], axis=0)
    assert np.max(np.abs(mean_path - stacked)) < 0.05


def test_fit_requires_two_demos():
    with pytest.raises(InvalidArgumentError):
        promp.fit(make_demos(n_demos=1), BasisConfig(10, 0.02))


def test_marginal_formula():
    config = BasisConfig(8, 0.02)
    rng = np.random.default_rng(2)
    A = rng.standard_normal((16, 16))
    weights = EuclideanGaussian(rng.standard_normal(16), A @ A.T + np.eye(16))
    noise = 0.01 * np.eye(2)
    model = EuclideanPromp(config, 2, weights, noise)
    z = 0.37
    Psi = psi_matrix(config, z, 2)
    g = model.marginal(z)
    np.testing.assert_allclose(g.mean, Psi @ weights.mean)
    np.testing.assert_allclose(g.covariance, Psi @ weights.covariance @ Psi.T + noise, atol=1e-12)


def joint_gaussian_condition(weights, Psi, y, Sigma_obs):
    """Condition w | y via the joint Gaussian over (w, Psi w + eps)."""
    S = weights.covariance
    K = S @ Psi.T @ np.linalg.inv(Psi @ S @ Psi.T + Sigma_obs)
    mean = weights.mean + K @ (y - Psi @ weights.mean)
    cov = S - K @ Psi @ S
    return mean, cov


def test_condition_matches_joint_gaussian_oracle():
    config = BasisConfig(10, 0.02)
    model = promp.fit(make_demos(), config)
    via = ViaPoint(0.6, np.array([0.3, -0.4]), 1e-3 * np.eye(2))
    post = model.condition(via)
    Psi = psi_matrix(config, 0.6, 2)
    mean, cov = joint_gaussian_condition(model.weights, Psi, via.target, via.covariance)
    np.testing.assert_allclose(post.weights.mean, mean, atol=1e-8)
    np.testing.assert_allclose(post.weights.covariance, cov, atol=1e-8)


def test_condition_tight_covariance_hits_target():
    config = BasisConfig(20, 0.01)
    model = promp.fit(make_demos(), config)
    target = np.array([0.25, -0.3])
    post = model.condition(ViaPoint(0.7, target, 1e-6 * np.eye(2)))
    np.testing.assert_allclose(post.marginal(0.7).mean, target, atol=1e-3)


def test_condition_huge_covariance_is_noop():
    config = BasisConfig(15, 0.01)
    model = promp.fit(make_demos(), config)
    post = model.condition(ViaPoint(0.5, np.array([5.0, 5.0]), 1e12 * np.eye(2)))
    np.testing.assert_allclose(post.weights.mean, model.weights.mean, atol=1e-6)


def test_condition_shrinks_uncertainty_at_phase():
    config = BasisConfig(15, 0.01)
    model = promp.fit(make_demos(), config)
    post = model.condition(ViaPoint(0.5, np.array([0.0, 0.0]), 1e-3 * np.eye(2)))
    before = np.trace(model.marginal(0.5).covariance)
    after = np.trace(post.marginal(0.5).covariance)
    assert after < before


def test_via_point_phase_range():
    with pytest.raises(InvalidArgumentError):
        ViaPoint(1.5, np.zeros(2), np.eye(2))


def test_blend_matches_closed_form():
    config = BasisConfig(12, 0.02)
    a = promp.fit(make_demos(seed=0), config)
    b = promp.fit(make_demos(seed=50), config)
    z = 0.4
    alphas = np.array([0.7, 0.3])
    got = promp.blend([a, b], alphas, z)
    ga, gb = a.marginal(z), b.marginal(z)
    Pa = alphas[0] * np.linalg.inv(ga.covariance)
    Pb = alphas[1] * np.linalg.inv(gb.covariance)
    cov = np.linalg.inv(Pa + Pb)
    np.testing.assert_allclose(got.covariance, cov, atol=1e-12)
    np.testing.assert_allclose(got.mean, cov @ (Pa @ ga.mean + Pb @ gb.mean), atol=1e-12)


def test_blend_full_weight_on_one_model():
    config = BasisConfig(12, 0.02)
    a = promp.fit(make_demos(seed=0), config)
    b = promp.fit(make_demos(seed=50), config)
    got = promp.blend([a, b], [1.0, 0.0], 0.5)
    np.testing.assert_allclose(got.mean, a.marginal(0.5).mean, atol=1e-12)


def test_task_affine_recovers_linear_map():
    rng = np.random.default_rng(9)
    O_true = rng.standard_normal((8, 2))
    o_true = rng.standard_normal(8)
    S = rng.standard_normal((30, 2))
    W = S @ O_true.T + o_true
    O, o = promp.task_affine(W, S)
    np.testing.assert_allclose(O, O_true, atol=1e-8)
    np.testing.assert_allclose(o, o_true, atol=1e-8)


def test_task_affine_degenerate_states():
    W = np.random.default_rng(10).standard_normal((5, 4))
    S = np.ones((5, 1))  # identical states: no usable regressor
    O, o = promp.task_affine(W, S)
    np.testing.assert_allclose(O, 0.0, atol=1e-9)
    np.testing.assert_allclose(o, W.mean(axis=0), atol=1e-9)
