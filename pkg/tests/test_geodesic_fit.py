"""Geodesic basis-function regression tests.

Key oracles: on Euclidean manifolds the fit must match ordinary least
squares (up to the shared-offset gauge between base point and weights),
and on spheres a model fitted to its own noiseless output must drive the
reconstruction error to numerical zero.
"""

import numpy as np
import pytest

from geopromp import geodesic_fit
from geopromp.basis import BasisConfig, phi_grid
from geopromp.errors import SingularityError
from geopromp.geodesic_fit import GeodesicModel
from geopromp.manifolds import Euclidean, Sphere


def test_predict_euclidean_is_linear_model():
    config = BasisConfig(5, 0.02)
    rng = np.random.default_rng(0)
    W = rng.standard_normal((2, 5))
    p = rng.standard_normal(2)
    model = GeodesicModel(Euclidean(2), p, W, config)
    phases = np.linspace(0, 1, 9)
    expected = p + phi_grid(config, phases) @ W.T
    np.testing.assert_allclose(model.predict(phases), expected, atol=1e-12)


def test_reconstruction_error_euclidean_matches_least_squares_residual():
    config = BasisConfig(6, 0.02)
    rng = np.random.default_rng(1)
    W = rng.standard_normal((3, 6))
    p = rng.standard_normal(3)
    model = GeodesicModel(Euclidean(3), p, W, config)
    phases = np.linspace(0, 1, 40)
    Y = rng.standard_normal((40, 3))
    pred = p + phi_grid(config, phases) @ W.T
    expected = 0.5 * np.sum((pred - Y) ** 2)
    assert geodesic_fit.reconstruction_error(model, Y, phases) == pytest.approx(expected)


def test_gradients_euclidean_exact():
    config = BasisConfig(6, 0.02)
    rng = np.random.default_rng(2)
    W = rng.standard_normal((2, 6))
    p = rng.standard_normal(2)
    model = GeodesicModel(Euclidean(2), p, W, config)
    phases = np.linspace(0, 1, 30)
    Y = rng.standard_normal((30, 2))
    Phi = phi_grid(config, phases)
    residuals = Y - (p + Phi @ W.T)
    grad_p, grad_W = geodesic_fit.gradients(model, Y, phases)
    np.testing.assert_allclose(grad_p, -residuals.sum(axis=0), atol=1e-12)
    np.testing.assert_allclose(grad_W, -(residuals.T @ Phi), atol=1e-12)


def test_gradients_sphere_match_finite_differences():
    config = BasisConfig(4, 0.05)
    s2 = Sphere(2)
    rng = np.random.default_rng(3)
    p = s2.random_point(rng)
    W = 0.2 * rng.standard_normal((2, 4))
    phases = np.linspace(0, 1, 12)
    truth = GeodesicModel(s2, p, 0.25 * rng.standard_normal((2, 4)), config)
    Y = truth.predict(phases)
    model = GeodesicModel(s2, p, W, config)
    _, grad_W = geodesic_fit.gradients(model, Y, phases)
    # The transported-residual gradient is a first-order approximation;
    # it should agree with central differences to that order.
    eps = 1e-6
    for i in range(2):
        for j in range(4):
            Wp, Wm = W.copy(), W.copy()
            Wp[i, j] += eps
            Wm[i, j] -= eps
            ep = geodesic_fit.reconstruction_error(GeodesicModel(s2, p, Wp, config), Y, phases)
            em = geodesic_fit.reconstruction_error(GeodesicModel(s2, p, Wm, config), Y, phases)
            fd = (ep - em) / (2 * eps)
            assert grad_W[i, j] == pytest.approx(fd, abs=2e-2, rel=2e-2)


@pytest.mark.parametrize("n", [2, 3])
def test_euclidean_reduction_matches_least_squares(n):
    """On R^n the fitted model must reproduce the lambda=0 LS predictor.

    The parametrization p + W phi(z) is overcomplete (phi sums to one), so
    weights are compared after folding the base point in.
    """
    config = BasisConfig(6, 0.005)
    rng = np.random.default_rng(40 + n)
    phases = np.linspace(0, 1, 60)
    Phi = phi_grid(config, phases)
    Y = np.column_stack(
        [np.sin(2 * np.pi * phases) + 0.05 * rng.standard_normal(60) for _ in range(n)]
    )
    model, report = geodesic_fit.fit(
        Y, phases, config, Euclidean(n), eta=0.01, eta_max=1.0, max_iter=5000
    )
    assert report.converged
    # Gauge-fixed comparison: fold p into the weights via phi summing to 1.
    W_eff = model.weights + model.base[:, None]
    W_ls = np.linalg.lstsq(Phi, Y, rcond=None)[0].T
    np.testing.assert_allclose(W_eff, W_ls, atol=1e-4)
    np.testing.assert_allclose(model.predict(phases), Phi @ W_ls.T, atol=1e-5)


def test_self_consistency_on_sphere():
    """Refitting data generated by a geodesic model recovers it exactly."""
    config = BasisConfig(5, 0.05)
    s3 = Sphere(3)
    rng = np.random.default_rng(5)
    p = s3.random_point(rng)
    W = rng.standard_normal((3, 5))
    W *= 0.4 / max(np.linalg.norm(W, axis=0).max(), 1.0)
    phases = np.linspace(0, 1, 50)
    Y = GeodesicModel(s3, p, W, config).predict(phases)
    model, report = geodesic_fit.fit(Y, phases, config, s3, eta=0.01, eta_max=1.0, max_iter=9000)
    assert report.final_error <= 1e-6


def test_error_history_monotone():
    config = BasisConfig(5, 0.05)
    s2 = Sphere(2)
    rng = np.random.default_rng(6)
    p = s2.random_point(rng)
    Y = GeodesicModel(s2, p, 0.3 * rng.standard_normal((2, 5)), config).predict(
        np.linspace(0, 1, 30)
    )
    _, report = geodesic_fit.fit(Y, np.linspace(0, 1, 30), config, s2)
    assert all(b < a for a, b in zip(report.error_history, report.error_history[1:]))
    assert all(s <= geodesic_fit.DEFAULT_ETA_MAX for s in report.step_sizes)


def test_fixed_base_stays_fixed():
    config = BasisConfig(5, 0.05)
    s2 = Sphere(2)
    rng = np.random.default_rng(7)
    p = s2.random_point(rng)
    Y = GeodesicModel(s2, p, 0.3 * rng.standard_normal((2, 5)), config).predict(
        np.linspace(0, 1, 30)
    )
    p_fixed = s2.exp(p, np.array([0.1, -0.05]))
    model, report = geodesic_fit.fit(
        Y, np.linspace(0, 1, 30), config, s2, p_fixed=p_fixed, eta_max=1.0, max_iter=9000
    )
    np.testing.assert_allclose(model.base, p_fixed)
    # The weights absorb the base offset up to curvature effects.
    assert report.final_error <= 1e-4


def test_initialization_uses_first_point():
    config = BasisConfig(4, 0.05)
    s2 = Sphere(2)
    Y = np.array([[0.0, 0.0, 1.0]] * 10)
    model, report = geodesic_fit.fit(Y, np.linspace(0, 1, 10), config, s2)
    np.testing.assert_allclose(model.base, Y[0])
    assert report.final_error == pytest.approx(0.0, abs=1e-12)
