"""Manifold operation tests: closed-form identities, independent numerical
oracles (geodesic ODE integration via scipy), and edge-case errors."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from geopromp.errors import InvalidArgumentError, SingularityError
from geopromp.manifolds import (
    Euclidean,
    Product,
    Sphere,
    manifold_from_tag,
    manifold_tag,
)


def sphere_geodesic_ode(x0, u0, t_end=1.0):
    """Integrate the sphere geodesic ODE x'' = -|x'|^2 x from (x0, u0).

    Independent oracle for the closed-form exponential map.
    """

    def rhs(_, s):
        n = s.size // 2
        x, v = s[:n], s[n:]
        return np.concatenate([v, -np.dot(v, v) * x])

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        np.concatenate([x0, u0]),
        rtol=1e-12,
        atol=1e-12,
        dense_output=True,
    )
    end = sol.y[: x0.size, -1]
    return end / np.linalg.norm(end)


@pytest.mark.parametrize("m", [2, 3])
def test_sphere_exp_matches_geodesic_ode(m):
    sphere = Sphere(m)
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = sphere.random_point(rng)
        v = sphere.random_tangent(x, 0.5, rng)
        expected = sphere_geodesic_ode(x, sphere.tangent_basis(x) @ v)
        np.testing.assert_allclose(sphere.exp(x, v), expected, atol=1e-8)


def test_sphere_distance_known_values():
    s2 = Sphere(2)
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    assert s2.distance(e1, e2) == pytest.approx(np.pi / 2)
    assert s2.distance(e1, e1) == 0.0
    assert s2.distance(e1, -e1) == pytest.approx(np.pi)


@pytest.mark.parametrize("manifold", [Sphere(2), Sphere(3), Euclidean(3)])
def test_log_exp_roundtrip(manifold):
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = manifold.random_point(rng)
        y = manifold.random_point(rng)
        if isinstance(manifold, Sphere) and manifold.distance(x, y) > np.pi - 0.1:
            continue
        v = manifold.log(x, y)
        np.testing.assert_allclose(manifold.exp(x, v), y, atol=1e-12)
        assert manifold.distance(x, y) == pytest.approx(np.linalg.norm(v), abs=1e-12)


def test_exp_of_zero_is_identity():
    s3 = Sphere(3)
    x = s3.random_point(3)
    np.testing.assert_allclose(s3.exp(x, np.zeros(3)), x)


def test_tangent_basis_orthonormal_and_deterministic():
    for manifold in (Sphere(2), Sphere(3), Product([Euclidean(3), Sphere(3)])):
        rng = np.random.default_rng(5)
        for _ in range(10):
            x = manifold.random_point(rng)
            B = manifold.tangent_basis(x)
            assert B.shape == (manifold.ambient_dim, manifold.intrinsic_dim)
            np.testing.assert_allclose(B.T @ B, np.eye(manifold.intrinsic_dim), atol=1e-12)
            np.testing.assert_allclose(B, manifold.tangent_basis(x.copy()))
            if isinstance(manifold, Sphere):
                np.testing.assert_allclose(B.T @ x, 0.0, atol=1e-12)


def test_transport_is_isometric_and_inverts():
    rng = np.random.default_rng(17)
    for manifold in (Sphere(2), Sphere(3)):
        for _ in range(20):
            x = manifold.random_point(rng)
            y = manifold.random_point(rng)
            if manifold.distance(x, y) > np.pi - 0.1:
                continue
            R = manifold.transport_matrix(x, y)
            np.testing.assert_allclose(R.T @ R, np.eye(manifold.intrinsic_dim), atol=1e-10)
            back = manifold.transport_matrix(y, x)
            np.testing.assert_allclose(back @ R, np.eye(manifold.intrinsic_dim), atol=1e-10)


def test_transport_maps_log_to_minus_log():
    """Transporting Log_x(y) along x->y yields -Log_y(x)."""
    rng = np.random.default_rng(23)
    s3 = Sphere(3)
    for _ in range(20):
        x = s3.random_point(rng)
        y = s3.random_point(rng)
        moved = s3.transport(x, y, s3.log(x, y))
        np.testing.assert_allclose(moved, -s3.log(y, x), atol=1e-10)


def test_transport_spd_preserves_eigenvalues():
    rng = np.random.default_rng(29)
    s3 = Sphere(3)
    for _ in range(10):
        x = s3.random_point(rng)
        y = s3.random_point(rng)
        A = rng.standard_normal((3, 3))
        V = A @ A.T + 0.1 * np.eye(3)
        W = s3.transport_spd(x, y, V)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvalsh(W)), np.sort(np.linalg.eigvalsh(V)), atol=1e-10
        )
        np.testing.assert_allclose(W, W.T)


def test_euclidean_operations_are_linear_algebra():
    r3 = Euclidean(3)
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([-1.0, 0.5, 2.0])
    np.testing.assert_allclose(r3.log(x, y), y - x)
    np.testing.assert_allclose(r3.exp(x, y - x), y)
    assert r3.distance(x, y) == pytest.approx(np.linalg.norm(x - y))
    np.testing.assert_allclose(r3.transport_matrix(x, y), np.eye(3))


def test_product_factorizes():
    prod = Product([Euclidean(3), Sphere(3)])
    r3, s3 = prod.factors
    rng = np.random.default_rng(31)
    x = prod.random_point(rng)
    y = prod.random_point(rng)
    v = prod.log(x, y)
    np.testing.assert_allclose(v[:3], r3.log(x[:3], y[:3]))
    np.testing.assert_allclose(v[3:], s3.log(x[3:], y[3:]))
    np.testing.assert_allclose(prod.exp(x, v), y, atol=1e-12)
    assert prod.distance(x, y) == pytest.approx(
        np.hypot(r3.distance(x[:3], y[:3]), s3.distance(x[3:], y[3:]))
    )


def test_antipodal_log_raises():
    s2 = Sphere(2)
    x = np.array([0.0, 0.0, 1.0])
    with pytest.raises(SingularityError):
        s2.log(x, -x)
    with pytest.raises(SingularityError):
        s2.transport_matrix(x, -x)


def test_project_normalizes_and_rejects_zero():
    s2 = Sphere(2)
    np.testing.assert_allclose(s2.project(np.array([0.0, 0.0, 2.0])), [0.0, 0.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        s2.project(np.zeros(3))


def test_shape_validation():
    s2 = Sphere(2)
    with pytest.raises(InvalidArgumentError):
        s2.distance(np.zeros(4), np.zeros(3))
    with pytest.raises(InvalidArgumentError):
        s2.exp(np.array([0.0, 0.0, 1.0]), np.zeros(3))  # intrinsic dim is 2


def test_nested_product_rejected():
    with pytest.raises(InvalidArgumentError):
        Product([Product([Euclidean(2)]), Sphere(2)])


def test_tag_round_trip():
    for tag in ("S2", "S3", "R3", "R3xS3"):
        assert manifold_tag(manifold_from_tag(tag)) == tag
    with pytest.raises(InvalidArgumentError):
        manifold_from_tag("T2")
