"""Basis-function tests: normalization, block structure, numeric edge cases."""

import numpy as np
import pytest

from geopromp.basis import BasisConfig, phase_from_times, phi, phi_grid, psi_matrix, psi_stack
from geopromp.errors import InvalidArgumentError


def test_phase_normalization():
    times = np.array([2.0, 3.0, 5.0, 10.0])
    z = phase_from_times(times)
    assert z[0] == 0.0 and z[-1] == 1.0
    np.testing.assert_allclose(z, (times - 2.0) / 8.0)


def test_phase_rejects_bad_times():
    with pytest.raises(InvalidArgumentError):
        phase_from_times([1.0])
    with pytest.raises(InvalidArgumentError):
        phase_from_times([0.0, 2.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        phase_from_times([3.0, 3.0])


def test_phi_sums_to_one_everywhere():
    config = BasisConfig(30, 0.01)
    for z in np.linspace(-0.5, 1.5, 101):
        b = phi(config, z)
        assert b.shape == (30,)
        assert np.all(b >= 0)
        assert b.sum() == pytest.approx(1.0, abs=1e-12)


def test_phi_narrow_width_far_phase_no_underflow():
    """Tiny kernels at a distant phase must not collapse to 0/0."""
    config = BasisConfig(60, 0.001)
    b = phi(config, 25.0)
    assert np.isfinite(b).all()
    assert b.sum() == pytest.approx(1.0)
    assert np.argmax(b) == 59  # nearest center dominates


def test_default_centers_cover_unit_interval():
    config = BasisConfig(5, 0.02)
    np.testing.assert_allclose(config.centers, [0.0, 0.25, 0.5, 0.75, 1.0])
    single = BasisConfig(1, 0.02)
    assert single.centers == (0.5,)


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        BasisConfig(0, 0.01)
    with pytest.raises(InvalidArgumentError):
        BasisConfig(3, -1.0)
    with pytest.raises(InvalidArgumentError):
        BasisConfig(3, 0.01, centers=(0.0, 0.5))
    with pytest.raises(InvalidArgumentError):
        BasisConfig(3, 0.01, centers=(0.0, 0.5, 0.5))


def test_psi_matrix_block_structure():
    config = BasisConfig(4, 0.02)
    z = 0.3
    row = phi(config, z)
    Psi = psi_matrix(config, z, 3)
    assert Psi.shape == (3, 12)
    for j in range(3):
        np.testing.assert_allclose(Psi[j, 4 * j : 4 * (j + 1)], row)
    # Off-block entries are exactly zero.
    mask = np.ones_like(Psi, dtype=bool)
    for j in range(3):
        mask[j, 4 * j : 4 * (j + 1)] = False
    assert np.all(Psi[mask] == 0.0)


def test_psi_matmul_equals_per_dimension_dot():
    config = BasisConfig(5, 0.02)
    rng = np.random.default_rng(0)
    w = rng.standard_normal(2 * 5)
    z = 0.62
    out = psi_matrix(config, z, 2) @ w
    b = phi(config, z)
    np.testing.assert_allclose(out, [b @ w[:5], b @ w[5:]])


def test_psi_stack_and_grid_shapes():
    config = BasisConfig(6, 0.01)
    phases = np.linspace(0, 1, 7)
    assert phi_grid(config, phases).shape == (7, 6)
    assert psi_stack(config, phases, 3).shape == (21, 18)
