"""Finite phase basis, its phase matrix, densities, and moment convergence."""

import math

import numpy as np
import pytest

from phasekit.errors import CutoffMismatchError
from phasekit.fock import build_state, density_from_pure, expectation
from phasekit.pegg_barnett import (
    moment_integral,
    pair_pb_closed_form,
    pb_basis,
    pb_density,
    pb_density_mixed,
    pb_projector,
    phi_matrix,
    phi_moment,
)
from phasekit.wigner import PhaseGrid

TWO_PI = 2.0 * math.pi


def test_basis_is_orthonormal_and_complete():
    basis = pb_basis(7, -math.pi)
    mat = np.array([st.amps for st in basis.states])
    gram = mat @ mat.conj().T
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-14)
    completeness = mat.conj().T @ mat
    np.testing.assert_allclose(completeness, np.eye(8), atol=1e-14)
    assert basis.thetas[0] == -math.pi
    np.testing.assert_allclose(np.diff(basis.thetas), TWO_PI / 8)


def test_density_of_number_state_is_flat():
    grid = PhaseGrid(-math.pi, 64)
    psi = build_state("fock:n=3", 6)
    dist = pb_density(psi, grid)
    np.testing.assert_allclose(dist.values, 1.0 / TWO_PI, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2])
def test_pair_density_closed_form(n):
    grid = PhaseGrid(-math.pi, 720)
    psi = build_state(f"pair:n={n}", 2 * n)
    dist = pb_density(psi, grid)
    ref = pair_pb_closed_form(n, grid)
    np.testing.assert_allclose(dist.values, ref.values, atol=1e-14)
    assert dist.values.min() >= 0.0
    np.testing.assert_allclose(dist.integral(), 1.0, atol=1e-14)


def test_density_never_negative_for_random_states():
    rng = np.random.default_rng(1)
    grid = PhaseGrid(-math.pi, 360)
    for _ in range(5):
        raw = rng.normal(size=9) + 1j * rng.normal(size=9)
        amps = raw / np.linalg.norm(raw)
        from phasekit.fock import StateVector

        dist = pb_density(StateVector(8, amps), grid)
        assert dist.values.min() >= 0.0


def test_mixed_density_reduces_to_pure_case():
    grid = PhaseGrid(0.0, 90)
    psi = build_state("super:1*fock:n=0+0.6+0.2i*fock:n=2", 4)
    pure = pb_density(psi, grid)
    mixed = pb_density_mixed(density_from_pure(psi), grid)
    np.testing.assert_allclose(mixed.values, pure.values, atol=1e-14)


def test_mixed_density_is_linear_in_the_state():
    grid = PhaseGrid(-math.pi, 120)
    a = build_state("fock:n=1", 4)
    b = build_state("pair:n=2", 4)
    rho = 0.3 * density_from_pure(a).elems + 0.7 * density_from_pure(b).elems
    from phasekit.fock import DensityMatrix

    mixed = pb_density_mixed(DensityMatrix(4, rho), grid)
    ref = 0.3 * pb_density(a, grid).values + 0.7 * pb_density(b, grid).values
    np.testing.assert_allclose(mixed.values, ref, atol=1e-14)


def test_projector_trace_reproduces_density():
    psi = build_state("pair:n=1", 5)
    rho = density_from_pure(psi)
    grid = PhaseGrid(-math.pi, 32)
    dist = pb_density(psi, grid)
    for i in (0, 7, 19):
        theta = float(grid.samples[i])
        val = expectation(pb_projector(theta, 5), rho).real
        np.testing.assert_allclose(val, dist.values[i], atol=1e-14)


def test_phi_matrix_equals_spectral_sum():
    for s, theta0 in [(12, -math.pi), (7, 0.4)]:
        closed = phi_matrix(s, theta0)
        basis = pb_basis(s, theta0)
        acc = np.zeros((s + 1, s + 1), dtype=complex)
        for theta, st in zip(basis.thetas, basis.states):
            acc += theta * np.outer(st.amps, st.amps.conj())
        np.testing.assert_allclose(closed.elems, acc, atol=1e-13)
        assert closed.hermitian_hint
    with pytest.raises(ValueError):
        phi_matrix(-1, 0.0)


def test_phi_matrix_eigenvalues_are_the_window_angles():
    s, theta0 = 24, -math.pi
    eig = np.linalg.eigvalsh(phi_matrix(s, theta0).elems)
    np.testing.assert_allclose(
        np.sort(eig), np.sort(theta0 + TWO_PI * np.arange(s + 1) / (s + 1)), atol=1e-12
    )


def test_moment_requires_basis_at_least_as_large_as_state():
    psi = build_state("pair:n=2", 4)
    with pytest.raises(CutoffMismatchError):
        phi_moment(3, -math.pi, psi, 2)
    with pytest.raises(ValueError):
        phi_moment(8, -math.pi, psi, 0)


def test_spectral_moment_equals_matrix_power_path():
    psi = build_state("pair:n=1", 2)
    theta0 = -math.pi
    for s in (2, 3, 5, 16, 128):
        res = phi_moment(s, theta0, psi, 2)
        amps = np.zeros(s + 1, dtype=complex)
        amps[:3] = psi.amps
        phi = phi_matrix(s, theta0).elems
        matrix_path = float(np.real(amps.conj() @ (phi @ phi) @ amps))
        np.testing.assert_allclose(matrix_path, res.spectral, atol=1e-12)


def test_second_moment_converges_to_quadrature_limit():
    psi = build_state("pair:n=1", 2)
    theta0 = -math.pi
    target = math.pi**2 / 3 + 0.5
    np.testing.assert_allclose(moment_integral(psi, theta0, 2), target, atol=1e-12)
    gaps = [abs(phi_moment(s, theta0, psi, 2).spectral - target) for s in (64, 256, 1024)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[-1] < 1e-3


def test_first_moment_of_flat_density_is_window_center():
    psi = build_state("fock:n=0", 0)
    res = phi_moment(400, -math.pi, psi, 1)
    # mean of the uniform density over [-pi, pi) at finite s sits h/2 left of 0
    np.testing.assert_allclose(res.integral, 0.0, atol=1e-12)
    np.testing.assert_allclose(res.spectral, -math.pi / 401, atol=1e-12)
