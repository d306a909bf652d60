"""Tests for the two-qubit Hamiltonian model and gate target."""

import numpy as np
import pytest

from iswapdd.algebra import IDENTITY_2, SIGMA_X, SIGMA_Z, expm_hermitian, kron
from iswapdd.model import (
    BASIS_LABELS,
    INITIAL_STATE,
    TARGET_STATE,
    GateParams,
    eigensystem,
    gate_target,
    noise_hamiltonian,
    static_hamiltonian,
)


def test_static_hamiltonian_structure(desk_gate):
    h = static_hamiltonian(desk_gate)
    expected = -0.5 * desk_gate.omega * (
        kron(SIGMA_Z, IDENTITY_2) + kron(IDENTITY_2, SIGMA_Z)
    ) + 0.5 * desk_gate.omega_c * kron(SIGMA_X, SIGMA_X)
    np.testing.assert_allclose(h, expected, atol=0.0)
    # Splitting on the diagonal, coupling on the antidiagonal.
    np.testing.assert_allclose(
        np.diag(h).real, [desk_gate.omega, 0.0, 0.0, -desk_gate.omega]
    )
    assert h[1, 2] == 0.5 * desk_gate.omega_c
    np.testing.assert_allclose(h, h.conj().T)


def test_noise_hamiltonian_is_linear_and_transverse():
    h = noise_hamiltonian(3.0, -5.0)
    expected = -0.5 * 3.0 * kron(SIGMA_X, IDENTITY_2) + 0.5 * 5.0 * kron(
        IDENTITY_2, SIGMA_X
    )
    np.testing.assert_allclose(h, expected, atol=0.0)
    np.testing.assert_allclose(
        noise_hamiltonian(2.0, 4.0),
        noise_hamiltonian(2.0, 0.0) + noise_hamiltonian(0.0, 4.0),
        atol=0.0,
    )
    assert np.all(np.diag(noise_hamiltonian(1.0, 1.0)) == 0.0)


def test_eigensystem_diagonalizes(desk_gate):
    eig = eigensystem(desk_gate)
    h = static_hamiltonian(desk_gate)
    for k in range(4):
        vec = eig.vectors[:, k]
        # Values are ~1e11 rad/s; atol = 1 rad/s is a relative 1e-11.
        np.testing.assert_allclose(h @ vec, eig.energies[k] * vec, atol=1.0)
    # Energies ascend and split as (-R, -wc/2, +wc/2, +R).
    r = np.hypot(desk_gate.omega, 0.5 * desk_gate.omega_c)
    np.testing.assert_allclose(
        eig.energies,
        [-r, -0.5 * desk_gate.omega_c, 0.5 * desk_gate.omega_c, r],
        rtol=1e-12,
    )
    # Orthonormality.
    np.testing.assert_allclose(
        eig.vectors.conj().T @ eig.vectors, np.eye(4), atol=1e-12
    )


def test_swap_subspace_vectors(desk_gate):
    eig = eigensystem(desk_gate)
    np.testing.assert_allclose(
        np.abs(eig.vectors[:, 1]), [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0], atol=1e-12
    )
    np.testing.assert_allclose(
        np.abs(eig.vectors[:, 2]), [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0], atol=1e-12
    )


def test_gate_target_reached_exactly(desk_gate):
    target = gate_target(desk_gate)
    assert target.t_e == pytest.approx(np.pi / (2.0 * desk_gate.omega_c), rel=1e-15)
    u = expm_hermitian(static_hamiltonian(desk_gate), target.t_e)
    final = u @ target.initial
    fidelity = abs(np.vdot(target.target, final)) ** 2
    assert 1.0 - fidelity < 1e-12


def test_half_gate_fidelity(desk_gate):
    # At t_e/2 the excitation is half swapped: F = (1 + 1/sqrt(2)) / 2.
    target = gate_target(desk_gate)
    u = expm_hermitian(static_hamiltonian(desk_gate), 0.5 * target.t_e)
    fidelity = abs(np.vdot(target.target, u @ target.initial)) ** 2
    assert fidelity == pytest.approx((1.0 + 1.0 / np.sqrt(2.0)) / 2.0, abs=1e-12)


def test_initial_and_target_states():
    np.testing.assert_allclose(INITIAL_STATE, [0, 1, 0, 0], atol=0.0)
    np.testing.assert_allclose(
        TARGET_STATE, np.array([0, 1, -1j, 0]) / np.sqrt(2), atol=1e-15
    )
    assert len(BASIS_LABELS) == 4


def test_gate_params_validation():
    with pytest.raises(ValueError):
        GateParams(omega=0.0, omega_c=5e9)
    with pytest.raises(ValueError):
        GateParams(omega=1e11, omega_c=-1.0)
    p = GateParams(omega=1e11, omega_c=5e9)
    assert p.weak_coupling
    assert not GateParams(omega=1e10, omega_c=5e9).weak_coupling
