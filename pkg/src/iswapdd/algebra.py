"""Exact complex linear algebra on the small matrices used by the simulator.

Everything here operates on plain ``numpy`` arrays: 2x2 single-qubit
operators, 4x4 two-qubit operators, and length-4 state vectors.  The basis
ordering for two-qubit objects is (|++>, |+->, |-+>, |-->) with the sign
convention ``sigma_z |+-> = -+ |+->``, i.e. sigma_z = diag(-1, +1) on the
(|+>, |->) coordinates.  All frequencies are angular (rad/s), all times in
seconds.

Matrix exponentials are computed by Hermitian eigendecomposition, which is
exact (to roundoff) for the piecewise-constant Hamiltonians used throughout;
no series or scaling-and-squaring approximation is involved.
"""

import numpy as np

from .errors import NonHermitianInput

# Tolerances: plain algebraic identities must hold to ATOL_ALGEBRA, while
# quantities composed from many floating-point operations (long products of
# propagators, round trips) are checked against ATOL_COMPOSED.
ATOL_ALGEBRA = 1e-12
ATOL_COMPOSED = 1e-10

# Pauli matrices in the (|+>, |->) coordinates fixed by sigma_z|+-> = -+|+->.
# With sigma_z = diag(-1, +1) the pair below satisfies the standard algebra
# [sigma_x, sigma_y] = 2i sigma_z.
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)


def kron(a, b):
    """Kronecker product of two single-qubit operators.

    Parameters
    ----------
    a, b : (2, 2) array_like
        Operators acting on qubit 1 and qubit 2 respectively.

    Returns
    -------
    (4, 4) ndarray
        Two-qubit operator in the (|++>, |+->, |-+>, |-->) ordering.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermiticity_defect(m):
    """Max-norm deviation of ``m`` from its own conjugate transpose."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def unitarity_defect(u):
    """Return ``max |u^dag u - I|`` entrywise."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def require_hermitian(m, atol=ATOL_ALGEBRA):
    """Raise :class:`NonHermitianInput` if ``m`` is not Hermitian."""
    defect = hermiticity_defect(m)
    if defect > atol:
        raise NonHermitianInput(
            f"matrix is not Hermitian: max |M - M^dag| = {defect:.3e} > {atol:.1e}"
        )


def expm_hermitian(h, t):
    """Unitary ``exp(-i h t)`` of a Hermitian matrix via eigendecomposition.

    Parameters
    ----------
    h : (n, n) array_like
        Hermitian generator in rad/s.
    t : float
        Evolution time in seconds.

    Returns
    -------
    (n, n) ndarray
        The unitary propagator.

    Raises
    ------
    NonHermitianInput
        If the Hermiticity check fails.
    """
    h = np.asarray(h, dtype=complex)
    require_hermitian(h)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def apply_expm_factored(eigvals, eigvecs, t, state):
    """Apply ``exp(-i h t)`` to ``state`` given the eigendecomposition of h.

    This is the inner loop of the propagators: the eigendecomposition is
    computed once per distinct Hamiltonian and reused for every interval in
    which that Hamiltonian is active.
    """
    return (eigvecs * np.exp(-1j * eigvals * t)) @ (eigvecs.conj().T @ state)


def state_norm_defect(state):
    """Deviation of the squared norm of a state vector from one."""
    state = np.asarray(state)
    return float(abs(np.vdot(state, state).real - 1.0))
