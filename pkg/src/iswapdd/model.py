"""Physical model of the coupled-qubit gate.

Two qubits at their optimal working points interact through a fixed
transverse coupling.  The static Hamiltonian in angular-frequency units is

    H0 = -(Omega/2) (sigma_1z x I + I x sigma_2z) + (omega_c/2) sigma_1x x sigma_2x

and local transverse noise enters as

    dH(t) = -(x1(t)/2) sigma_1x x I - (x2(t)/2) I x sigma_2x.

Free evolution under H0 for t_e = pi/(2 omega_c) maps |+-> onto
(|+-> - i|-+>)/sqrt(2), an entangling square-root-of-iSWAP operation;
the gate error of a trajectory is one minus the fidelity with that target.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import IDENTITY_2, SIGMA_X, SIGMA_Z, kron

# Computational basis ordering used everywhere: (|++>, |+->, |-+>, |-->).
BASIS_LABELS = ("++", "+-", "-+", "--")

# Initial state |+-> and the entangled target (|+-> - i|-+>)/sqrt(2).
INITIAL_STATE = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
TARGET_STATE = np.array([0.0, 1.0, -1.0j, 0.0], dtype=complex) / math.sqrt(2.0)

_HZ_SUM = kron(SIGMA_Z, IDENTITY_2) + kron(IDENTITY_2, SIGMA_Z)
_HXX = kron(SIGMA_X, SIGMA_X)
_HX1 = kron(SIGMA_X, IDENTITY_2)
_HX2 = kron(IDENTITY_2, SIGMA_X)


@dataclass(frozen=True)
class GateParams:
    """Deterministic model parameters.

    Attributes
    ----------
    omega : float
        Single-qubit level splitting Omega in rad/s.
    omega_c : float
        Transverse coupling strength omega_c in rad/s.
    """

    omega: float
    omega_c: float

    def __post_init__(self):
        if not (self.omega > 0.0):
            raise ValueError(f"omega must be positive, got {self.omega!r}")
        if not (self.omega_c > 0.0):
            raise ValueError(f"omega_c must be positive, got {self.omega_c!r}")

    @property
    def weak_coupling(self):
        """True when omega_c <= omega/10; closed-form results that assume
        omega_c << omega should check this flag."""
        return self.omega_c <= self.omega / 10.0


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """Closed-form eigensystem of the static Hamiltonian.

    Attributes
    ----------
    energies : (4,) ndarray
        Eigenvalues in ascending order:
        -sqrt(Omega^2 + omega_c^2/4), -omega_c/2, +omega_c/2,
        +sqrt(Omega^2 + omega_c^2/4).
    phi : float
        Mixing angle of the outer (|++>, |-->) block, tan(phi) = -omega_c/(2 Omega).
    vectors : (4, 4) ndarray
        Column k is the eigenvector for ``energies[k]``.
    """

    energies: np.ndarray
    phi: float
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class GateTarget:
    """Initial state, target state and gate time of the entangling gate."""

    initial: np.ndarray
    target: np.ndarray
    t_e: float


def static_hamiltonian(p):
    """Static Hamiltonian H0 for the given parameters.

    In the fixed basis ordering the diagonal reads Omega * (+1, 0, 0, -1)
    and the coupling contributes omega_c/2 on the antidiagonal, connecting
    |++> with |--> and |+-> with |-+>.
    """
    return -0.5 * p.omega * _HZ_SUM + 0.5 * p.omega_c * _HXX


def noise_hamiltonian(x1, x2):
    """Transverse noise Hamiltonian for instantaneous values x1, x2 (rad/s)."""
    return -0.5 * x1 * _HX1 - 0.5 * x2 * _HX2


def eigensystem(p):
    """Closed-form eigensystem of ``static_hamiltonian(p)``.

    The (|+->, |-+>) block is independent of Omega and hosts the gate
    dynamics; the outer (|++>, |-->) block mixes with angle phi.
    """
    r = math.hypot(p.omega, 0.5 * p.omega_c)
    phi = math.atan2(-p.omega_c, 2.0 * p.omega)
    half = 0.5 * phi
    s, c = math.sin(half), math.cos(half)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    vectors = np.zeros((4, 4), dtype=complex)
    vectors[:, 0] = (s, 0.0, 0.0, c)
    vectors[:, 1] = (0.0, inv_sqrt2, -inv_sqrt2, 0.0)
    vectors[:, 2] = (0.0, inv_sqrt2, inv_sqrt2, 0.0)
    vectors[:, 3] = (c, 0.0, 0.0, -s)
    energies = np.array([-r, -0.5 * p.omega_c, 0.5 * p.omega_c, r])
    return Eigensystem(energies=energies, phi=phi, vectors=vectors)


def gate_target(p):
    """Gate time and the initial/target states of the entangling operation."""
    return GateTarget(
        initial=INITIAL_STATE.copy(),
        target=TARGET_STATE.copy(),
        t_e=math.pi / (2.0 * p.omega_c),
    )
