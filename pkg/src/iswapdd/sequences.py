"""Pulse schedules for the decoupling sequences.

All sequences apply an even number m = 2n of simultaneous, instantaneous
pi-pulses to both qubits, about either the z or the y axis, at fractions
delta_i of the gate time:

* ``pdd``   delta_i = i/m                  (equidistant, last pulse at t_e);
* ``cp``    delta_i = (i - 1/2)/m          (Carr-Purcell timing; with y
            pulses this is conventionally called CPMG);
* ``udd``   delta_i = sin^2(pi i/(2m+2))   (Uhrig timing).

At m = 2 the Uhrig fractions reduce exactly to the Carr-Purcell ones; the
implementation special-cases this so the two schedules are bitwise equal.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA_Y, SIGMA_Z, kron
from .errors import InvalidCount, InvalidSpec

KINDS = ("none", "pdd", "cp", "udd")
AXES = ("z", "y")

_PULSE_OPS = {
    "z": kron(SIGMA_Z, SIGMA_Z),
    "y": kron(SIGMA_Y, SIGMA_Y),
}


@dataclass(frozen=True)
class SequenceSpec:
    """Which protocol, which pulse axis, and how many pulses.

    ``pulse_count`` is the total number of pulses m; the number of pulse
    pairs n = m/2 is what result tables report.  ``kind="none"`` encodes
    the pulse-free baseline and requires ``pulse_count == 0``.
    """

    kind: str
    axis: str = "z"
    pulse_count: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown sequence kind {self.kind!r}")
        if self.axis not in AXES:
            raise InvalidSpec(f"unknown pulse axis {self.axis!r}")
        if self.kind == "none":
            if self.pulse_count != 0:
                raise InvalidCount("kind 'none' must have pulse_count 0")
        else:
            _require_even_positive(self.pulse_count)

    @property
    def pairs(self):
        """Number of pulse pairs n = m/2."""
        return self.pulse_count // 2


@dataclass(frozen=True, eq=False)
class PulseSchedule:
    """Resolved absolute pulse times plus the two-qubit pulse unitary.

    ``times`` is strictly ascending within (0, t_e]; a pulse exactly at
    t_e (the periodic sequence) is applied after the final propagation
    segment, before the fidelity is evaluated.
    """

    times: np.ndarray
    pulse_op: np.ndarray | None
    axis: str
    kind: str

    @property
    def pulse_count(self):
        return len(self.times)


def _require_even_positive(m):
    if not isinstance(m, (int, np.integer)) or m <= 0 or m % 2 != 0:
        raise InvalidCount(f"pulse count must be a positive even integer, got {m!r}")


def pulse_fractions(kind, m):
    """Pulse time fractions delta_i for a sequence of m pulses.

    Returns
    -------
    (m,) ndarray
        Ascending fractions in (0, 1].
    """
    _require_even_positive(m)
    i = np.arange(1, m + 1, dtype=float)
    if kind == "pdd":
        return i / m
    if kind == "cp" or (kind == "udd" and m == 2):
        # Uhrig timing coincides with Carr-Purcell at m = 2; evaluating the
        # same expression keeps the two schedules bitwise identical there.
        return (i - 0.5) / m
    if kind == "udd":
        return np.sin(np.pi * i / (2.0 * m + 2.0)) ** 2
    raise InvalidSpec(f"no pulse timing rule for kind {kind!r}")


def pulse_unitary(axis):
    """Simultaneous two-qubit pi-pulse operator for the given axis.

    The exact local pi rotation exp(-i pi sigma/2) equals -i sigma; the
    resulting global phase of the two-qubit product is dropped (fidelity is
    phase-insensitive), leaving sigma_z x sigma_z or sigma_y x sigma_y.
    """
    try:
        return _PULSE_OPS[axis].copy()
    except KeyError:
        raise InvalidSpec(f"unknown pulse axis {axis!r}") from None


def build_schedule(spec, t_e):
    """Resolve a sequence spec into absolute pulse times over [0, t_e]."""
    if spec.kind == "none":
        return PulseSchedule(
            times=np.empty(0), pulse_op=None, axis=spec.axis, kind=spec.kind
        )
    fractions = pulse_fractions(spec.kind, spec.pulse_count)
    return PulseSchedule(
        times=fractions * t_e,
        pulse_op=pulse_unitary(spec.axis),
        axis=spec.axis,
        kind=spec.kind,
    )


def schedule_records(spec, t_e):
    """Schedule as a list of {index, delta, time} dicts for audit dumps."""
    if spec.kind == "none":
        return []
    fractions = pulse_fractions(spec.kind, spec.pulse_count)
    return [
        {"index": idx + 1, "delta": float(delta), "time": float(delta * t_e)}
        for idx, delta in enumerate(fractions)
    ]


def toggled_average(hamiltonian, axis):
    """Average of the Hamiltonian and its pulse-conjugated image.

    For z pulses the static Hamiltonian is invariant, so the average is the
    Hamiltonian itself; for y pulses the single-qubit splitting terms
    cancel and only the transverse coupling survives.  Used in tests and
    perturbative diagnostics.
    """
    op = pulse_unitary(axis)
    return 0.5 * (hamiltonian + op @ hamiltonian @ op)
