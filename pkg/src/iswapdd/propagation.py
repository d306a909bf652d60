"""Exact trajectory evolution through piecewise-constant Hamiltonians.

A trajectory merges the switch events of the two noise paths with the pulse
times of the schedule into one timeline over [0, t_e].  Within each segment
the Hamiltonian is constant, so the propagator is an exact spectral
exponential; there is no time-step error and results are independent of any
internal discretization.  Tie-breaking when a noise switch coincides with a
pulse: the running segment is closed with the old value, the pulse is
applied, then the new value takes effect.

States are never renormalized silently; norm drift beyond tolerance fails
the trajectory instead of being hidden.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import apply_expm_factored
from .errors import TimelineMismatch, TrajectoryFailure
from .model import (
    INITIAL_STATE,
    TARGET_STATE,
    gate_target,
    noise_hamiltonian,
    static_hamiltonian,
)

# A trajectory whose state norm drifts by more than this fails outright;
# renormalizing would mask propagator bugs.
NORM_DRIFT_TOL = 1e-10
# Roundoff slack when clamping the error to [0, 1].
ERROR_CLAMP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    """Final state, gate error and segment count of one trajectory."""

    final_state: np.ndarray
    error: float
    segment_count: int


def trajectory_error(state, target=TARGET_STATE):
    """Gate error 1 - |<target|state>|^2, clamped to [0, 1].

    Raises
    ------
    TrajectoryFailure
        If the value lies outside [0, 1] by more than roundoff tolerance.
    """
    overlap = np.vdot(target, state)
    error = 1.0 - (overlap.real**2 + overlap.imag**2)
    if error < -ERROR_CLAMP_TOL or error > 1.0 + ERROR_CLAMP_TOL:
        raise TrajectoryFailure(f"gate error {error!r} outside [0, 1]")
    return min(max(error, 0.0), 1.0)


def _check_norm(state):
    defect = abs(float(np.vdot(state, state).real) - 1.0)
    if defect > NORM_DRIFT_TOL:
        raise TrajectoryFailure(f"state norm drifted by {defect:.3e}")


def evolve_trajectory(p, path1, path2, schedule):
    """Propagate |+-> through one noise realization under a pulse schedule.

    Parameters
    ----------
    p : GateParams
    path1, path2 : PiecewiseConstantPath
        Noise realizations for qubit 1 and qubit 2; must cover [0, t_e].
    schedule : PulseSchedule
        Built for the same gate time.

    Returns
    -------
    TrajectoryResult
    """
    t_e = gate_target(p).t_e
    if path1.duration < t_e or path2.duration < t_e:
        raise TimelineMismatch(
            f"noise paths must cover the gate time {t_e!r} s"
        )
    switches = np.concatenate((path1.switch_times, path2.switch_times))
    switches = switches[(switches > 0.0) & (switches < t_e)]
    boundaries = np.unique(np.concatenate((switches, schedule.times, [t_e])))

    h0 = static_hamiltonian(p)
    eig_cache = {}
    pulse_times = schedule.times
    pulse_op = schedule.pulse_op
    next_pulse = 0

    state = INITIAL_STATE.copy()
    t_prev = 0.0
    segments = 0
    for t in boundaries:
        dt = t - t_prev
        if dt > 0.0:
            key = (float(path1.value_at(t_prev)), float(path2.value_at(t_prev)))
            try:
                w, v = eig_cache[key]
            except KeyError:
                w, v = np.linalg.eigh(h0 + noise_hamiltonian(*key))
                eig_cache[key] = (w, v)
            state = apply_expm_factored(w, v, dt, state)
            segments += 1
        while next_pulse < len(pulse_times) and pulse_times[next_pulse] == t:
            state = pulse_op @ state
            next_pulse += 1
        t_prev = t
    _check_norm(state)
    return TrajectoryResult(
        final_state=state, error=trajectory_error(state), segment_count=segments
    )


def evolve_quasi_static(p, x1, x2, schedule):
    """Propagate with constant noise values x1, x2 (rad/s).

    This is the closed product of per-interval exponentials interleaved
    with pulses; on constant paths it coincides with
    :func:`evolve_trajectory` exactly.
    """
    t_e = gate_target(p).t_e
    w, v = np.linalg.eigh(static_hamiltonian(p) + noise_hamiltonian(x1, x2))
    state = INITIAL_STATE.copy()
    t_prev = 0.0
    segments = 0
    for t in schedule.times:
        dt = t - t_prev
        if dt > 0.0:
            state = apply_expm_factored(w, v, dt, state)
            segments += 1
        state = schedule.pulse_op @ state
        t_prev = t
    if t_e - t_prev > 0.0:
        state = apply_expm_factored(w, v, t_e - t_prev, state)
        segments += 1
    _check_norm(state)
    return TrajectoryResult(
        final_state=state, error=trajectory_error(state), segment_count=segments
    )


def evolve_static_batch(p, x1, x2, schedule):
    """Vectorized quasi-static evolution for arrays of constant values.

    Evolves one trajectory per entry of ``x1``/``x2`` through the same
    schedule, using a batched eigendecomposition.  This is the fast path of
    the Monte Carlo ensemble for trajectories whose noise paths hold a
    single value over the whole gate.

    Returns
    -------
    (n,) ndarray
        Gate errors, clamped to [0, 1].
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    t_e = gate_target(p).t_e
    h0 = static_hamiltonian(p)
    hx1 = noise_hamiltonian(1.0, 0.0)
    hx2 = noise_hamiltonian(0.0, 1.0)
    h = (
        h0[np.newaxis, :, :]
        + x1[:, np.newaxis, np.newaxis] * hx1
        + x2[:, np.newaxis, np.newaxis] * hx2
    )
    w, v = np.linalg.eigh(h)
    v_conj = v.conj()

    state = np.broadcast_to(INITIAL_STATE, (len(x1), 4)).copy()
    pulse_op = schedule.pulse_op
    t_prev = 0.0

    def propagate(dt):
        coeff = np.einsum("nba,nb->na", v_conj, state)
        coeff *= np.exp(-1j * w * dt)
        return np.einsum("nab,nb->na", v, coeff)

    for t in schedule.times:
        dt = t - t_prev
        if dt > 0.0:
            state = propagate(dt)
        state = np.einsum("ab,nb->na", pulse_op, state)
        t_prev = t
    if t_e - t_prev > 0.0:
        state = propagate(t_e - t_prev)

    norms = np.einsum("na,na->n", state.conj(), state).real
    worst = int(np.argmax(np.abs(norms - 1.0)))
    if abs(norms[worst] - 1.0) > NORM_DRIFT_TOL:
        raise TrajectoryFailure(
            f"state norm drifted by {abs(norms[worst] - 1.0):.3e} "
            f"(batch index {worst})"
        )
    overlap = state @ TARGET_STATE.conj()
    errors = 1.0 - (overlap.real**2 + overlap.imag**2)
    if errors.min() < -ERROR_CLAMP_TOL or errors.max() > 1.0 + ERROR_CLAMP_TOL:
        raise TrajectoryFailure("gate error outside [0, 1] in static batch")
    return np.clip(errors, 0.0, 1.0)
