"""Simulator and analysis toolkit for a two-qubit sqrt(iSWAP) gate under
local transverse 1/f noise with dynamical-decoupling pulse sequences."""

__version__ = "0.1.0"

from .analytics import (
    ScalingFit,
    fit_power_law,
    magnus_effective_hamiltonian,
    pdd_error_mean,
    pdd_error_realization,
    scaling_template,
    threshold_n0,
)
from .ensemble import (
    ErrorEstimate,
    RunConfig,
    estimate_gate_error,
    sweep_cutoff,
    sweep_n,
    sweep_parameter,
    trajectory_errors,
)
from .model import (
    GateParams,
    GateTarget,
    eigensystem,
    gate_target,
    noise_hamiltonian,
    static_hamiltonian,
)
from .noise import (
    NoiseSpec,
    PiecewiseConstantPath,
    estimate_psd,
    fourth_cumulant,
    sample_one_over_f,
    sample_path,
    sample_single_rtn,
    sample_static_gaussian,
    spectrum_amplitude,
)
from .propagation import (
    TrajectoryResult,
    evolve_quasi_static,
    evolve_static_batch,
    evolve_trajectory,
    trajectory_error,
)
from .sequences import (
    PulseSchedule,
    SequenceSpec,
    build_schedule,
    pulse_fractions,
    pulse_unitary,
)
