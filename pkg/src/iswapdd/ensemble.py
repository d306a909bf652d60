"""Reproducible parallel Monte Carlo over noise realizations.

Each trajectory k derives two independent RNG substreams from the key
(master_seed, context, k, qubit) through a counter-based construction
(``SeedSequence`` spawn keys feeding a Philox generator), so results are
bit-identical for a given configuration regardless of worker count or
scheduling.  The ``context`` integer decorrelates members of a sweep (it
is the swept index / pulse-pair count); passing ``crn=True`` to a sweep
reuses context 0 everywhere, which correlates the sampling across sweep
points (common random numbers) and reduces curve jitter at the price of
correlated estimates.

Aggregation accumulates the error and its square in fixed trajectory
order with compensated (``math.fsum``) summation, so the reduction is
bit-stable and independent of chunking.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import TrajectoryFailure, ValidationError
from .model import gate_target
from .noise import sample_path
from .propagation import evolve_quasi_static, evolve_static_batch, evolve_trajectory
from .sequences import SequenceSpec, build_schedule

# Trajectories per work unit.  Fixed (never derived from the worker count)
# so that chunk boundaries, and therefore every floating-point result, are
# identical however the chunks are scheduled.
_CHUNK_SIZE = 2048

# Abort threshold: more than this fraction of failed trajectories aborts
# the whole estimate instead of silently averaging the survivors.
_MAX_FAILURE_FRACTION = 1e-3


@dataclass(frozen=True)
class RunConfig:
    """Complete, immutable description of one Monte Carlo estimate.

    Attributes
    ----------
    gate : GateParams
    noise1, noise2 : NoiseSpec
        Independent per-qubit noise processes.
    sequence : SequenceSpec
    trajectories : int
        Ensemble size N.
    master_seed : int
        64-bit seed from which all substreams are derived.
    """

    gate: object
    noise1: object
    noise2: object
    sequence: object
    trajectories: int
    master_seed: int

    def __post_init__(self):
        if self.trajectories < 1:
            raise ValidationError(
                f"trajectories must be >= 1, got {self.trajectories!r}"
            )
        if self.master_seed < 0:
            raise ValidationError(f"master_seed must be >= 0, got {self.master_seed!r}")


@dataclass(frozen=True)
class ErrorEstimate:
    """Monte Carlo mean gate error with reproducibility metadata.

    ``std_error`` is the sample standard deviation over trajectories
    divided by sqrt(N).
    """

    mean: float
    std_error: float
    n_trajectories: int
    master_seed: int
    wall_time: float


def substream(master_seed, context, trajectory, qubit):
    """Independent RNG for one (context, trajectory, qubit) triple."""
    seq = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(context, trajectory, qubit)
    )
    return np.random.Generator(np.random.Philox(seq))


def _chunk_errors(cfg, context, lo, hi):
    """Per-trajectory errors for trajectory indices [lo, hi).

    Returns (errors, failures): errors is a float array with NaN at failed
    slots, failures a list of (index, message).
    """
    t_e = gate_target(cfg.gate).t_e
    schedule = build_schedule(cfg.sequence, t_e)
    count = hi - lo
    errors = np.full(count, np.nan)
    failures = []

    static_idx = []
    static_x1 = []
    static_x2 = []
    dynamic = []
    for k in range(lo, hi):
        path1 = sample_path(cfg.noise1, t_e, substream(cfg.master_seed, context, k, 0))
        path2 = sample_path(cfg.noise2, t_e, substream(cfg.master_seed, context, k, 1))
        if len(path1.times) == 1 and len(path2.times) == 1:
            static_idx.append(k - lo)
            static_x1.append(path1.values[0])
            static_x2.append(path2.values[0])
        else:
            dynamic.append((k, path1, path2))

    if static_idx:
        try:
            batch = evolve_static_batch(
                cfg.gate, np.asarray(static_x1), np.asarray(static_x2), schedule
            )
            errors[static_idx] = batch
        except TrajectoryFailure:
            # Rare fallback: re-run the batch one by one so the failing
            # trajectory index can be attributed.
            for slot, x1, x2 in zip(static_idx, static_x1, static_x2):
                try:
                    errors[slot] = evolve_quasi_static(
                        cfg.gate, x1, x2, schedule
                    ).error
                except TrajectoryFailure as exc:
                    failures.append((lo + slot, str(exc)))

    for k, path1, path2 in dynamic:
        try:
            errors[k - lo] = evolve_trajectory(cfg.gate, path1, path2, schedule).error
        except TrajectoryFailure as exc:
            failures.append((k, str(exc)))
    return errors, failures


def _chunk_task(payload):
    cfg, context, lo, hi = payload
    return _chunk_errors(cfg, context, lo, hi)


def trajectory_errors(cfg, context=0, workers=1):
    """Per-trajectory gate errors in trajectory order.

    Raises
    ------
    TrajectoryFailure
        If more than the tolerated fraction of trajectories fail; below
        the threshold failed slots are NaN.
    """
    n = cfg.trajectories
    ranges = [(lo, min(lo + _CHUNK_SIZE, n)) for lo in range(0, n, _CHUNK_SIZE)]
    payloads = [(cfg, context, lo, hi) for lo, hi in ranges]
    failures = []
    parts = []
    if workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for errs, fails in pool.map(_chunk_task, payloads):
                parts.append(errs)
                failures.extend(fails)
    else:
        for payload in payloads:
            errs, fails = _chunk_task(payload)
            parts.append(errs)
            failures.extend(fails)
    errors = np.concatenate(parts)
    if len(failures) > _MAX_FAILURE_FRACTION * n:
        idx, msg = failures[0]
        raise TrajectoryFailure(
            f"{len(failures)} of {n} trajectories failed; "
            f"first failure at index {idx}: {msg}"
        )
    return errors


def estimate_gate_error(cfg, workers=1, context=0):
    """Monte Carlo estimate of the mean gate error for one configuration.

    Averages N independent trajectories; the reduction runs in fixed
    trajectory order with compensated summation, so the result is a pure
    function of the configuration (bit-identical for any worker count).
    """
    start = time.perf_counter()
    errors = trajectory_errors(cfg, context=context, workers=workers)
    good = errors[~np.isnan(errors)]
    count = len(good)
    values = good.tolist()
    total = math.fsum(values)
    mean = total / count
    if count > 1:
        square_sum = math.fsum(v * v for v in values)
        variance = max(square_sum - count * mean * mean, 0.0) / (count - 1)
        std_error = math.sqrt(variance / count)
    else:
        std_error = 0.0
    return ErrorEstimate(
        mean=mean,
        std_error=std_error,
        n_trajectories=count,
        master_seed=cfg.master_seed,
        wall_time=time.perf_counter() - start,
    )


def _sequence_for_pairs(sequence, n):
    """Sequence spec for n pulse pairs; n = 0 is the pulse-free baseline."""
    if n == 0:
        return SequenceSpec(kind="none", axis=sequence.axis, pulse_count=0)
    if sequence.kind == "none":
        raise ValidationError(
            "cannot sweep pulse pairs with sequence kind 'none'", key="sequence.kind"
        )
    return replace(sequence, pulse_count=2 * int(n))


def sweep_n(cfg, n_list, workers=1, crn=False):
    """Estimate the error for each pulse-pair count in ``n_list``.

    Returns a list of (RunConfig, ErrorEstimate) rows.  Seeds are
    decorrelated across n through the stream context unless ``crn``.
    """
    rows = []
    for n in n_list:
        n = int(n)
        if n < 0:
            raise ValidationError(f"pulse pairs must be >= 0, got {n}")
        cfg_n = replace(cfg, sequence=_sequence_for_pairs(cfg.sequence, n))
        context = 0 if crn else n
        rows.append((cfg_n, estimate_gate_error(cfg_n, workers=workers, context=context)))
    return rows


def sweep_cutoff(cfg, gamma_max_list, mode, workers=1, crn=False):
    """Estimate the error for each UV cutoff gamma_max.

    ``mode="fixed_sigma"`` keeps each qubit's sigma constant;
    ``mode="fixed_amplitude"`` rescales sigma^2 by
    ln(gamma_max/gamma_min) / ln(gamma_max_ref/gamma_min) so the 1/f
    spectral amplitude A stays at its reference value.
    """
    if mode not in ("fixed_sigma", "fixed_amplitude"):
        raise ValidationError(f"unknown cutoff sweep mode {mode!r}", key="sweep.mode")
    values = [float(g) for g in gamma_max_list]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationError(
            "gamma_max_list must be strictly ascending", key="sweep.gamma_max_list"
        )
    for spec in (cfg.noise1, cfg.noise2):
        if spec.variant != "one_over_f":
            raise ValidationError(
                "cutoff sweeps require one_over_f noise", key="noise.variant"
            )

    def rescaled(spec, gamma_max):
        if mode == "fixed_sigma":
            return replace(spec, gamma_max=gamma_max)
        ref = math.log(spec.gamma_max / spec.gamma_min)
        new = math.log(gamma_max / spec.gamma_min)
        if ref <= 0.0 or new <= 0.0:
            raise ValidationError(
                "fixed_amplitude rescaling needs gamma_max > gamma_min",
                key="sweep.gamma_max_list",
            )
        return replace(spec, gamma_max=gamma_max, sigma=spec.sigma * math.sqrt(new / ref))

    rows = []
    for j, gamma_max in enumerate(values):
        cfg_j = replace(
            cfg,
            noise1=rescaled(cfg.noise1, gamma_max),
            noise2=rescaled(cfg.noise2, gamma_max),
        )
        context = 0 if crn else j
        rows.append((cfg_j, estimate_gate_error(cfg_j, workers=workers, context=context)))
    return rows


def sweep_parameter(cfg, parameter, values, workers=1, crn=False):
    """Estimate the error for each value of sigma, omega_c or omega.

    A sigma sweep sets both qubits' sigma to the swept value; gate
    parameter sweeps rebuild the gate (the gate time follows omega_c).
    """
    if parameter not in ("sigma", "omega_c", "omega"):
        raise ValidationError(
            f"unknown sweep parameter {parameter!r}", key="sweep.parameter"
        )
    rows = []
    for j, value in enumerate(values):
        value = float(value)
        if value <= 0.0:
            raise ValidationError(
                f"sweep values must be positive, got {value!r}", key="sweep.values"
            )
        if parameter == "sigma":
            cfg_j = replace(
                cfg,
                noise1=replace(cfg.noise1, sigma=value),
                noise2=replace(cfg.noise2, sigma=value),
            )
        else:
            cfg_j = replace(cfg, gate=replace(cfg.gate, **{parameter: value}))
        context = 0 if crn else j
        rows.append((cfg_j, estimate_gate_error(cfg_j, workers=workers, context=context)))
    return rows
