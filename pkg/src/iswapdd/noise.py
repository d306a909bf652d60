"""Stochastic processes driving the transverse noise.

Three process variants are supported, all returned as piecewise-constant
paths in rad/s:

* ``one_over_f`` -- a superposition of random telegraph fluctuators whose
  switching rates follow a 1/gamma density on [gamma_min, gamma_max],
  producing a 1/omega spectrum between the cutoffs;
* ``single_rtn`` -- one symmetric random telegraph process switching
  between -v/2 and +v/2 at Poisson rate gamma0;
* ``static_gaussian`` -- a single constant value drawn from a zero-mean
  normal distribution (the quasi-static limit);
* ``none`` -- identically zero.

Samplers take an explicit ``numpy.random.Generator``; there is no hidden
global RNG state, and identical (spec, duration, seed) triples produce
bit-identical paths.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientEnsemble, InvalidSpec

VARIANTS = ("one_over_f", "single_rtn", "static_gaussian", "none")

# Below this ratio of gamma_max/gamma_min the 1/f spectral amplitude
# A = pi Sigma^2 / ln(gamma_max/gamma_min) diverges and is rejected.
_MIN_BANDWIDTH_RATIO = 1.0 + 1e-9


@dataclass(frozen=True)
class NoiseSpec:
    """Description of one qubit's noise process.

    Attributes
    ----------
    variant : str
        One of ``one_over_f``, ``single_rtn``, ``static_gaussian``, ``none``.
    sigma : float
        Standard deviation Sigma of x in rad/s (``one_over_f`` and
        ``static_gaussian``).  The total variance of the synthesized
        1/f path at any instant equals sigma**2.
    gamma_min, gamma_max : float
        Switching-rate bandwidth [gamma_m, gamma_M] in 1/s (``one_over_f``).
        Equal cutoffs are allowed and give a stack of equal-rate
        fluctuators (the static limit when rate * duration << 1).
    fluctuators_per_decade : int
        Number of fluctuators per decade of bandwidth (``one_over_f``).
    rtn_rate : float
        Poisson switching rate gamma0 in 1/s (``single_rtn``).
    rtn_amplitude : float
        Peak-to-peak amplitude v in rad/s: values are +-v/2 (``single_rtn``).
    """

    variant: str
    sigma: float = 0.0
    gamma_min: float = 1.0
    gamma_max: float = 1e6
    fluctuators_per_decade: int = 20
    rtn_rate: float = 0.0
    rtn_amplitude: float = 0.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidSpec(f"unknown noise variant {self.variant!r}")
        if self.sigma < 0.0:
            raise InvalidSpec(f"sigma must be >= 0, got {self.sigma!r}")
        if self.variant == "one_over_f":
            if not (0.0 < self.gamma_min <= self.gamma_max):
                raise InvalidSpec(
                    "one_over_f requires 0 < gamma_min <= gamma_max, got "
                    f"[{self.gamma_min!r}, {self.gamma_max!r}]"
                )
            if self.fluctuators_per_decade < 1:
                raise InvalidSpec(
                    f"fluctuators_per_decade must be >= 1, got "
                    f"{self.fluctuators_per_decade!r}"
                )
        if self.variant == "single_rtn":
            if self.rtn_rate < 0.0:
                raise InvalidSpec(f"rtn_rate must be >= 0, got {self.rtn_rate!r}")
            if self.rtn_amplitude < 0.0:
                raise InvalidSpec(
                    f"rtn_amplitude must be >= 0, got {self.rtn_amplitude!r}"
                )


@dataclass(frozen=True, eq=False)
class PiecewiseConstantPath:
    """One sampled realization x(t), constant between breakpoints.

    Attributes
    ----------
    times : (k,) ndarray
        Strictly ascending segment start times; ``times[0] == 0``.
    values : (k,) ndarray
        Value of x on [times[i], times[i+1]) (the last segment extends to
        ``duration``), in rad/s.
    duration : float
        Total covered time in seconds.
    """

    times: np.ndarray
    values: np.ndarray
    duration: float

    def __post_init__(self):
        if len(self.times) != len(self.values) or len(self.times) == 0:
            raise InvalidSpec("path needs one value per breakpoint")
        if self.times[0] != 0.0:
            raise InvalidSpec("first segment must start at t = 0")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0.0):
            raise InvalidSpec("breakpoints must be strictly ascending")
        if not np.all(np.isfinite(self.values)):
            raise InvalidSpec("path values must be finite")

    @property
    def switch_times(self):
        """Times of value changes, excluding the t = 0 start."""
        return self.times[1:]

    def value_at(self, t):
        """Value active at time ``t``; a switch takes effect at its own time."""
        idx = np.searchsorted(self.times, t, side="right") - 1
        return self.values[idx]


def constant_path(value, duration):
    """Build a single-segment path holding ``value`` over ``duration``."""
    return PiecewiseConstantPath(
        times=np.zeros(1), values=np.asarray([float(value)]), duration=duration
    )


def fluctuator_count(spec):
    """Number of telegraph fluctuators synthesizing the 1/f process.

    ``ceil(fluctuators_per_decade * log10(gamma_max/gamma_min))``; a
    degenerate bandwidth (equal cutoffs) keeps one decade's worth so the
    static limit is still a sum of fluctuators with total variance sigma**2.
    """
    if spec.gamma_max == spec.gamma_min:
        return int(spec.fluctuators_per_decade)
    decades = math.log10(spec.gamma_max / spec.gamma_min)
    return max(1, math.ceil(spec.fluctuators_per_decade * decades))


def _merge_flips(duration, start_value, flip_times, flip_deltas):
    """Merge per-fluctuator flip events into one piecewise-constant path.

    ``flip_times``/``flip_deltas`` are flat arrays; deltas are the value
    increments caused by each flip.  Events are ordered by time (stable in
    the given order on exact ties) and accumulated with a cumulative sum.
    """
    if len(flip_times) == 0:
        return np.zeros(1), np.asarray([start_value])
    order = np.argsort(flip_times, kind="stable")
    times = np.concatenate(([0.0], flip_times[order]))
    values = start_value + np.concatenate(([0.0], np.cumsum(flip_deltas[order])))
    keep = np.concatenate(([True], np.diff(times) > 0.0))
    if not keep.all():
        # Coinciding events (measure zero, but possible with quantized
        # uniforms): keep the final value reached at that instant.
        idx = np.flatnonzero(keep)
        last = np.concatenate((idx[1:] - 1, [len(times) - 1]))
        times = times[idx]
        values = values[last]
    return times, values


def sample_one_over_f(spec, duration, stream):
    """Sample one 1/f realization as a superposition of telegraph processes.

    Each of the ``fluctuator_count(spec)`` fluctuators draws a switching
    rate log-uniformly in [gamma_min, gamma_max] (the 1/gamma density), a
    stationary equiprobable initial sign, and Poisson flip times at its
    rate; amplitudes are +-v_f/2 with v_f = 2 sigma / sqrt(N_f) so the
    summed variance is sigma**2.

    Draw order from ``stream`` (fixed, part of the determinism contract):
    rates, initial signs, flip counts, then flip times fluctuator by
    fluctuator.
    """
    if spec.variant != "one_over_f":
        raise InvalidSpec(f"expected one_over_f spec, got {spec.variant!r}")
    if spec.gamma_min > spec.gamma_max:
        raise InvalidSpec("gamma_min must not exceed gamma_max")
    if spec.sigma == 0.0:
        return constant_path(0.0, duration)
    n_f = fluctuator_count(spec)
    v_half = spec.sigma / math.sqrt(n_f)  # v_f / 2
    rates = np.exp(
        stream.uniform(math.log(spec.gamma_min), math.log(spec.gamma_max), n_f)
    )
    signs = stream.integers(0, 2, n_f) * 2 - 1
    counts = stream.poisson(rates * duration)
    total = int(counts.sum())
    flip_times = np.empty(total)
    flip_deltas = np.empty(total)
    pos = 0
    for f in range(n_f):
        k = int(counts[f])
        if k == 0:
            continue
        t = np.sort(stream.uniform(0.0, duration, k))
        flip_times[pos : pos + k] = t
        # The f-th fluctuator alternates sign starting from signs[f]; its
        # r-th flip changes the sum by -2 * (sign before flip) * v_f/2.
        deltas = np.empty(k)
        deltas[0::2] = -2.0 * signs[f] * v_half
        deltas[1::2] = 2.0 * signs[f] * v_half
        flip_deltas[pos : pos + k] = deltas
        pos += k
    start_value = float(np.sum(signs) * v_half)
    times, values = _merge_flips(duration, start_value, flip_times, flip_deltas)
    return PiecewiseConstantPath(times=times, values=values, duration=duration)


def sample_single_rtn(spec, duration, stream):
    """Sample one symmetric random telegraph path: values +-v/2, Poisson
    sign flips at rate gamma0, equiprobable initial sign."""
    if spec.variant != "single_rtn":
        raise InvalidSpec(f"expected single_rtn spec, got {spec.variant!r}")
    sign = int(stream.integers(0, 2)) * 2 - 1
    start_value = sign * 0.5 * spec.rtn_amplitude
    k = int(stream.poisson(spec.rtn_rate * duration))
    if k == 0:
        return constant_path(start_value, duration)
    flip_times = np.sort(stream.uniform(0.0, duration, k))
    deltas = np.empty(k)
    deltas[0::2] = -2.0 * start_value
    deltas[1::2] = 2.0 * start_value
    times, values = _merge_flips(duration, start_value, flip_times, deltas)
    return PiecewiseConstantPath(times=times, values=values, duration=duration)


def sample_static_gaussian(spec, duration, stream):
    """Sample one quasi-static path: a single N(0, sigma^2) value."""
    if spec.variant != "static_gaussian":
        raise InvalidSpec(f"expected static_gaussian spec, got {spec.variant!r}")
    return constant_path(stream.normal(0.0, spec.sigma), duration)


def sample_path(spec, duration, stream):
    """Sample one realization of the process described by ``spec``."""
    if spec.variant == "one_over_f":
        return sample_one_over_f(spec, duration, stream)
    if spec.variant == "single_rtn":
        return sample_single_rtn(spec, duration, stream)
    if spec.variant == "static_gaussian":
        return sample_static_gaussian(spec, duration, stream)
    if spec.variant == "none":
        return constant_path(0.0, duration)
    raise InvalidSpec(f"unknown noise variant {spec.variant!r}")


def spectrum_amplitude(sigma, gamma_min, gamma_max):
    """1/f spectral amplitude A = pi sigma^2 / ln(gamma_max/gamma_min).

    Raises
    ------
    DomainError
        If the bandwidth is degenerate (ratio below 1 + 1e-9) or the
        cutoffs are not positive and ordered.
    """
    if gamma_min <= 0.0 or gamma_max <= 0.0:
        raise DomainError("bandwidth cutoffs must be positive")
    ratio = gamma_max / gamma_min
    if ratio < _MIN_BANDWIDTH_RATIO:
        raise DomainError(
            f"gamma_max/gamma_min = {ratio!r} too close to 1: spectral "
            "amplitude diverges"
        )
    return math.pi * sigma * sigma / math.log(ratio)


def estimate_psd(paths, omega_grid):
    """Averaged periodogram of an ensemble of piecewise-constant paths.

    The estimate is two-sided in angular frequency,
    ``S(omega) = < |integral_0^T x(t) e^{i omega t} dt|^2 > / T``,
    matching the convention S(omega) = integral <x(t)x(0)> e^{i omega t} dt
    for stationary processes.  The segment integrals are evaluated in
    closed form, so there is no time-discretization error.

    Parameters
    ----------
    paths : sequence of PiecewiseConstantPath
        At least 100 realizations of equal duration.
    omega_grid : array_like
        Angular frequencies (rad/s) at which to evaluate the estimate.

    Returns
    -------
    (len(omega_grid),) ndarray
        Spectral density estimate in (rad/s)^2 / (rad/s) units.
    """
    paths = list(paths)
    if len(paths) < 100:
        raise InsufficientEnsemble(
            f"PSD estimation needs >= 100 paths, got {len(paths)}"
        )
    duration = paths[0].duration
    if any(p.duration != duration for p in paths):
        raise InvalidSpec("all paths must share one duration")
    omega = np.asarray(omega_grid, dtype=float)
    nonzero = omega != 0.0
    acc = np.zeros(omega.shape)
    for p in paths:
        edges = np.concatenate((p.times, [duration]))
        transform = np.zeros(omega.shape, dtype=complex)
        if nonzero.any():
            w = omega[nonzero]
            phases = np.exp(1j * np.outer(w, edges))
            transform[nonzero] = (
                (phases[:, 1:] - phases[:, :-1]) @ p.values
            ) / (1j * w)
        if (~nonzero).any():
            transform[~nonzero] = np.dot(p.values, np.diff(edges))
        acc += np.abs(transform) ** 2
    return acc / (len(paths) * duration)


def fourth_cumulant(values):
    """Fourth cumulant estimate m4 - 3 m2^2 of zero-mean static samples.

    For a static symmetric telegraph value +-v/2 this equals -v^4/8; for
    Gaussian samples it vanishes.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 10_000:
        raise InsufficientEnsemble(
            f"fourth cumulant needs >= 10^4 samples, got {values.size}"
        )
    m2 = float(np.mean(values**2))
    m4 = float(np.mean(values**4))
    return m4 - 3.0 * m2 * m2
