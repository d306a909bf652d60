"""Closed-form quasi-static predictions and power-law fitting.

The quadratic-response formula for periodic z-pulse decoupling, its
Gaussian ensemble average, the anti-Zeno threshold n0, the asymptotic
scaling templates used for qualitative comparison, effective per-period
Hamiltonians from a third-order average-Hamiltonian (Magnus) expansion,
and a weighted log-log power-law fitter for simulated data.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron
from .errors import InsufficientData, NonPositiveError, UnsupportedCombination
from .model import gate_target, static_hamiltonian

# Text-level asymptotic exponents of the scaling templates (empirical fits
# on simulated data decide the measured values; see fit_power_law).
TEMPLATE_ALPHA = {
    ("pdd", "z"): 2.0,
    ("cp", "z"): 4.0,
    ("udd", "z"): 5.0,
    ("pdd", "y"): 4.0,
    ("cp", "y"): 4.0,
    ("udd", "y"): 4.0,
}
# Cross-term coefficient of the quartic template for Uhrig z-pulses.
TEMPLATE_Q = -0.7


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit error ~ C * n^(-alpha) in log-log space.

    Attributes
    ----------
    alpha : float
        Fitted exponent (negated log-log slope).
    alpha_stderr : float
        Standard error of alpha from the weighted-least-squares covariance.
    log_prefactor : float
        Fitted log(C).
    n_range : tuple
        (min, max) of the n values used.
    residual : float
        Root-mean-square residual in log space.
    covariance : tuple
        2x2 covariance of (alpha, log_prefactor), row-major.
    """

    alpha: float
    alpha_stderr: float
    log_prefactor: float
    n_range: tuple
    residual: float
    covariance: tuple


@dataclass(frozen=True)
class TemplateValue:
    """Shape-only template evaluation.

    ``prefactor_known`` is always False: the asymptotic scaling forms carry
    no absolute normalization, so only ratios and exponents of these values
    are meaningful.
    """

    value: float
    alpha: float
    q: float | None
    prefactor_known: bool = False


def _bracket(p, simplified):
    """Trigonometric bracket of the quadratic-response formulas.

    The full form is 1 - cos(R t_e)/sqrt(2) - (omega_c/(2 sqrt(2) R)) sin(R t_e)
    with R = sqrt(omega^2 + omega_c^2/4); the simplified form drops the sine
    term and evaluates the cosine in the omega_c << omega limit.
    """
    if simplified:
        return 1.0 - math.cos(0.5 * math.pi * p.omega / p.omega_c) / math.sqrt(2.0)
    r = math.hypot(p.omega, 0.5 * p.omega_c)
    t_e = gate_target(p).t_e
    return (
        1.0
        - math.cos(r * t_e) / math.sqrt(2.0)
        - p.omega_c / (2.0 * math.sqrt(2.0) * r) * math.sin(r * t_e)
    )


def pdd_error_realization(p, x1, x2, n, simplified=False):
    """Quadratic-response gate error for one static noise realization
    under n pairs of periodic z pulses.

    Evaluates (dt^2/8)(x1^2 + x2^2) * bracket with dt = t_e/(2n).  Valid in
    the perturbative regime; the leading correction for moderate n is a
    resonance factor ~ [tan(omega dt/2)/(omega dt/2)]^2 which this
    second-order form does not include (about +62% at n = 10 and +11% at
    n = 20 for omega/omega_c = 20).
    """
    dt = gate_target(p).t_e / (2.0 * n)
    return dt * dt / 8.0 * (x1 * x1 + x2 * x2) * _bracket(p, simplified)


def pdd_error_mean(p, sigma1, sigma2, n, simplified=False):
    """Gaussian-averaged quadratic-response error under periodic z pulses.

    The Gaussian average replaces x_i^2 by sigma_i^2 in
    :func:`pdd_error_realization`; with dt = t_e/(2n) this is
    (pi^2/2^7) ((sigma1^2 + sigma2^2)/omega_c^2) n^-2 * bracket.
    """
    dt = gate_target(p).t_e / (2.0 * n)
    return (
        dt * dt / 8.0 * (sigma1 * sigma1 + sigma2 * sigma2) * _bracket(p, simplified)
    )


def threshold_n0(p):
    """Anti-Zeno threshold n0 = (pi / (8 sqrt(3))) * omega/omega_c.

    Below this number of pulse pairs, sparse z pulses amplify rather than
    suppress the error.
    """
    return math.pi / (8.0 * math.sqrt(3.0)) * p.omega / p.omega_c


def scaling_template(kind, axis, p, sigma1, sigma2, n):
    """Shape-only asymptotic template for the mean error of a sequence.

    Returns the functional dependence on (sigma, omega, omega_c, n) with
    the text-level exponent, marked as carrying an unknown prefactor.
    Quantitative statements should use fitted exponents and sigma ratios,
    never absolute template values.

    Raises
    ------
    UnsupportedCombination
        If no template exists for (kind, axis).
    """
    try:
        alpha = TEMPLATE_ALPHA[(kind, axis)]
    except KeyError:
        raise UnsupportedCombination(
            f"no scaling template for kind={kind!r}, axis={axis!r}"
        ) from None
    wc = p.omega_c
    if axis == "y":
        value = (
            (sigma1**2 + sigma2**2) / wc**2 * (p.omega / wc) ** 2 * n ** (-alpha)
        )
        return TemplateValue(value=value, alpha=alpha, q=None)
    if kind == "pdd":
        value = (sigma1**2 + sigma2**2) / wc**2 * n ** (-alpha) * _bracket(p, False)
        return TemplateValue(value=value, alpha=alpha, q=None)
    if kind == "cp":
        value = (
            (sigma1**2 + sigma2**2)
            / wc**2
            * (p.omega / wc) ** 2
            * n ** (-alpha)
            * _bracket(p, False)
        )
        return TemplateValue(value=value, alpha=alpha, q=None)
    # udd, z axis: quartic in the amplitudes with a negative cross term.
    q = TEMPLATE_Q
    value = (
        (sigma1**4 + sigma2**4 + q * sigma1**2 * sigma2**2)
        / wc**4
        * (p.omega / wc) ** 2.6
        * n ** (-alpha)
    )
    return TemplateValue(value=value, alpha=alpha, q=q)


def fit_power_law(points, n_min=1):
    """Weighted least-squares power-law fit of mean error versus n.

    Parameters
    ----------
    points : iterable of (n, mean_error, std_error)
        Simulated estimates.  Points with n < n_min are discarded.
    n_min : float
        Lower edge of the fit window.

    Returns
    -------
    ScalingFit

    Raises
    ------
    InsufficientData
        Fewer than 4 points remain after the n_min cut.
    NonPositiveError
        A mean error is not positive (log-log fit undefined).
    """
    kept = [(float(n), float(m), float(s)) for n, m, s in points if n >= n_min]
    if len(kept) < 4:
        raise InsufficientData(
            f"power-law fit needs >= 4 points with n >= {n_min}, got {len(kept)}"
        )
    ns = np.array([k[0] for k in kept])
    means = np.array([k[1] for k in kept])
    stderrs = np.array([k[2] for k in kept])
    if np.any(means <= 0.0):
        raise NonPositiveError("mean errors must be positive for a log-log fit")
    # The standard error of log(mean) is the relative standard error of the
    # mean; zero-noise inputs get unit weights.
    rel = np.where(means > 0.0, stderrs / means, 0.0)
    if np.all(rel == 0.0):
        sig = np.ones_like(rel)
    else:
        sig = np.where(rel > 0.0, rel, rel[rel > 0.0].min())
    x = np.log(ns)
    y = np.log(means)
    design = np.column_stack((-x, np.ones_like(x)))  # columns: alpha, log C
    weighted = design / sig[:, np.newaxis]
    normal = weighted.T @ weighted
    rhs = weighted.T @ (y / sig)
    solution = np.linalg.solve(normal, rhs)
    covariance = np.linalg.inv(normal)
    residuals = y - design @ solution
    return ScalingFit(
        alpha=float(solution[0]),
        alpha_stderr=float(math.sqrt(covariance[0, 0])),
        log_prefactor=float(solution[1]),
        n_range=(float(ns.min()), float(ns.max())),
        residual=float(np.sqrt(np.mean(residuals**2))),
        covariance=tuple(map(tuple, covariance)),
    )


def fit_report(fit):
    """JSON-ready dict form of a :class:`ScalingFit`."""
    return {
        "alpha": fit.alpha,
        "stderr_alpha": fit.alpha_stderr,
        "prefactor": math.exp(fit.log_prefactor),
        "n_range": list(fit.n_range),
        "residual": fit.residual,
    }


def magnus_effective_hamiltonian(axis, p, x1, x2, dt):
    """Third-order effective per-period Hamiltonian of the pulsed evolution.

    For z pulses the period is (S e^{-iH dt} S e^{-iH dt}) with
    H = H0 + dH(x1, x2); averaging the toggled evolution to third order in
    dt gives H0 plus a first-order tilt of each noise term onto sigma_y and
    a second-order shift onto sigma_z:

        H_eff = H0 + (omega dt/4)(x1 Y1 + x2 Y2)
                   + (omega dt^2/12)(x1^2 Z1 + x2^2 Z2).

    For y pulses the toggled static part averages to
    Ht = (omega_c/2) XX and the splitting terms re-enter at higher order
    together with a noise cross term:

        H_eff = Ht + (omega omega_c dt/4)(Y X + X Y)
                   - (omega^2 omega_c dt^2/6)(X X - Y Y)
                   + (omega omega_c dt^2/12)(x1 Z X + x2 X Z).

    These diagnostics reproduce the quasi-static propagator error within a
    few tens of percent in the perturbative regime (small x dt, n above the
    anti-Zeno threshold).
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    om, wc = p.omega, p.omega_c
    if axis == "z":
        y1 = kron(SIGMA_Y, IDENTITY_2)
        y2 = kron(IDENTITY_2, SIGMA_Y)
        z1 = kron(SIGMA_Z, IDENTITY_2)
        z2 = kron(IDENTITY_2, SIGMA_Z)
        return (
            static_hamiltonian(p)
            + om * dt / 4.0 * (x1 * y1 + x2 * y2)
            + om * dt * dt / 12.0 * (x1 * x1 * z1 + x2 * x2 * z2)
        )
    if axis == "y":
        xx = kron(SIGMA_X, SIGMA_X)
        yy = kron(SIGMA_Y, SIGMA_Y)
        yx = kron(SIGMA_Y, SIGMA_X)
        xy = kron(SIGMA_X, SIGMA_Y)
        zx = kron(SIGMA_Z, SIGMA_X)
        xz = kron(SIGMA_X, SIGMA_Z)
        return (
            0.5 * wc * xx
            + om * wc * dt / 4.0 * (yx + xy)
            - om * om * wc * dt * dt / 6.0 * (xx - yy)
            + om * wc * dt * dt / 12.0 * (x1 * zx + x2 * xz)
        )
    raise UnsupportedCombination(f"no effective Hamiltonian for axis {axis!r}")
