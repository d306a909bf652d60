"""Deterministic artifact writers: CSV tables, JSON manifests, SVG plots.

All writers are reproducible byte-for-byte for identical inputs: floats are
rendered with ``repr`` (shortest round-trip form), rows are sorted, JSON keys
are sorted, no timestamps are embedded, and the SVG backend runs with a fixed
hash salt and a cleared creation date.
"""

import csv
import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import ValidationError

CSV_HEADER = (
    "n",
    "mean_error",
    "std_error",
    "N",
    "seed",
    "sequence",
    "axis",
    "omega",
    "omega_c",
    "sigma1",
    "sigma2",
    "gamma_min",
    "gamma_max",
)

_SVG_HASH_SALT = "iswapdd"


def result_rows(results):
    """Flatten ``(RunConfig, ErrorEstimate)`` pairs into CSV-ready dicts.

    Parameters
    ----------
    results : list of (RunConfig, ErrorEstimate)

    Returns
    -------
    list of dict
        One dict per run with exactly the CSV_HEADER keys, sorted by the
        pulse-pair count then by the varied physical columns.
    """
    rows = []
    for cfg, estimate in results:
        pulse_count = cfg.sequence.pulse_count
        rows.append(
            {
                "n": pulse_count // 2,
                "mean_error": estimate.mean,
                "std_error": estimate.std_error,
                "N": estimate.n_trajectories,
                "seed": cfg.master_seed,
                "sequence": cfg.sequence.kind,
                "axis": cfg.sequence.axis,
                "omega": cfg.gate.omega,
                "omega_c": cfg.gate.omega_c,
                "sigma1": cfg.noise1.sigma,
                "sigma2": cfg.noise2.sigma,
                "gamma_min": cfg.noise1.gamma_min,
                "gamma_max": cfg.noise1.gamma_max,
            }
        )
    rows.sort(
        key=lambda r: (r["n"], r["omega"], r["omega_c"], r["sigma1"], r["gamma_max"])
    )
    return rows


def _cell(value):
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_text(rows, header=CSV_HEADER):
    """Comma-delimited text form of the table (header + one line per row)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(row[key]) for key in header))
    return "\n".join(lines)


def emit_csv(path, rows):
    """Write rows as an RFC 4180 CSV file with the fixed header.

    Raises
    ------
    ValidationError
        If ``rows`` is empty or a row is missing a header column.
    """
    if not rows:
        raise ValidationError("no rows to write")
    for row in rows:
        missing = [key for key in CSV_HEADER if key not in row]
        if missing:
            raise ValidationError(f"row missing columns {missing}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_cell(row[key]) for key in CSV_HEADER])


def read_csv(path):
    """Read a CSV written by :func:`emit_csv` back into typed dicts."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        field_names = tuple(reader.fieldnames or ())
        if field_names != CSV_HEADER:
            raise ValidationError(f"unexpected CSV header {field_names}")
        rows = []
        for raw in reader:
            rows.append(
                {
                    "n": int(raw["n"]),
                    "mean_error": float(raw["mean_error"]),
                    "std_error": float(raw["std_error"]),
                    "N": int(raw["N"]),
                    "seed": int(raw["seed"]),
                    "sequence": raw["sequence"],
                    "axis": raw["axis"],
                    "omega": float(raw["omega"]),
                    "omega_c": float(raw["omega_c"]),
                    "sigma1": float(raw["sigma1"]),
                    "sigma2": float(raw["sigma2"]),
                    "gamma_min": float(raw["gamma_min"]),
                    "gamma_max": float(raw["gamma_max"]),
                }
            )
    if not rows:
        raise ValidationError("CSV contains no data rows")
    return rows


def emit_manifest(path, config, rows, extra=None):
    """Write a JSON manifest describing a finished run (no timestamps)."""
    document = {"config": config, "rows": rows}
    if extra:
        document.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")


def emit_simple_csv(path, header, rows):
    """Write an ad-hoc table (tuples matching ``header``) as RFC 4180 CSV."""
    if not rows:
        raise ValidationError("no rows to write")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def decade_gridlines(ymin, ymax):
    """Decades 10**k with ``ymin < 10**k <= ymax`` (half-open from below).

    Parameters
    ----------
    ymin, ymax : float
        Positive range bounds.

    Returns
    -------
    list of float
        Ascending decade values.
    """
    if ymin <= 0 or ymax <= 0 or ymax < ymin:
        raise ValidationError("gridline range must be positive and ordered")
    # Integer comparisons in log space avoid ulp artifacts of 10.0**k.
    eps = 1e-9
    k_start = int(np.floor(np.log10(ymin) + eps)) + 1
    k_end = int(np.floor(np.log10(ymax) + eps))
    return [10.0**k for k in range(k_start, k_end + 1)]


def emit_svg_plot(path, rows, x_key="n", title="gate error vs pulse pairs", xlabel="pulse pairs n", ylabel="mean gate error"):
    """Render a deterministic log-log SVG of mean error vs a swept column.

    Points with non-positive abscissa or non-positive mean error cannot be
    placed on log axes and are skipped; at least two plottable points are
    required.  Horizontal guide lines mark each decade within the data range
    and carry stable SVG ids of the form ``decade-1e-06``.
    """
    points = [r for r in rows if r[x_key] > 0 and r["mean_error"] > 0]
    if len(points) < 2:
        raise ValidationError("need at least two positive points to plot")
    x = np.array([r[x_key] for r in points], dtype=float)
    y = np.array([r["mean_error"] for r in points], dtype=float)
    yerr = np.array([r["std_error"] for r in points], dtype=float)

    with plt.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            ax.errorbar(x, y, yerr=yerr, fmt="o-", capsize=3, markersize=4)
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            ax.set_title(title)
            for value in decade_gridlines(y.min(), y.max()):
                line = ax.axhline(value, color="0.8", linewidth=0.6, zorder=0)
                line.set_gid(f"decade-{value:.0e}")
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)


def emit_fit_svg(path, rows, fit, title="power-law fit"):
    """Render data points together with the fitted power law."""
    points = [r for r in rows if r["n"] > 0 and r["mean_error"] > 0]
    if len(points) < 2:
        raise ValidationError("need at least two positive points to plot")
    x = np.array([r["n"] for r in points], dtype=float)
    y = np.array([r["mean_error"] for r in points], dtype=float)
    yerr = np.array([r["std_error"] for r in points], dtype=float)
    grid = np.geomspace(x.min(), x.max(), 64)
    curve = np.exp(fit.log_prefactor) * grid**(-fit.alpha)

    with plt.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            ax.errorbar(x, y, yerr=yerr, fmt="o", capsize=3, markersize=4, label="data")
            label = f"fit: n^-{fit.alpha:.2f}"
            ax.plot(grid, curve, "-", label=label)
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel("pulse pairs n")
            ax.set_ylabel("mean gate error")
            ax.set_title(title)
            ax.legend()
            for value in decade_gridlines(y.min(), y.max()):
                line = ax.axhline(value, color="0.8", linewidth=0.6, zorder=0)
                line.set_gid(f"decade-{value:.0e}")
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)


def emit_spectrum_svg(path, omega, psd, model, title="noise power spectral density"):
    """Render the estimated PSD with the analytic 1/f overlay (log-log)."""
    omega = np.asarray(omega, dtype=float)
    psd = np.asarray(psd, dtype=float)
    model = np.asarray(model, dtype=float)
    keep = (psd > 0) & (omega > 0)
    if keep.sum() < 2:
        raise ValidationError("need at least two positive points to plot")
    with plt.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            ax.loglog(omega[keep], psd[keep], "o", markersize=4, label="estimated")
            ax.loglog(omega, model, "-", label="A/omega")
            ax.set_xlabel("angular frequency omega (rad/s)")
            ax.set_ylabel("S(omega)")
            ax.set_title(title)
            ax.legend()
            for value in decade_gridlines(psd[keep].min(), psd[keep].max()):
                line = ax.axhline(value, color="0.8", linewidth=0.6, zorder=0)
                line.set_gid(f"decade-{value:.0e}")
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
