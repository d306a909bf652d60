"""Command-line interface: sweeps, analytic values, spectrum checks, fits.

Every report subcommand prints the delimited result table to stdout and
writes three artifacts to the output directory: ``<name>.csv`` (the
contract), ``<name>.json`` (resolved config + rows, enough to reproduce the
run byte-for-byte), and ``<name>.svg`` (log-log plot with error bars).
Validation problems exit with code 2 and a one-line JSON error record on
stderr naming the offending dotted config key.
"""

import argparse
import json
import os
import sys

import numpy as np

from .analytics import (
    fit_power_law,
    fit_report,
    pdd_error_mean,
    scaling_template,
    threshold_n0,
)
from .config import (
    ENV_OUTPUT_DIR,
    gate_params,
    load_config,
    noise_specs,
    output_directory,
    pairs_list,
    sequence_spec,
)
from .ensemble import RunConfig, substream, sweep_cutoff, sweep_n, sweep_parameter
from .errors import ConfigError, IoError, IswapddError, ValidationError
from .noise import estimate_psd, sample_path, spectrum_amplitude
from .report import (
    emit_csv,
    emit_fit_svg,
    emit_manifest,
    emit_simple_csv,
    emit_spectrum_svg,
    emit_svg_plot,
    read_csv,
    render_text,
    result_rows,
)

_DEFAULT_GAMMA_MAX_LIST = [1e2, 1e4, 1e6, 1e8, 1e10]
_DEFAULT_SIGMA_VALUES = [2.5e8, 5e8, 1e9, 2e9, 4e9]
_DEFAULT_COUPLING_VALUES = {
    "omega_c": [2.5e9, 5e9, 1e10],
    "omega": [1e11, 2e11, 4e11],
}

_SPECTRUM_HEADER = ("omega", "psd", "model_psd")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="iswapdd",
        description="Monte Carlo error analysis of a sqrt(iSWAP) gate "
        "under transverse 1/f noise with dynamical decoupling.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (defaults built in)")
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        dest="overrides",
        help="dotted-path config override, e.g. run.trajectories=500",
    )
    common.add_argument("--seed", type=int, help="master RNG seed")
    common.add_argument("--trajectories", type=int, help="Monte Carlo ensemble size")
    common.add_argument("--workers", type=int, help="parallel worker processes")
    common.add_argument(
        "--output",
        help=f"output directory (default: ${ENV_OUTPUT_DIR} or current directory)",
    )
    common.add_argument(
        "--crn",
        action="store_true",
        help="common random numbers: reuse identical noise paths across sweep points",
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "error-vs-n",
        parents=[common],
        help="mean gate error versus pulse-pair count n",
    )
    sub.add_parser(
        "cutoff-sweep",
        parents=[common],
        help="mean gate error versus UV cutoff gamma_max at fixed n",
    )
    sub.add_parser(
        "sigma-sweep",
        parents=[common],
        help="mean gate error versus noise amplitude sigma at fixed n",
    )
    sub.add_parser(
        "coupling-sweep",
        parents=[common],
        help="mean gate error versus omega_c or omega at fixed n",
    )
    sub.add_parser(
        "spectrum-check",
        parents=[common],
        help="estimate the synthesized noise PSD against the A/omega model",
    )
    sub.add_parser(
        "analytic",
        parents=[common],
        help="closed-form quasi-static error predictions for the configured n",
    )
    fit = sub.add_parser(
        "fit",
        parents=[common],
        help="weighted power-law fit of an error-vs-n CSV",
    )
    fit.add_argument("--input", help="CSV produced by error-vs-n")
    return parser


def _resolve_config(args):
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"run.seed={args.seed}")
    if args.trajectories is not None:
        overrides.append(f"run.trajectories={args.trajectories}")
    if args.workers is not None:
        overrides.append(f"run.workers={args.workers}")
    if args.output is not None:
        overrides.append(f"output.directory={args.output}")
    if args.crn:
        overrides.append("run.crn=true")
    return load_config(args.config, overrides)


def _base_run_config(config):
    noise1, noise2 = noise_specs(config)
    return RunConfig(
        gate=gate_params(config),
        noise1=noise1,
        noise2=noise2,
        sequence=sequence_spec(config),
        trajectories=config["run"]["trajectories"],
        master_seed=config["run"]["seed"],
    )


def _prepare_output(config):
    directory = output_directory(config)
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {directory!r}: {exc}") from exc
    return directory


def _write_table(config, name, rows, x_key, xlabel, extra=None):
    directory = _prepare_output(config)
    formats = config["output"]["formats"]
    written = []
    try:
        if "csv" in formats:
            path = os.path.join(directory, f"{name}.csv")
            emit_csv(path, rows)
            written.append(path)
        if "json" in formats:
            path = os.path.join(directory, f"{name}.json")
            emit_manifest(path, config, rows, extra=extra)
            written.append(path)
        if "svg" in formats:
            plottable = sum(1 for r in rows if r[x_key] > 0 and r["mean_error"] > 0)
            if plottable >= 2:
                path = os.path.join(directory, f"{name}.svg")
                emit_svg_plot(path, rows, x_key=x_key, xlabel=xlabel)
                written.append(path)
    except OSError as exc:
        raise IoError(f"cannot write artifact: {exc}") from exc
    print(render_text(rows))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_error_vs_n(config):
    cfg = _base_run_config(config)
    results = sweep_n(
        cfg,
        pairs_list(config),
        workers=config["run"]["workers"],
        crn=config["run"]["crn"],
    )
    return _write_table(
        config, "error_vs_n", result_rows(results), "n", "pulse pairs n"
    )


def _cmd_cutoff_sweep(config):
    cfg = _base_run_config(config)
    gamma_list = config["sweep"]["gamma_max_list"] or _DEFAULT_GAMMA_MAX_LIST
    results = sweep_cutoff(
        cfg,
        gamma_list,
        mode=config["sweep"]["mode"],
        workers=config["run"]["workers"],
        crn=config["run"]["crn"],
    )
    return _write_table(
        config,
        "cutoff_sweep",
        result_rows(results),
        "gamma_max",
        "UV cutoff gamma_max (1/s)",
    )


def _cmd_sigma_sweep(config):
    cfg = _base_run_config(config)
    values = config["sweep"]["values"] or _DEFAULT_SIGMA_VALUES
    results = sweep_parameter(
        cfg,
        "sigma",
        values,
        workers=config["run"]["workers"],
        crn=config["run"]["crn"],
    )
    return _write_table(
        config,
        "sigma_sweep",
        result_rows(results),
        "sigma1",
        "noise amplitude sigma (rad/s)",
    )


def _cmd_coupling_sweep(config):
    parameter = config["sweep"]["parameter"]
    if parameter not in ("omega_c", "omega"):
        raise ValidationError(
            "coupling sweeps vary omega_c or omega", key="sweep.parameter"
        )
    cfg = _base_run_config(config)
    values = config["sweep"]["values"] or _DEFAULT_COUPLING_VALUES[parameter]
    results = sweep_parameter(
        cfg,
        parameter,
        values,
        workers=config["run"]["workers"],
        crn=config["run"]["crn"],
    )
    return _write_table(
        config, "coupling_sweep", result_rows(results), parameter, f"{parameter} (rad/s)"
    )


def _cmd_spectrum_check(config):
    noise1, _ = noise_specs(config)
    if noise1.variant != "one_over_f":
        raise ValidationError(
            "spectrum checks require one_over_f noise", key="noise.variant"
        )
    if noise1.gamma_max <= noise1.gamma_min:
        raise ValidationError(
            "spectrum checks need gamma_max > gamma_min", key="noise.gamma_max"
        )
    section = config["spectrum"]
    seed = config["run"]["seed"]
    paths = [
        sample_path(noise1, section["duration"], substream(seed, 0, j, 0))
        for j in range(section["paths"])
    ]
    omega = np.geomspace(section["omega_min"], section["omega_max"], section["points"])
    psd = estimate_psd(paths, omega)
    amplitude = spectrum_amplitude(
        noise1.sigma, noise1.gamma_min, noise1.gamma_max
    )
    model = amplitude / omega
    keep = psd > 0
    slope = float(np.polyfit(np.log(omega[keep]), np.log(psd[keep]), 1)[0])

    rows = list(zip(omega.tolist(), psd.tolist(), model.tolist()))
    directory = _prepare_output(config)
    formats = config["output"]["formats"]
    written = []
    extra = {"slope": slope, "amplitude": amplitude}
    try:
        if "csv" in formats:
            path = os.path.join(directory, "spectrum_check.csv")
            emit_simple_csv(path, _SPECTRUM_HEADER, rows)
            written.append(path)
        if "json" in formats:
            path = os.path.join(directory, "spectrum_check.json")
            emit_manifest(
                path,
                config,
                [dict(zip(_SPECTRUM_HEADER, row)) for row in rows],
                extra=extra,
            )
            written.append(path)
        if "svg" in formats:
            path = os.path.join(directory, "spectrum_check.svg")
            emit_spectrum_svg(path, omega, psd, model)
            written.append(path)
    except OSError as exc:
        raise IoError(f"cannot write artifact: {exc}") from exc
    print(render_text([dict(zip(_SPECTRUM_HEADER, row)) for row in rows], _SPECTRUM_HEADER))
    print(f"log-log slope {slope:.3f} (1/f model: -1)", file=sys.stderr)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_analytic(config):
    params = gate_params(config)
    noise = config["noise"]
    seq = config["sequence"]
    n = seq["pairs"]
    if n < 1:
        raise ValidationError(
            "analytic predictions need at least one pulse pair", key="sequence.pairs"
        )
    document = {
        "n": n,
        "omega": params.omega,
        "omega_c": params.omega_c,
        "sigma1": noise["sigma1"],
        "sigma2": noise["sigma2"],
        "quadratic_mean_error": pdd_error_mean(
            params, noise["sigma1"], noise["sigma2"], n
        ),
        "threshold_n0": threshold_n0(params),
    }
    if seq["kind"] != "none":
        template = scaling_template(
            seq["kind"], seq["axis"], params, noise["sigma1"], noise["sigma2"], n
        )
        document["template"] = {
            "kind": seq["kind"],
            "axis": seq["axis"],
            "alpha": template.alpha,
            "q": template.q,
            "value": template.value,
        }
    directory = _prepare_output(config)
    if "json" in config["output"]["formats"]:
        path = os.path.join(directory, "analytic.json")
        try:
            emit_manifest(path, config, [], extra={"analytic": document})
        except OSError as exc:
            raise IoError(f"cannot write artifact: {exc}") from exc
        print(f"wrote {path}", file=sys.stderr)
    print(json.dumps(document, indent=2, sort_keys=True))
    return 0


def _cmd_fit(config, input_path):
    path = input_path or config["fit"]["input"]
    if not path:
        raise ConfigError(
            "fit needs an input CSV (--input or fit.input)", key="fit.input"
        )
    try:
        rows = read_csv(path)
    except OSError as exc:
        raise IoError(f"cannot read {path!r}: {exc}") from exc
    n_min = config["fit"]["n_min"]
    fit = fit_power_law(
        [(r["n"], r["mean_error"], r["std_error"]) for r in rows], n_min=n_min
    )
    report = fit_report(fit)
    directory = _prepare_output(config)
    formats = config["output"]["formats"]
    try:
        if "json" in formats:
            out = os.path.join(directory, "fit.json")
            emit_manifest(out, config, rows, extra={"fit": report, "input": path})
            print(f"wrote {out}", file=sys.stderr)
        if "svg" in formats:
            out = os.path.join(directory, "fit.svg")
            emit_fit_svg(out, [r for r in rows if r["n"] >= n_min], fit)
            print(f"wrote {out}", file=sys.stderr)
    except OSError as exc:
        raise IoError(f"cannot write artifact: {exc}") from exc
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


_HANDLERS = {
    "error-vs-n": _cmd_error_vs_n,
    "cutoff-sweep": _cmd_cutoff_sweep,
    "sigma-sweep": _cmd_sigma_sweep,
    "coupling-sweep": _cmd_coupling_sweep,
    "spectrum-check": _cmd_spectrum_check,
    "analytic": _cmd_analytic,
}


def _error_record(exc):
    record = {"error": type(exc).__name__, "message": str(exc)}
    key = getattr(exc, "key", None)
    if key is not None:
        record["key"] = key
    return json.dumps(record, sort_keys=True)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        if args.command == "fit":
            return _cmd_fit(config, args.input)
        return _HANDLERS[args.command](config)
    except (ConfigError, ValidationError) as exc:
        print(_error_record(exc), file=sys.stderr)
        return 2
    except IswapddError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
