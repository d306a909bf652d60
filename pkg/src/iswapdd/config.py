"""Experiment configuration: defaults, JSON loading, validation.

A configuration is a plain JSON document with sections ``gate``, ``noise``,
``sequence``, ``run``, ``output`` and optional ``sweep``, ``spectrum`` and
``fit`` sections for the corresponding subcommands.  Validation rejects
unknown keys and out-of-domain values with the dotted key path of the
offending entry.  Frequencies and noise amplitudes are angular (rad/s) by
default; ``unit: "GHz"`` converts those boundary values via 2*pi*1e9 into
rad/s at load time (switching rates gamma are ordinary 1/s rates and are
never converted).
"""

import copy
import json
import os

from .errors import ConfigError, ValidationError
from .model import GateParams
from .noise import NoiseSpec
from .sequences import AXES, KINDS, SequenceSpec

ENV_OUTPUT_DIR = "ISWAPDD_OUTPUT_DIR"

_TWO_PI_GHZ = 2.0 * 3.141592653589793 * 1e9

# Keys converted from GHz to rad/s when unit == "GHz".
_FREQUENCY_KEYS = (
    ("gate", "omega"),
    ("gate", "omega_c"),
    ("noise", "sigma1"),
    ("noise", "sigma2"),
    ("noise", "rtn_amplitude"),
)

DEFAULTS = {
    "unit": "rad/s",
    "gate": {"omega": 1e11, "omega_c": 5e9},
    "noise": {
        "variant": "one_over_f",
        "sigma1": 1e9,
        "sigma2": 1e9,
        "gamma_min": 1.0,
        "gamma_max": 1e6,
        "fluctuators_per_decade": 20,
        "rtn_rate": 1.0,
        "rtn_amplitude": 0.0,
    },
    "sequence": {"kind": "pdd", "axis": "z", "pairs": 1, "pairs_list": None},
    "run": {"trajectories": 10_000, "seed": 7_040_412, "workers": 1, "crn": False},
    "output": {"directory": None, "formats": ["csv", "json", "svg"]},
    "sweep": {
        "gamma_max_list": None,
        "mode": "fixed_sigma",
        "parameter": "omega_c",
        "values": None,
    },
    "spectrum": {
        "paths": 200,
        "duration": 2e-3,
        "omega_min": 1e4,
        "omega_max": 1e6,
        "points": 25,
    },
    "fit": {"input": None, "n_min": 1},
}

_VALID_FORMATS = ("csv", "json", "svg")
_VALID_UNITS = ("rad/s", "GHz")


def _type_name(value):
    return type(value).__name__


def _require(condition, key, message):
    if not condition:
        raise ValidationError(message, key=key)


def _check_number(value, key, positive=False, nonnegative=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {_type_name(value)}", key=key)
    if integer and not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {_type_name(value)}", key=key)
    if positive:
        _require(value > 0, key, f"must be positive, got {value!r}")
    if nonnegative:
        _require(value >= 0, key, f"must be >= 0, got {value!r}")
    return value


def _merge(base, override, path=""):
    """Deep-merge ``override`` into a copy of ``base``; unknown keys fail."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        dotted = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown configuration key {dotted!r}", key=dotted)
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(
                    f"expected an object for {dotted!r}, got {_type_name(value)}",
                    key=dotted,
                )
            merged[key] = _merge(base[key], value, dotted)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_config(path=None, overrides=()):
    """Load, merge and validate a configuration.

    Parameters
    ----------
    path : str or None
        JSON config file; None uses the built-in defaults.
    overrides : iterable of str
        Dotted-path assignments like ``run.trajectories=500``.  Values are
        parsed as JSON where possible, else taken as strings.

    Returns
    -------
    dict
        Fully resolved configuration in rad/s units.
    """
    document = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                document = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise ConfigError("config root must be a JSON object")
    resolved = _merge(DEFAULTS, document)
    for item in overrides:
        resolved = _apply_override(resolved, item)
    return validate_config(resolved)


def _apply_override(config, item):
    if "=" not in item:
        raise ConfigError(f"override must look like key.path=value, got {item!r}")
    dotted, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    keys = dotted.split(".")
    node = {keys[-1]: value}
    for key in reversed(keys[:-1]):
        node = {key: node}
    return _merge(config, node)


def validate_config(config):
    """Validate a fully merged configuration document; returns it in rad/s."""
    config = copy.deepcopy(config)
    unit = config["unit"]
    if unit not in _VALID_UNITS:
        raise ValidationError(f"unit must be one of {_VALID_UNITS}", key="unit")
    if unit == "GHz":
        for section, key in _FREQUENCY_KEYS:
            _check_number(config[section][key], f"{section}.{key}")
            config[section][key] = config[section][key] * _TWO_PI_GHZ
        config["unit"] = "rad/s"

    _check_number(config["gate"]["omega"], "gate.omega", positive=True)
    _check_number(config["gate"]["omega_c"], "gate.omega_c", positive=True)

    noise = config["noise"]
    _require(
        noise["variant"] in ("one_over_f", "single_rtn", "static_gaussian", "none"),
        "noise.variant",
        f"unknown noise variant {noise['variant']!r}",
    )
    _check_number(noise["sigma1"], "noise.sigma1", nonnegative=True)
    _check_number(noise["sigma2"], "noise.sigma2", nonnegative=True)
    _check_number(noise["gamma_min"], "noise.gamma_min", positive=True)
    _check_number(noise["gamma_max"], "noise.gamma_max", positive=True)
    _require(
        noise["gamma_min"] <= noise["gamma_max"],
        "noise.gamma_max",
        "gamma_max must be >= gamma_min",
    )
    _check_number(
        noise["fluctuators_per_decade"],
        "noise.fluctuators_per_decade",
        positive=True,
        integer=True,
    )
    _check_number(noise["rtn_rate"], "noise.rtn_rate", nonnegative=True)
    _check_number(noise["rtn_amplitude"], "noise.rtn_amplitude", nonnegative=True)

    seq = config["sequence"]
    _require(seq["kind"] in KINDS, "sequence.kind", f"kind must be one of {KINDS}")
    _require(seq["axis"] in AXES, "sequence.axis", f"axis must be one of {AXES}")
    _check_number(seq["pairs"], "sequence.pairs", nonnegative=True, integer=True)
    if seq["pairs_list"] is not None:
        if not isinstance(seq["pairs_list"], list) or not seq["pairs_list"]:
            raise ConfigError(
                "pairs_list must be a non-empty list of integers",
                key="sequence.pairs_list",
            )
        for i, n in enumerate(seq["pairs_list"]):
            _check_number(
                n, f"sequence.pairs_list[{i}]", nonnegative=True, integer=True
            )

    run = config["run"]
    _check_number(run["trajectories"], "run.trajectories", positive=True, integer=True)
    _check_number(run["seed"], "run.seed", nonnegative=True, integer=True)
    _check_number(run["workers"], "run.workers", positive=True, integer=True)
    if not isinstance(run["crn"], bool):
        raise ConfigError("run.crn must be true or false", key="run.crn")

    output = config["output"]
    if output["directory"] is not None and not isinstance(output["directory"], str):
        raise ConfigError("output.directory must be a string", key="output.directory")
    if not isinstance(output["formats"], list):
        raise ConfigError("output.formats must be a list", key="output.formats")
    for fmt in output["formats"]:
        _require(
            fmt in _VALID_FORMATS,
            "output.formats",
            f"formats entries must be among {_VALID_FORMATS}, got {fmt!r}",
        )

    sweep = config["sweep"]
    if sweep["gamma_max_list"] is not None:
        if not isinstance(sweep["gamma_max_list"], list) or not sweep["gamma_max_list"]:
            raise ConfigError(
                "gamma_max_list must be a non-empty list", key="sweep.gamma_max_list"
            )
        for i, g in enumerate(sweep["gamma_max_list"]):
            _check_number(g, f"sweep.gamma_max_list[{i}]", positive=True)
    _require(
        sweep["mode"] in ("fixed_sigma", "fixed_amplitude"),
        "sweep.mode",
        "mode must be fixed_sigma or fixed_amplitude",
    )
    _require(
        sweep["parameter"] in ("sigma", "omega_c", "omega"),
        "sweep.parameter",
        "parameter must be sigma, omega_c or omega",
    )
    if sweep["values"] is not None:
        if not isinstance(sweep["values"], list) or not sweep["values"]:
            raise ConfigError("values must be a non-empty list", key="sweep.values")
        for i, v in enumerate(sweep["values"]):
            _check_number(v, f"sweep.values[{i}]", positive=True)

    spectrum = config["spectrum"]
    _check_number(spectrum["paths"], "spectrum.paths", positive=True, integer=True)
    _check_number(spectrum["duration"], "spectrum.duration", positive=True)
    _check_number(spectrum["omega_min"], "spectrum.omega_min", positive=True)
    _check_number(spectrum["omega_max"], "spectrum.omega_max", positive=True)
    _require(
        spectrum["omega_min"] < spectrum["omega_max"],
        "spectrum.omega_max",
        "omega_max must exceed omega_min",
    )
    _check_number(spectrum["points"], "spectrum.points", positive=True, integer=True)
    _require(spectrum["points"] >= 2, "spectrum.points", "need at least 2 points")

    fit = config["fit"]
    if fit["input"] is not None and not isinstance(fit["input"], str):
        raise ConfigError("fit.input must be a path string", key="fit.input")
    _check_number(fit["n_min"], "fit.n_min", nonnegative=True)

    return config


def noise_specs(config):
    """Per-qubit NoiseSpec pair from the noise section."""
    noise = config["noise"]
    common = dict(
        variant=noise["variant"],
        gamma_min=noise["gamma_min"],
        gamma_max=noise["gamma_max"],
        fluctuators_per_decade=noise["fluctuators_per_decade"],
        rtn_rate=noise["rtn_rate"],
        rtn_amplitude=noise["rtn_amplitude"],
    )
    return (
        NoiseSpec(sigma=noise["sigma1"], **common),
        NoiseSpec(sigma=noise["sigma2"], **common),
    )


def gate_params(config):
    return GateParams(omega=config["gate"]["omega"], omega_c=config["gate"]["omega_c"])


def sequence_spec(config, pairs=None):
    """SequenceSpec from the sequence section (optionally forcing pairs)."""
    seq = config["sequence"]
    if pairs is None:
        pairs = seq["pairs"]
    if pairs == 0:
        return SequenceSpec(kind="none", axis=seq["axis"], pulse_count=0)
    return SequenceSpec(kind=seq["kind"], axis=seq["axis"], pulse_count=2 * pairs)


def pairs_list(config):
    """Pulse-pair counts for error-vs-n; defaults to 0..50."""
    listed = config["sequence"]["pairs_list"]
    if listed is None:
        return list(range(0, 51))
    return [int(n) for n in listed]


def output_directory(config):
    """Output directory: config value, else environment, else cwd."""
    configured = config["output"]["directory"]
    if configured:
        return configured
    return os.environ.get(ENV_OUTPUT_DIR, ".")
