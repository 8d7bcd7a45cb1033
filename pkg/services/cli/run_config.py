"""
Run configuration: command-line flags over a YAML file over defaults
"""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from shared.config.numerics_config import (
    DEFAULT_ENVELOPE_TOL,
    DEFAULT_LOCAL_BINS,
    DEFAULT_PICARD_ITERS,
    DEFAULT_PICARD_TOL,
    DEFAULT_POLY_DEGREE,
    LATTICE_B_COUNT,
    LATTICE_PAIR_COUNT,
    LATTICE_T_COUNT,
)
from shared.config.presets import get_solver_preset
from shared.errors import UsageError

SUBCOMMANDS = ("envelope", "check", "solve", "experiment", "generators")
OUTPUT_FORMATS = ("json", "csv", "both")
REQUIRED = object()

FLAG = "flag"
FILE = "file"
DEFAULT = "default"
PRESET = "preset"

# key -> (type name, default)
RUN_KEYS = {
    "seed": ("int", REQUIRED),
    "output_dir": ("str", "output"),
    "format": ("str", "both"),
    "timestamp_names": ("bool", False),
    "log_file": ("bool", True),
    "log_level": ("str", "INFO"),
}

SECTION_KEYS = {
    "envelope": {
        "generator": ("str", REQUIRED),
        "kind": ("str", "INF_Z"),
        "n": ("int_list", [1, 2, 4, 8]),
        "d": ("int", 1),
        "T": ("float", 1.0),
        "t": ("float", 0.5),
        "b": ("float_list", None),
        "y": ("float", 0.0),
        "z": ("float_list", None),
        "tol": ("float", DEFAULT_ENVELOPE_TOL),
        "points": ("int", 0),
    },
    "check": {
        "generator": ("str", REQUIRED),
        "d": ("int", 1),
        "T": ("float", 1.0),
        "ids": ("str_list", None),
        "t_count": ("int", LATTICE_T_COUNT),
        "b_count": ("int", LATTICE_B_COUNT),
        "pair_count": ("int", LATTICE_PAIR_COUNT),
    },
    "solve": {
        "generator": ("str", REQUIRED),
        "terminal": ("str", REQUIRED),
        "T": ("float", 1.0),
        "N": ("int", 50),
        "M": ("int", 50_000),
        "d": ("int", 1),
        "preset": ("str", None),
        "basis": ("str", "polynomial"),
        "degree": ("int", DEFAULT_POLY_DEGREE),
        "bins": ("int", DEFAULT_LOCAL_BINS),
        "truncation": ("float", None),
        "truncation_mode": ("str", None),
        "picard_iters": ("int", DEFAULT_PICARD_ITERS),
        "picard_tol": ("float", DEFAULT_PICARD_TOL),
        "mode": ("str", "standard"),
        "mean_path": ("bool", False),
        "dump_paths": ("bool", False),
    },
    # Remaining experiment keys are validated by ExperimentSpec.from_mapping
    "experiment": {
        "theorem": ("str", REQUIRED),
        "generator": ("str", REQUIRED),
        "terminal": ("str", REQUIRED),
        "n_list": ("int_list", None),
        "levels": ("float_list", None),
        "T": ("float", None),
        "N": ("int", None),
        "M": ("int", None),
        "d": ("int", None),
        "preset": ("str", None),
        "tolerance": ("raw", None),
        "basis": ("str", None),
        "degree": ("int", None),
        "envelope_tol": ("float", None),
        "control": ("str", None),
        "reference_value": ("float", None),
        "generator_prime": ("str", None),
        "generator_prime_shift": ("float", None),
        "terminal_prime": ("str", None),
        "terminal_prime_add": ("str", None),
        "truncation_mode": ("str", None),
        "bracket": ("bool", None),
    },
    "generators": {},
}

EXPERIMENT_FILE_ONLY_KEYS = {
    "generator_options", "bins", "picard_iters", "picard_tol",
}

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


@dataclass
class RunConfig:
    """
    Effective configuration of one CLI run

    Attributes:
        subcommand: One of SUBCOMMANDS
        seed: Explicit seed (None only for `generators`)
        params: Subcommand parameters after precedence resolution
        output_dir: Directory for emitted files
        output_format: json, csv or both
        timestamp_names: Append a timestamp to file names
        log_file: Write a log file
        log_level: Logging level name
        config_file: Path of the YAML file, if any
        provenance: Key -> flag / file / default / preset
    """

    subcommand: str
    seed: int = None
    params: dict = field(default_factory=dict)
    output_dir: str = "output"
    output_format: str = "both"
    timestamp_names: bool = False
    log_file: bool = True
    log_level: str = "INFO"
    config_file: str = None
    provenance: dict = field(default_factory=dict)

    def echo(self):
        """Effective configuration with per-key provenance, as embedded in reports"""
        return {
            "subcommand": self.subcommand,
            "seed": self.seed,
            "params": dict(self.params),
            "output_dir": self.output_dir,
            "format": self.output_format,
            "timestamp_names": self.timestamp_names,
            "config_file": self.config_file,
            "provenance": dict(self.provenance),
        }


def coerce(key, kind, value):
    """
    Convert a flag string or YAML value to the declared type

    Raises:
        UsageError: naming the key on a type mismatch
    """
    if value is None:
        return None
    if kind == "raw":
        return value
    try:
        if kind == "str":
            if not isinstance(value, str):
                raise TypeError
            return value
        if kind == "bool":
            if isinstance(value, bool):
                return value
            if isinstance(value, str) and value.lower() in _TRUE | _FALSE:
                return value.lower() in _TRUE
            raise TypeError
        if kind == "int":
            if isinstance(value, bool):
                raise TypeError
            if isinstance(value, str):
                return int(value)
            if isinstance(value, int):
                return value
            raise TypeError
        if kind == "float":
            if isinstance(value, bool):
                raise TypeError
            if isinstance(value, (str, int, float)):
                return float(value)
            raise TypeError
        if kind.endswith("_list"):
            item_kind = kind[: -len("_list")]
            items = value.split(",") if isinstance(value, str) else value
            if not isinstance(items, (list, tuple)):
                raise TypeError
            return [coerce(key, item_kind, item.strip() if isinstance(item, str) else item) for item in items]
    except (TypeError, ValueError):
        raise UsageError(f"'{key}' expects {kind.replace('_', ' of ')}, got {value!r}", key=key)
    raise UsageError(f"'{key}' has an unsupported type {kind}", key=key)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser raising UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message, key="argv")


def _flag(key):
    return "--" + key.replace("_", "-") if key.lower() == key else "--" + key


def build_parser():
    """Build the `bsde-lab` argument parser; absent flags stay out of the namespace"""
    parser = _Parser(prog="bsde-lab", description="BSDE L1 numerical laboratory", allow_abbrev=False)
    subparsers = parser.add_subparsers(dest="subcommand")

    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(name, help=f"{name} subcommand", allow_abbrev=False)
        if name == "generators":
            continue
        sub.add_argument("--config", default=argparse.SUPPRESS, help="YAML configuration file")
        sub.add_argument("--seed", default=argparse.SUPPRESS, help="Seed (required)")
        sub.add_argument("--output-dir", dest="output_dir", default=argparse.SUPPRESS, help="Output directory")
        sub.add_argument("--format", default=argparse.SUPPRESS, help="json, csv or both")
        sub.add_argument("--timestamp-names", dest="timestamp_names", action="store_const", const="true",
                         default=argparse.SUPPRESS, help="Append a timestamp to output file names")
        sub.add_argument("--no-log-file", dest="log_file", action="store_const", const="false",
                         default=argparse.SUPPRESS, help="Do not write a log file")
        sub.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS, help="Logging level")
        for key, (kind, _) in SECTION_KEYS[name].items():
            if kind == "bool":
                sub.add_argument(_flag(key), dest=key, action="store_const", const="true", default=argparse.SUPPRESS)
            else:
                sub.add_argument(_flag(key), dest=key, default=argparse.SUPPRESS)
    return parser


def load_config_file(path):
    """
    Read a YAML configuration file

    Returns:
        Mapping section -> mapping

    Raises:
        UsageError: unreadable file, bad YAML or unknown section
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e}", key="config")
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise UsageError(f"bad YAML in {path}: {e}", key="config")
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a mapping of sections", key="config")
    unknown = [section for section in data if section != "run" and section not in SECTION_KEYS]
    if unknown:
        raise UsageError(f"unknown config section '{unknown[0]}'", key=str(unknown[0]))
    for section, values in data.items():
        if values is not None and not isinstance(values, dict):
            raise UsageError(f"config section '{section}' must be a mapping", key=str(section))
    return {section: dict(values or {}) for section, values in data.items()}


def _resolve(schema, flags, file_values, provenance, check_unknown=True, section=None):
    """flags > file > defaults for one schema; returns the merged mapping"""
    if check_unknown:
        unknown = sorted(set(file_values) - set(schema))
        if unknown:
            where = f" in section '{section}'" if section else ""
            raise UsageError(f"unknown key '{unknown[0]}'{where}", key=unknown[0])
    merged = {}
    for key, (kind, default) in schema.items():
        if key in flags:
            merged[key] = coerce(key, kind, flags[key])
            provenance[key] = FLAG
        elif key in file_values:
            merged[key] = coerce(key, kind, file_values[key])
            provenance[key] = FILE
        elif default is REQUIRED:
            raise UsageError(f"missing required field '{key}'", key=key)
        else:
            merged[key] = default
            provenance[key] = DEFAULT
    return merged


def parse_config(argv=None, config_file=None):
    """
    Parse argv (and an optional YAML file) into a RunConfig

    Args:
        argv: Argument list without the program name
        config_file: YAML path; a --config flag overrides it

    Returns:
        RunConfig with provenance of every key

    Raises:
        UsageError: unknown key, type mismatch or missing required field,
            naming the offending key
    """
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop("subcommand", None)
    if subcommand is None:
        raise UsageError(f"a subcommand is required: {list(SUBCOMMANDS)}", key="subcommand")
    if subcommand == "generators":
        return RunConfig(subcommand=subcommand)

    config_file = args.pop("config", config_file)
    file_data = load_config_file(config_file) if config_file else {}
    provenance = {}

    run_schema = dict(RUN_KEYS)
    run = _resolve(run_schema, args, file_data.get("run", {}), provenance, section="run")
    if run["format"] not in OUTPUT_FORMATS:
        raise UsageError(f"format must be one of {list(OUTPUT_FORMATS)}, got {run['format']!r}", key="format")

    section_schema = SECTION_KEYS[subcommand]
    section_file = dict(file_data.get(subcommand, {}))
    if "seed" in section_file:
        raise UsageError(f"'seed' belongs in the run section, not in '{subcommand}'", key="seed")

    extra = {}
    if subcommand == "experiment":
        for key in EXPERIMENT_FILE_ONLY_KEYS & set(section_file):
            extra[key] = section_file.pop(key)
            provenance[key] = FILE
    section_flags = {key: value for key, value in args.items() if key in section_schema}
    params = _resolve(section_schema, section_flags, section_file, provenance, section=subcommand)

    if subcommand == "solve" and params["preset"] is not None:
        try:
            preset = get_solver_preset(params["preset"])
        except ValueError as e:
            raise UsageError(str(e), key="preset")
        for key in ("N", "M", "degree"):
            if provenance[key] == DEFAULT:
                params[key] = preset[key]
                provenance[key] = PRESET

    if subcommand == "experiment":
        params = {key: value for key, value in params.items() if value is not None}
        params.update(extra)

    return RunConfig(
        subcommand=subcommand,
        seed=run["seed"],
        params=params,
        output_dir=run["output_dir"],
        output_format=run["format"],
        timestamp_names=run["timestamp_names"],
        log_file=run["log_file"],
        log_level=run["log_level"],
        config_file=str(config_file) if config_file else None,
        provenance=provenance,
    )
