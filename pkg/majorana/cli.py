# majorana/cli.py

import argparse
import sys
from dataclasses import dataclass
from math import isfinite
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from majorana import __version__
from majorana.hub.perturbation import MAX_STEPS, coefficient_table
from majorana.hub.rates import RateBreakdown, escape_rate, escape_rate_thermal, rates_along
from majorana.hub.spin_algebra import SpinQuantum
from majorana.hub.trap_model import (
    SWEEPABLE_PARAMETERS,
    TrapConfig,
    derive_params,
    final_wavenumber,
    surface_params,
    with_parameter,
)
from majorana.utilities.constants import MAX_TWO_F, constants_table
from majorana.utilities.errors import (
    EXIT_COMPUTATION,
    EXIT_OK,
    ConfigurationError,
    DomainError,
    MajoranaError,
    exit_status,
)
from majorana.utilities.output import CSV, FORMATS, Report, render
from majorana.utilities.settings import Settings, load_settings
from majorana.utilities.verification import run_verification

COMMANDS: Sequence[str] = ("derive", "rate", "sweep", "table", "verify")

BIAS_FIELD: str = "bias_field_gauss"
RADIAL_GRADIENT: str = "radial_gradient_gauss_per_cm"
AXIAL_CURVATURE: str = "axial_curvature_gauss_per_cm2"
G_FACTOR: str = "g_factor"
MASS_AMU: str = "mass_amu"
TWO_F: str = "two_f"
TWO_FZ: str = "two_fz"

REAL_KEYS: Sequence[str] = (BIAS_FIELD, RADIAL_GRADIENT, AXIAL_CURVATURE, G_FACTOR, MASS_AMU)
INTEGER_KEYS: Sequence[str] = (TWO_F, TWO_FZ)
OPTIONAL_KEYS: Dict[str, float] = {AXIAL_CURVATURE: 0.0}

SWEEP_HEADER: List[str] = [
    "param_name",
    "param_value",
    "omega0_rad_s",
    "omega_prec_rad_s",
    "chi0",
    "p",
    "angular_factor",
    "c_p",
    "c_semiclassical",
    "exponent",
    "rate_per_s",
]
TABLE_HEADER: List[str] = ["p", "p2", "n_num", "n_den", "c_p_num", "c_p_den"]
RATE_HEADER: List[str] = [
    "p",
    "prefactor_rad_s",
    "chi_power",
    "angular_factor",
    "c_p",
    "c_p_squared",
    "c_semiclassical",
    "exponent",
    "density_weight",
    "rate_per_s",
    "log_rate",
]
DERIVE_HEADER: List[str] = [
    "omega0_rad_s",
    "b0_m",
    "chi0",
    "E0_J",
    "omega_prec_rad_s",
    "two_fz",
    "omega_i_rad_s",
    "b_i_m",
    "E_i_J",
    "k_f_per_m",
]
VERIFY_HEADER: List[str] = ["name", "kind", "tolerance", "deviation", "status", "detail"]


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.parameter not in SWEEPABLE_PARAMETERS:
            raise ConfigurationError(
                "param", f"must be one of {', '.join(SWEEPABLE_PARAMETERS)}"
            )
        if self.steps < 2:
            raise ConfigurationError("steps", "must be at least 2")
        if not self.start < self.stop:
            raise ConfigurationError("from", "must be below --to")
        if not self.start > 0:
            raise ConfigurationError("from", f"{self.parameter} must stay positive")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunConfig:
    """Everything one command needs."""

    command: str
    trap: Optional[TrapConfig] = None
    sweep_spec: Optional[SweepSpec] = None
    output_path: Optional[str] = None
    format: str = CSV
    p_max: Optional[int] = None
    temperature: Optional[float] = None
    fast: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError("command", f"must be one of {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise ConfigurationError("format", f"must be one of {', '.join(FORMATS)}")
        if self.command in ("derive", "rate", "sweep") and self.trap is None:
            raise ConfigurationError("config", f"{self.command} needs a trap file")
        if self.command == "sweep" and self.sweep_spec is None:
            raise ConfigurationError("param", "sweep needs --param, --from, --to and --steps")
        if self.temperature is not None and not self.temperature > 0:
            raise ConfigurationError("temperature", "must be positive")
        if self.p_max is not None and not 1 <= self.p_max <= MAX_STEPS:
            raise ConfigurationError("pmax", f"must lie in 1..{MAX_STEPS}")


def _parse_lines(text: str) -> Dict[str, str]:
    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {number}", "expected `key = value`")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in REAL_KEYS and key not in INTEGER_KEYS:
            raise ConfigurationError(key, "unknown key")
        if key in entries:
            raise ConfigurationError(key, "given more than once")
        entries[key] = value
    return entries


def _real(entries: Dict[str, str], key: str) -> float:
    if key not in entries:
        if key in OPTIONAL_KEYS:
            return OPTIONAL_KEYS[key]
        raise ConfigurationError(key, "missing")
    try:
        value = float(entries[key])
    except ValueError:
        raise ConfigurationError(key, f"not a number: {entries[key]!r}") from None
    if not isfinite(value):
        raise ConfigurationError(key, "must be finite")
    return value


def _integer(entries: Dict[str, str], key: str) -> int:
    if key not in entries:
        raise ConfigurationError(key, "missing")
    try:
        return int(entries[key])
    except ValueError:
        raise ConfigurationError(key, f"not an integer: {entries[key]!r}") from None


def parse_trap(text: str) -> TrapConfig:
    """
    Validate a flat `key = value` trap description.

    Args:
        text: file contents

    Returns:
        TrapConfig: validated configuration
    """
    entries = _parse_lines(text)
    bias_field = _real(entries, BIAS_FIELD)
    gradient = _real(entries, RADIAL_GRADIENT)
    curvature = _real(entries, AXIAL_CURVATURE)
    g_factor = _real(entries, G_FACTOR)
    mass = _real(entries, MASS_AMU)
    two_f = _integer(entries, TWO_F)
    two_fz = _integer(entries, TWO_FZ)

    if bias_field <= 0:
        raise ConfigurationError(BIAS_FIELD, "must be > 0 (singular adiabatic frame)")
    for key, value in ((RADIAL_GRADIENT, gradient), (G_FACTOR, g_factor), (MASS_AMU, mass)):
        if value <= 0:
            raise ConfigurationError(key, "must be > 0")
    if curvature < 0:
        raise ConfigurationError(AXIAL_CURVATURE, "must be >= 0")
    if two_f < 1 or two_f > MAX_TWO_F:
        raise ConfigurationError(TWO_F, f"must lie in 1..{MAX_TWO_F}")
    if two_fz <= 0:
        raise ConfigurationError(TWO_FZ, "must be > 0 (only trapped states)")
    if two_fz > two_f:
        raise ConfigurationError(TWO_FZ, "must not exceed two_f")
    if (two_f - two_fz) % 2:
        raise ConfigurationError(TWO_FZ, "must have the same parity as two_f")

    try:
        return TrapConfig(
            bias_field=bias_field,
            radial_gradient=gradient,
            g_factor=g_factor,
            mass_amu=mass,
            spin=SpinQuantum(two_f, two_fz),
            axial_curvature=curvature,
        )
    except DomainError as error:
        raise ConfigurationError("config", str(error)) from error


def load_config(
    path: Optional[str],
    command: str = "rate",
    sweep_spec: Optional[SweepSpec] = None,
    output_path: Optional[str] = None,
    output_format: str = CSV,
    p_max: Optional[int] = None,
    temperature: Optional[float] = None,
    fast: bool = False,
) -> RunConfig:
    """
    Read a trap file and bundle it with the command options.

    Args:
        path: trap file, may be None for table and verify
        command: one of derive, rate, sweep, table, verify
        sweep_spec: swept parameter and grid
        output_path: destination file, stdout when None
        output_format: csv or json
        p_max: largest p for table
        temperature: thermal momentum distribution for rate, in K
        fast: skip slow oracles in verify

    Returns:
        RunConfig: validated configuration
    """
    trap = None
    if path is not None:
        try:
            with open(path, encoding="utf-8") as trap_file:
                text = trap_file.read()
        except UnicodeDecodeError:
            raise ConfigurationError("config", f"{path} is not UTF-8 text") from None
        trap = parse_trap(text)
        logger.debug(f"loaded trap from {path}: {trap}")
    return RunConfig(
        command=command,
        trap=trap,
        sweep_spec=sweep_spec,
        output_path=output_path,
        format=output_format,
        p_max=p_max,
        temperature=temperature,
        fast=fast,
    )


def _metadata(config: RunConfig, warning: bool = False, notes: Sequence[str] = ()) -> Dict:
    metadata: Dict = {
        "version": __version__,
        "command": config.command,
        "constants": constants_table(),
        "chi0_warning": warning,
    }
    if config.trap is not None:
        metadata["axial_curvature_gauss_per_cm2"] = config.trap.axial_curvature
    if notes:
        metadata["notes"] = list(dict.fromkeys(notes))
    return metadata


def _rate_row(breakdown: RateBreakdown) -> List:
    return [
        breakdown.p,
        breakdown.prefactor,
        breakdown.chi_power,
        breakdown.angular,
        breakdown.c_p,
        breakdown.c_p_squared,
        breakdown.c_exponent_factor,
        breakdown.exponent,
        breakdown.density_weight,
        breakdown.rate,
        breakdown.log_rate,
    ]


def _derive(config: RunConfig) -> Report:
    trap = config.trap
    derived = derive_params(trap)
    surface = surface_params(derived, trap.spin.two_fz)
    row = [
        derived.omega0,
        derived.b0,
        derived.chi0,
        derived.E0,
        derived.omega_prec,
        surface.two_fz,
        surface.omega_i,
        surface.b_i,
        surface.E_i,
        final_wavenumber(derived, surface),
    ]
    return Report(
        command="derive",
        columns=DERIVE_HEADER,
        rows=[row],
        metadata=_metadata(config, derived.adiabaticity_warning),
    )


def _rate(config: RunConfig) -> Report:
    if config.temperature is not None:
        breakdown = escape_rate_thermal(config.trap, config.temperature)
    else:
        breakdown = escape_rate(config.trap)
    return Report(
        command="rate",
        columns=RATE_HEADER,
        rows=[_rate_row(breakdown)],
        metadata=_metadata(config, breakdown.adiabaticity_warning, breakdown.notes),
    )


def _sweep(config: RunConfig) -> Report:
    spec = config.sweep_spec
    values = [float(value) for value in spec.values()]
    try:
        traps = [with_parameter(config.trap, spec.parameter, value) for value in values]
    except DomainError as error:
        raise ConfigurationError(spec.parameter, str(error)) from error

    rows, notes, warning = [], [], False
    for value, trap, breakdown in zip(values, traps, rates_along(traps)):
        derived = derive_params(trap)
        warning = warning or breakdown.adiabaticity_warning
        notes.extend(breakdown.notes)
        rows.append(
            [
                spec.parameter,
                value,
                derived.omega0,
                derived.omega_prec,
                derived.chi0,
                breakdown.p,
                breakdown.angular,
                breakdown.c_p,
                breakdown.c_exponent_factor,
                breakdown.exponent,
                breakdown.rate,
            ]
        )
    logger.info(f"sweep over {spec.parameter}: {len(rows)} points")
    return Report(
        command="sweep", columns=SWEEP_HEADER, rows=rows, metadata=_metadata(config, warning, notes)
    )


def _table(config: RunConfig, settings: Settings) -> Report:
    p_max = settings.table_pmax if config.p_max is None else config.p_max
    rows = [
        [row.p, row.p2, row.n.numerator, row.n.denominator, row.c_p.numerator, row.c_p.denominator]
        for row in coefficient_table(p_max)
    ]
    return Report(command="table", columns=TABLE_HEADER, rows=rows, metadata=_metadata(config))


def _verify(config: RunConfig, settings: Settings) -> Report:
    report = run_verification(settings, fast=config.fast)
    rows = [
        [check.name, check.kind, check.tolerance, check.deviation, check.status, check.detail]
        for check in report.checks
    ]
    metadata = _metadata(config)
    metadata["passed"] = report.passed
    metadata["fast"] = config.fast
    return Report(command="verify", columns=VERIFY_HEADER, rows=rows, metadata=metadata)


def run(config: RunConfig, settings: Optional[Settings] = None) -> Report:
    """
    Execute one command.

    Args:
        config: validated run configuration
        settings: tool settings, read from config.yml when omitted

    Returns:
        Report: rows and metadata ready for write_output
    """
    settings = settings or load_settings()
    logger.info(f"running {config.command}")
    if config.command == "derive":
        return _derive(config)
    if config.command == "rate":
        return _rate(config)
    if config.command == "sweep":
        return _sweep(config)
    if config.command == "table":
        return _table(config, settings)
    return _verify(config, settings)


def write_output(report: Report, path: Optional[str], output_format: str) -> None:
    """
    Write a report to a file, or to stdout when no path is given.

    Args:
        report: command result
        path: destination file
        output_format: csv or json
    """
    text = render(report, output_format)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as destination:
        destination.write(text)
    logger.info(f"wrote {len(report.rows)} rows to {path}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=None, help="output file, stdout if omitted")
    common.add_argument("--format", type=str, choices=FORMATS, default=CSV, help="output format")
    common.add_argument("--log-level", type=str, default=None, help="loguru level")
    common.add_argument("--settings", type=str, default=None, help="tool settings file")

    parser = argparse.ArgumentParser(
        prog="majorana", description="Majorana spin-flip escape rates of trapped atoms"
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("derive", "rate"):
        command = commands.add_parser(name, parents=[common])
        command.add_argument("--config", type=str, required=True, help="trap file")
        if name == "rate":
            command.add_argument(
                "--temperature", type=float, default=None, help="thermal momentum distribution, K"
            )

    sweep = commands.add_parser("sweep", parents=[common])
    sweep.add_argument("--config", type=str, required=True, help="trap file")
    sweep.add_argument("--param", type=str, required=True, choices=SWEEPABLE_PARAMETERS)
    sweep.add_argument("--from", dest="start", type=float, required=True)
    sweep.add_argument("--to", dest="stop", type=float, required=True)
    sweep.add_argument("--steps", type=int, required=True)

    table = commands.add_parser("table", parents=[common])
    table.add_argument("--pmax", type=int, default=None, help="largest p")

    verify = commands.add_parser("verify", parents=[common])
    verify.add_argument("--fast", action="store_true", help="skip the second-order sums")
    return parser


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Command line entry point.

    Returns:
        int: process exit status
    """
    args = build_parser().parse_args(argv)
    settings = load_settings(args.settings)
    configure_logging(args.log_level or settings.log_level)

    try:
        sweep_spec = None
        if args.command == "sweep":
            sweep_spec = SweepSpec(args.param, args.start, args.stop, args.steps)
        config = load_config(
            getattr(args, "config", None),
            command=args.command,
            sweep_spec=sweep_spec,
            output_path=args.out,
            output_format=args.format,
            p_max=getattr(args, "pmax", None),
            temperature=getattr(args, "temperature", None),
            fast=getattr(args, "fast", False),
        )
        report = run(config, settings)
        write_output(report, config.output_path, config.format)
    except (MajoranaError, OSError) as error:
        logger.error(f"{args.command} failed: {error}")
        return exit_status(error)

    if report.metadata.get("passed") is False:
        logger.error("verification failed")
        return EXIT_COMPUTATION
    return EXIT_OK
