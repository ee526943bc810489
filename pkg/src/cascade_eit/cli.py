"""Command-line front end: config files, CSV export, subcommands.

Configs are plain text, one `key = value` pair per line with `#` comments
and comma-separated lists. Unknown keys are rejected with the offending line
number. Outputs are CSV with 12 significant digits and LF line endings, so
identical configs produce byte-identical files.

Subcommands: scan (single spectrum), dressed (eigenvalue table), sweep (one
spectrum per coupling strength plus a summary table), validate (invariant
self-checks). Exit codes: 0 success, 1 usage/parse/validation error, 2
numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .model import DriveParams, LevelScheme
from .solver import SingularSystemError
from .spectrum import (
    Spectrum,
    broaden,
    dressed_state_frequencies,
    scan_probe,
    sweep_coupling,
)
from . import validation

__all__ = [
    "CSV_HEADER",
    "SUMMARY_HEADER",
    "ParseError",
    "SimulationConfig",
    "ValidationError",
    "emit_csv",
    "main",
    "parse_config",
    "run",
]

CSV_HEADER = "delta_p_mhz,absorption_im_rho21,dispersion_re_rho21"
SUMMARY_HEADER = (
    "omega_c_mhz,n_peaks,n_dips,max_separation_mhz,deepest_dip_depth,dip_width_mhz"
)


class ParseError(ValueError):
    """The config text is malformed (bad syntax, unknown key, bad literal)."""


class ValidationError(ValueError):
    """The config parsed but violates an invariant."""


@dataclass(frozen=True)
class SimulationConfig:
    """Fully resolved simulation parameters, defaults applied.

    Field names match the config keys. omega_p_mhz, dp_min_mhz, and
    dp_max_mhz default relative to gamma_upper_mhz (0.01 gamma and
    -/+ 40 gamma); everything else has fixed defaults (see DEFAULTS).
    """

    gamma_upper_mhz: float
    gamma_21_mhz: float
    delta1_mhz: float
    delta2_mhz: float
    a32: float
    a42: float
    a52: float
    omega_p_mhz: float
    omega_c_mhz: float
    delta_c_mhz: float
    dp_min_mhz: float
    dp_max_mhz: float
    n_points: int
    broadening_fwhm_mhz: float | None
    omega_c_sweep: tuple[float, ...] | None
    out: str | None

    def scheme(self) -> LevelScheme:
        return LevelScheme(
            delta1=self.delta1_mhz,
            delta2=self.delta2_mhz,
            gamma_upper=self.gamma_upper_mhz,
            gamma_21=self.gamma_21_mhz,
            strengths=(self.a32, self.a42, self.a52),
        )

    def drives(self) -> DriveParams:
        return DriveParams(
            omega_p=self.omega_p_mhz,
            omega_c=self.omega_c_mhz,
            delta_p=0.0,
            delta_c=self.delta_c_mhz,
        )


DEFAULTS = {
    "gamma_upper_mhz": 0.97,
    "gamma_21_mhz": 6.07,
    "delta1_mhz": 9.0,
    "delta2_mhz": 7.6,
    "a32": 1.0,
    "a42": 1.46,
    "a52": 0.6,
    "omega_c_mhz": 0.0,
    "delta_c_mhz": 0.0,
    "n_points": 2001,
    "broadening_fwhm_mhz": None,
    "omega_c_sweep": None,
    "out": None,
}


def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    return int(text)


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(item.strip()) for item in text.split(","))


def _parse_str(text: str) -> str:
    return text


_KEY_PARSERS = {
    "gamma_upper_mhz": _parse_float,
    "gamma_21_mhz": _parse_float,
    "delta1_mhz": _parse_float,
    "delta2_mhz": _parse_float,
    "a32": _parse_float,
    "a42": _parse_float,
    "a52": _parse_float,
    "omega_p_mhz": _parse_float,
    "omega_c_mhz": _parse_float,
    "delta_c_mhz": _parse_float,
    "dp_min_mhz": _parse_float,
    "dp_max_mhz": _parse_float,
    "n_points": _parse_int,
    "broadening_fwhm_mhz": _parse_float,
    "omega_c_sweep": _parse_float_list,
    "out": _parse_str,
}


def _require(condition: bool, invariant: str) -> None:
    if not condition:
        raise ValidationError(invariant)


def _finite(name: str, value: float) -> None:
    _require(math.isfinite(value), f"{name} must be finite")


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate config text, applying documented defaults.

    Raises ParseError (with the line number) for malformed lines, unknown or
    duplicate keys, and unparseable values; ValidationError (naming the
    violated invariant) for well-formed configs with invalid parameters.
    """
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key not in _KEY_PARSERS:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ParseError(f"line {lineno}: empty value for key {key!r}")
        try:
            values[key] = _KEY_PARSERS[key](value)
        except ValueError:
            raise ParseError(
                f"line {lineno}: cannot parse value {value!r} for key {key!r}"
            ) from None

    merged = {**DEFAULTS, **values}
    gamma = merged["gamma_upper_mhz"]
    _finite("gamma_upper_mhz", gamma)
    _require(gamma >= 0, "gamma_upper_mhz must be nonnegative")
    merged.setdefault("omega_p_mhz", 0.01 * gamma)
    merged.setdefault("dp_min_mhz", -40.0 * gamma)
    merged.setdefault("dp_max_mhz", 40.0 * gamma)

    for name in (
        "gamma_21_mhz",
        "delta1_mhz",
        "delta2_mhz",
        "a32",
        "a42",
        "a52",
        "omega_p_mhz",
        "omega_c_mhz",
        "delta_c_mhz",
        "dp_min_mhz",
        "dp_max_mhz",
    ):
        _finite(name, merged[name])
    _require(merged["delta1_mhz"] > 0, "delta1_mhz must be positive")
    _require(merged["delta2_mhz"] > 0, "delta2_mhz must be positive")
    _require(merged["gamma_21_mhz"] >= 0, "gamma_21_mhz must be nonnegative")
    for name in ("a32", "a42", "a52"):
        _require(merged[name] >= 0, f"{name} must be nonnegative")
    _require(merged["omega_p_mhz"] >= 0, "omega_p_mhz must be nonnegative")
    _require(merged["omega_c_mhz"] >= 0, "omega_c_mhz must be nonnegative")
    _require(
        merged["dp_min_mhz"] < merged["dp_max_mhz"],
        "dp_min_mhz must be below dp_max_mhz",
    )
    _require(
        2 <= merged["n_points"] <= 10**6,
        "n_points must be between 2 and 1000000",
    )
    fwhm = merged["broadening_fwhm_mhz"]
    if fwhm is not None:
        _finite("broadening_fwhm_mhz", fwhm)
        _require(fwhm >= 0, "broadening_fwhm_mhz must be nonnegative")
    sweep = merged["omega_c_sweep"]
    if sweep is not None:
        _require(len(sweep) > 0, "omega_c_sweep must be non-empty")
        for item in sweep:
            _finite("omega_c_sweep entries", item)
        _require(
            all(item >= 0 for item in sweep),
            "omega_c_sweep entries must be nonnegative",
        )
        _require(
            all(b > a for a, b in zip(sweep[:-1], sweep[1:])),
            "omega_c_sweep must be strictly ascending",
        )
    return SimulationConfig(**merged)


def _format(value: float) -> str:
    """Decimal scientific notation with 12 significant digits."""
    return f"{value:.11e}"


def _write_text(payload: str, destination) -> None:
    if destination is None:
        sys.stdout.write(payload)
    elif hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)


def emit_csv(spectrum: Spectrum, destination=None) -> None:
    """Write a spectrum as CSV: header plus one row per grid point.

    destination may be a path, a file-like object, or None for standard
    output. Values use 12 significant digits and LF line endings, so the
    bytes are reproducible run to run.
    """
    lines = [CSV_HEADER]
    for dp, ab, disp in zip(spectrum.grid, spectrum.absorption, spectrum.dispersion):
        lines.append(f"{_format(dp)},{_format(ab)},{_format(disp)}")
    _write_text("\n".join(lines) + "\n", destination)


class _CliError(Exception):
    """Argparse error rerouted so run() can return exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="cascade-eit",
        description=(
            "Steady-state probe spectra of a five-level cascade atom with a "
            "multi-window transparency structure."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    descriptions = {
        "scan": "compute one absorption/dispersion spectrum and emit CSV",
        "dressed": "emit the dressed-state eigenfrequency table",
        "sweep": "scan once per coupling strength and emit CSVs plus summary",
        "validate": "run the invariant self-checks against the config",
    }
    for name, description in descriptions.items():
        sub = subparsers.add_parser(name, help=description)
        sub.add_argument("--config", required=True, help="path to a key = value config file")
        sub.add_argument(
            "--out",
            default=None,
            help="output path (directory for sweep); default standard output",
        )
        sub.add_argument(
            "--broaden",
            type=float,
            default=None,
            metavar="FWHM",
            help="Gaussian broadening FWHM in MHz, overrides the config",
        )
        sub.add_argument(
            "--quiet", action="store_true", help="suppress progress messages"
        )
    return parser


def _info(message: str, quiet: bool) -> None:
    if not quiet:
        print(message, file=sys.stderr)


def _load_config(path: str) -> SimulationConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())


def _cmd_scan(config: SimulationConfig, args) -> int:
    started = time.perf_counter()
    spectrum = scan_probe(
        config.scheme(),
        config.drives(),
        config.dp_min_mhz,
        config.dp_max_mhz,
        config.n_points,
    )
    fwhm = args.broaden if args.broaden is not None else config.broadening_fwhm_mhz
    if fwhm:
        spectrum = broaden(spectrum, fwhm)
    _info(
        f"scan: {config.n_points} points in {time.perf_counter() - started:.2f} s",
        args.quiet,
    )
    emit_csv(spectrum, args.out if args.out is not None else config.out)
    return 0


def _cmd_dressed(config: SimulationConfig, args) -> int:
    frequencies = dressed_state_frequencies(config.scheme(), config.drives())
    lines = ["k,frequency_mhz"]
    lines.extend(
        f"{k},{_format(freq)}" for k, freq in enumerate(frequencies, start=1)
    )
    _write_text("\n".join(lines) + "\n", args.out if args.out is not None else config.out)
    return 0


def _cmd_sweep(config: SimulationConfig, args) -> int:
    if not config.omega_c_sweep:
        raise ValidationError("sweep requires omega_c_sweep in the config")
    out = args.out if args.out is not None else config.out
    if out is None:
        raise ValidationError("sweep writes multiple files; --out DIRECTORY is required")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    fwhm = args.broaden if args.broaden is not None else config.broadening_fwhm_mhz

    started = time.perf_counter()
    entries = sweep_coupling(
        config.scheme(),
        config.drives(),
        config.omega_c_sweep,
        config.dp_min_mhz,
        config.dp_max_mhz,
        config.n_points,
        broaden_fwhm=fwhm,
    )
    summary_lines = [SUMMARY_HEADER]
    for entry in entries:
        emit_csv(entry.spectrum, out_dir / f"scan_omega_c_{entry.omega_c:g}.csv")
        summary_lines.append(
            ",".join(
                (
                    _format(entry.omega_c),
                    str(entry.report.n_peaks),
                    str(entry.report.n_dips),
                    _format(entry.max_separation_mhz),
                    _format(entry.deepest_dip_depth),
                    _format(entry.dip_width_mhz),
                )
            )
        )
    _write_text("\n".join(summary_lines) + "\n", out_dir / "summary.csv")
    _info(
        f"sweep: {len(entries)} couplings in {time.perf_counter() - started:.2f} s "
        f"-> {out_dir}",
        args.quiet,
    )
    return 0


def _cmd_validate(config: SimulationConfig, args) -> int:
    results = validation.run_all(config.scheme(), config.drives())
    lines = []
    if not args.quiet:
        lines.extend(
            f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}"
            for res in results
        )
    n_failed = sum(1 for res in results if not res.passed)
    lines.append(f"{len(results) - n_failed} passed, {n_failed} failed")
    _write_text("\n".join(lines) + "\n", args.out if args.out is not None else config.out)
    return 0 if n_failed == 0 else 1


_COMMANDS = {
    "scan": _cmd_scan,
    "dressed": _cmd_dressed,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
}


def run(argv=None) -> int:
    """Entry point returning the process exit code.

    0 on success, 1 on usage, parse, or validation errors, 2 on numerical
    failure (no unique steady state).
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        config = _load_config(args.config)
        return _COMMANDS[args.command](config, args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SingularSystemError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
