"""Command-line front end: single points and sweeps to CSV/JSON.

Configuration is resolved in three layers: built-in defaults, then a
``key = value`` config file (# comments allowed), then CLI flags. Outputs
are a data table (CSV or JSON) plus a ``<out>.meta.json`` sidecar carrying
every resolved parameter, the physical constants, the code version, and
any per-point failures. Identical configurations produce byte-identical
files: floats are written with 17 significant digits and nothing
time-dependent is recorded. Files are written atomically (temp file, then
rename).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .model import DensityMatrix
from .params import EquationVariant, SystemParams, ValidationError
from .response import C_LIGHT, EPSILON_0, HBAR, MU_0, ResponseRecord, response_at
from .steady import DEFAULT_DT, DEFAULT_T_FINAL, StepUnstable, evolve, steady_state
from .sweep import (ALIGNMENT_GUARD, SweepAxis, SweepTable, detect_bands,
                    sweep_alignment, sweep_detuning)


class ParseError(ValueError):
    """Malformed config input; the message names the offending line/flag."""


MODES = ("point", "sweep-detuning", "sweep-p")
FORMATS = ("csv", "json")
VARIANTS = {"corrected": EquationVariant.CORRECTED,
            "paper": EquationVariant.PAPER_LITERAL}

CSV_COLUMNS = ("axis_value", "re_eps", "im_eps", "re_mu", "im_mu", "re_n",
               "im_n", "re_rho24", "im_rho24", "re_rho32", "im_rho32",
               "handedness")


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration (physical parameters plus run controls)."""

    gamma_unit: float = 1.0e8
    gamma2: float = 0.8
    gamma3: float = 0.8
    gamma4: float = 0.8
    omega1_bare: float = 10.0
    omegap_bare: float = 0.2
    p_align: float = 0.5
    delta_p: float = 0.0
    density_n: float = 5.0e24
    d42: float = 1.0e-29
    mu23: float = 9.274e-24
    equations: str = "corrected"
    mode: str = "point"
    d_min: float = -20.0
    d_max: float = 20.0
    p_min: float = 0.0
    p_max: float = 1.0 - ALIGNMENT_GUARD
    steps: int = 401
    out: str | None = None
    format: str = "csv"
    oracle: bool = False

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.format not in FORMATS:
            raise ValidationError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.equations not in VARIANTS:
            raise ValidationError(f"equations must be one of {tuple(VARIANTS)}, got {self.equations!r}")
        if self.steps < 1:
            raise ValidationError(f"steps must be >= 1, got {self.steps}")
        self.system_params()  # SystemParams invariants

    def system_params(self) -> SystemParams:
        return SystemParams(
            gamma_unit=self.gamma_unit, gamma2=self.gamma2, gamma3=self.gamma3,
            gamma4=self.gamma4, omega1_bare=self.omega1_bare,
            omegap_bare=self.omegap_bare, p_align=self.p_align,
            delta_p=self.delta_p, density_n=self.density_n, d42=self.d42,
            mu23=self.mu23, equation_variant=VARIANTS[self.equations])


_FLOAT_KEYS = ("gamma_unit", "gamma2", "gamma3", "gamma4", "omega1_bare",
               "omegap_bare", "p_align", "delta_p", "density_n", "d42",
               "mu23", "d_min", "d_max", "p_min", "p_max")
_STR_KEYS = ("equations", "mode", "out", "format")
_INT_KEYS = ("steps",)
_BOOL_KEYS = ("oracle",)
_ALL_KEYS = _FLOAT_KEYS + _STR_KEYS + _INT_KEYS + _BOOL_KEYS


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def config_mapping(config: RunConfig) -> dict:
    """All config keys with canonically formatted string values (the
    representation stored in the metadata sidecar; parsing it back yields
    an identical RunConfig)."""
    out = {}
    for key in _ALL_KEYS:
        value = getattr(config, key)
        if value is None:
            continue
        out[key] = _fmt(value)
    return out


def config_text(config: RunConfig) -> str:
    """Canonical ``key = value`` rendering of a configuration."""
    return "".join(f"{k} = {v}\n" for k, v in config_mapping(config).items())


def _convert(key: str, raw: str, where: str):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            if raw not in ("true", "false"):
                raise ValueError("expected true or false")
            return raw == "true"
        return raw
    except ValueError as exc:
        raise ParseError(f"{where}: bad value for {key!r}: {raw!r} ({exc})") from exc


def _parse_config_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _ALL_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw, f"line {lineno}")
    return values


def parse_config(text: str | None = None, flags: dict | None = None) -> RunConfig:
    """Resolve a RunConfig from config-file text and/or CLI flag values.

    Flags override file values override the built-in defaults. Unknown
    keys raise ParseError; invalid values raise ValidationError naming the
    violated invariant.
    """
    values = {}
    if text is not None:
        values.update(_parse_config_text(text))
    if flags:
        for key, value in flags.items():
            if key not in _ALL_KEYS:
                raise ParseError(f"flag: unknown key {key!r}")
            if value is not None:
                values[key] = value
    config = RunConfig(**values)
    config.validate()
    return config


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _record_row(axis_value: float, record: ResponseRecord) -> list:
    return [axis_value,
            record.eps_r.real, record.eps_r.imag,
            record.mu_r.real, record.mu_r.imag,
            record.n_index.real, record.n_index.imag,
            record.rho24.real, record.rho24.imag,
            record.rho32.real, record.rho32.imag,
            record.handedness.value]


def _render_csv(table: SweepTable) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for axis_value, record in table.ok_records():
        row = _record_row(axis_value, record)
        lines.append(",".join(v if isinstance(v, str) else f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def _render_json(table: SweepTable) -> str:
    rows = []
    for axis_value, record in table.ok_records():
        row = _record_row(axis_value, record)
        rows.append(dict(zip(CSV_COLUMNS, row)))
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def _oracle_checks(config: RunConfig, table: SweepTable) -> list:
    """Cross-check the linear solve against time integration.

    Point mode checks its single point; sweeps check the first, middle,
    and last successful grid points (full-grid integration would dominate
    the runtime without adding information).
    """
    pairs = table.ok_records()
    if not pairs:
        return []
    if len(pairs) <= 3:
        chosen = pairs
    else:
        chosen = [pairs[0], pairs[len(pairs) // 2], pairs[-1]]
    field = "delta_p" if table.axis is SweepAxis.DETUNING else "p_align"
    checks = []
    for axis_value, _record in chosen:
        params = dataclasses.replace(config.system_params(), **{field: axis_value})
        entry = {"axis_value": _fmt(axis_value)}
        try:
            settled = evolve(params, DensityMatrix.ground(), DEFAULT_T_FINAL, DEFAULT_DT)
            gap = float(max(abs(v) for v in (settled.vector() - steady_state(params).vector())))
            entry["max_abs_diff"] = _fmt(gap)
        except StepUnstable as exc:
            entry["error"] = f"StepUnstable: {exc}"
        checks.append(entry)
    return checks


def _metadata(config: RunConfig, table: SweepTable, oracle_checks: list) -> str:
    meta = {
        "code_version": __version__,
        "config": config_mapping(config),
        "constants": {
            "hbar_J_s": HBAR,
            "epsilon0_F_per_m": EPSILON_0,
            "mu0_N_per_A2": MU_0,
            "c_m_per_s": C_LIGHT,
        },
        "axis": table.axis.value,
        "points_total": len(table.grid),
        "points_failed": len(table.failures),
        "failures": [
            {"axis_value": _fmt(f.axis_value), "kind": f.kind, "message": f.message}
            for f in table.failures
        ],
        "left_handed_bands": [[_fmt(a), _fmt(b)] for a, b in table.bands],
    }
    if oracle_checks:
        meta["oracle_checks"] = oracle_checks
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"


def run(config: RunConfig) -> int:
    """Execute the configured computation and write its output files.

    Returns the process exit status. Sweep-point failures are collected in
    the sidecar; a fatal error in point mode propagates to the caller.
    """
    config.validate()
    if config.out is None:
        raise ValidationError("an output path is required (out = <path> or --out)")
    params = config.system_params()

    if config.mode == "point":
        record = response_at(params)  # fatal errors propagate in point mode
        table = SweepTable(axis=SweepAxis.DETUNING, grid=(config.delta_p,),
                           records=(record,), bands=(), failures=())
        table = dataclasses.replace(table, bands=tuple(detect_bands(table)))
    elif config.mode == "sweep-detuning":
        table = sweep_detuning(params, config.d_min, config.d_max, config.steps)
    else:
        table = sweep_alignment(params, config.p_min, config.p_max, config.steps)

    oracle_checks = _oracle_checks(config, table) if config.oracle else []

    out_path = Path(config.out)
    renderer = _render_csv if config.format == "csv" else _render_json
    _atomic_write(out_path, renderer(table))
    _atomic_write(out_path.with_name(out_path.name + ".meta.json"),
                  _metadata(config, table, oracle_checks))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgcvapor",
        description="Steady-state electromagnetic response of a dense "
                    "four-level Y-type vapor with interfering decay channels.")
    parser.add_argument("--mode", choices=MODES, default=None,
                        help="single point, detuning sweep, or alignment sweep")
    parser.add_argument("--p", type=float, default=None, dest="p_align",
                        help="dipole alignment parameter in [-1, 1]")
    parser.add_argument("--delta-p", type=float, default=None, dest="delta_p",
                        help="probe detuning (gamma units)")
    parser.add_argument("--d-min", type=float, default=None, dest="d_min")
    parser.add_argument("--d-max", type=float, default=None, dest="d_max")
    parser.add_argument("--p-min", type=float, default=None, dest="p_min")
    parser.add_argument("--p-max", type=float, default=None, dest="p_max")
    parser.add_argument("--steps", type=int, default=None)
    parser.add_argument("--equations", choices=tuple(VARIANTS), default=None,
                        help="equation variant (default: corrected)")
    parser.add_argument("--oracle", action="store_true", default=None,
                        help="cross-check the linear solve against time integration")
    parser.add_argument("--config", type=Path, default=None,
                        help="key = value configuration file")
    parser.add_argument("--out", type=str, default=None, help="output data path")
    parser.add_argument("--format", choices=FORMATS, default=None)
    return parser


def main(argv: list | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else None
        flags = {key: getattr(args, key) for key in _ALL_KEYS if hasattr(args, key)}
        config = parse_config(text, flags)
        return run(config)
    except (ParseError, ValidationError) as exc:
        print(f"sgcvapor: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # fatal compute/IO errors
        print(f"sgcvapor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
