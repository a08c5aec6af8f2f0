"""Command-line front end: permittivity and potential sweeps to CSV, and the validation suite."""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import warnings
from dataclasses import dataclass, fields

import numpy as np

from . import __version__, plasma, potential
from .errors import DomainError, FracPlasmaError
from .quadrature import ACCELERATIONS, POLE_POLICIES, QuadratureSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

CONFIG_PREFIX = "# config: "

PERMITTIVITY_COLUMNS = ("k", "x", "eps_re_exact", "eps_im_exact", "eps_small_x", "eps_large_x")
POTENTIAL_COLUMNS = ("r", "phi", "correction_factor", "error_estimate", "half_periods_used", "pole_flag", "error")


class ConfigError(DomainError):
    """The run configuration is malformed or violates a parameter invariant."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved sweep configuration; echoed into every CSV header."""

    command: str = "permittivity"
    number_density: float = 1e18
    charge: float = 1.602176634e-19
    mass: float = 9.1093837015e-31
    temperature: float = 1e4
    vacuum_permittivity: float = plasma.VACUUM_PERMITTIVITY
    boltzmann: float = plasma.BOLTZMANN
    alpha: float = 1.0
    omega: float = 0.0
    case: str = "debye"
    source_charge: float = 1.602176634e-19
    # None means "derive from the Debye radius" and is replaced on resolve()
    grid_min: float | None = None
    grid_max: float | None = None
    grid_count: int = 50
    grid_spacing: str = "log"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_half_periods: int = 10_000
    acceleration: str = "alternating-series"
    pole_policy: str = "error"
    out: str = "-"

    def plasma_parameters(self) -> plasma.PlasmaParameters:
        return plasma.PlasmaParameters(
            self.number_density,
            self.charge,
            self.mass,
            self.temperature,
            self.vacuum_permittivity,
            self.boltzmann,
        )

    def quadrature_spec(self) -> QuadratureSpec:
        return QuadratureSpec(self.abs_tol, self.rel_tol, self.max_half_periods, self.acceleration, self.pole_policy)

    def dispersion_case(self) -> potential.DispersionCase:
        return potential.DispersionCase(self.case, self.plasma_parameters(), self.alpha, self.omega)

    def resolve(self) -> "RunConfig":
        """Validate every invariant and fill in derived grid bounds."""
        if self.command not in ("permittivity", "potential"):
            raise ConfigError(f"unknown command {self.command!r}")
        try:
            p = self.plasma_parameters()
            self.quadrature_spec()
            if self.command == "potential":
                self.dispersion_case()
            else:
                plasma.SpectralPoint(1.0, self.omega, self.alpha)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if self.grid_spacing not in ("linear", "log"):
            raise ConfigError(f"grid_spacing must be 'linear' or 'log', got {self.grid_spacing!r}")
        if isinstance(self.grid_count, bool) or not isinstance(self.grid_count, int) or self.grid_count < 1:
            raise ConfigError(f"grid_count must be an integer >= 1, got {self.grid_count!r}")
        if not (math.isfinite(self.source_charge)):
            raise ConfigError("source_charge must be finite")

        # k grids are in 1/r_D units, r grids in r_D units, by default
        r_d = p.debye_radius
        unit = 1.0 / r_d if self.command == "permittivity" else r_d
        lo = 0.1 * unit if self.grid_min is None else float(self.grid_min)
        hi = 10.0 * unit if self.grid_max is None else float(self.grid_max)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo > 0):
            raise ConfigError(f"grid bounds must be finite and positive, got [{lo}, {hi}]")
        if not (lo < hi or (lo == hi and self.grid_count == 1)):
            raise ConfigError(f"grid_min must be below grid_max, got [{lo}, {hi}]")
        return dataclasses.replace(self, grid_min=lo, grid_max=hi)

    def grid(self) -> list[float]:
        if self.grid_count == 1:
            return [float(self.grid_min)]
        make = np.geomspace if self.grid_spacing == "log" else np.linspace
        return [float(v) for v in make(self.grid_min, self.grid_max, self.grid_count)]

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if value is not None and f.type in ("float", "float | None"):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"{f.name} must be a number, got {value!r}")
                value = float(value)
            kwargs[f.name] = value
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        return cls.from_mapping(data)

    @classmethod
    def from_csv_header(cls, text: str) -> "RunConfig":
        for line in text.splitlines():
            if line.startswith(CONFIG_PREFIX):
                return cls.from_json(line[len(CONFIG_PREFIX) :])
        raise ConfigError("no config line in CSV header")


def fmt(value) -> str:
    """17 significant digits for floats so every value round-trips."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value).replace(",", ";").replace("\n", " ")


def _render(cfg: RunConfig, columns, rows) -> str:
    lines = [f"# fracplasma {__version__}", CONFIG_PREFIX + cfg.to_json(), ",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def permittivity_rows(cfg: RunConfig):
    p = cfg.plasma_parameters()
    rows = []
    for k in cfg.grid():
        sp = plasma.SpectralPoint(k, cfg.omega, cfg.alpha)
        try:
            exact = plasma.permittivity_exact(sp, p)
            x = exact.x_used
            small = large = None
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                if abs(x) < 1.0:
                    small = plasma.permittivity_small_x(sp, p, 3).value.real
                if abs(x) > 1.0:
                    large = plasma.permittivity_large_x(sp, p, 2).value.real
        except FracPlasmaError as exc:
            raise _RowFailure(k, exc) from exc
        rows.append((k, x, exact.value.real, exact.value.imag, small, large))
    return rows


class _RowFailure(Exception):
    def __init__(self, at, exc):
        super().__init__(f"row at {at!r} failed: {type(exc).__name__}: {exc}")


def potential_rows(cfg: RunConfig):
    results = potential.potential_profile(cfg.dispersion_case(), cfg.source_charge, cfg.grid(), cfg.quadrature_spec())
    return [
        (r, res.value, res.correction_factor, res.error_estimate, res.half_periods_used, res.pole_encountered, res.error)
        for r, res in zip(cfg.grid(), results)
    ]


def cmd_permittivity(cfg: RunConfig) -> int:
    try:
        cfg = dataclasses.replace(cfg, command="permittivity").resolve()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = permittivity_rows(cfg)
    except _RowFailure as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(cfg, _render(cfg, PERMITTIVITY_COLUMNS, rows))
    return EXIT_OK


def cmd_potential(cfg: RunConfig) -> int:
    try:
        cfg = dataclasses.replace(cfg, command="potential").resolve()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rows = potential_rows(cfg)
    _emit(cfg, _render(cfg, POTENTIAL_COLUMNS, rows))
    failed = [row for row in rows if row[-1]]
    for row in failed:
        print(f"numerical error at r={fmt(row[0])}: {row[-1]}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_validate(groups=None, stream=None) -> int:
    from . import validation

    stream = sys.stdout if stream is None else stream
    checks = validation.run_all(groups)
    for check in checks:
        print(check.line(), file=stream)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=stream)
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


# flag name -> RunConfig field
_FLAGS = {
    "alpha": float,
    "omega": float,
    "case": str,
    "grid_min": float,
    "grid_max": float,
    "grid_count": int,
    "grid_spacing": str,
    "abs_tol": float,
    "rel_tol": float,
    "pole_policy": str,
    "out": str,
    "number_density": float,
    "charge": float,
    "mass": float,
    "temperature": float,
    "source_charge": float,
    "max_half_periods": int,
    "acceleration": str,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracplasma", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("permittivity", "sweep the longitudinal permittivity over a k grid"),
        ("potential", "sweep the point-charge potential over an r grid"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
        for flag, kind in _FLAGS.items():
            extra = {}
            if flag == "case":
                extra["choices"] = potential.CASES
            elif flag == "grid_spacing":
                extra["choices"] = ("linear", "log")
            elif flag == "pole_policy":
                extra["choices"] = POLE_POLICIES
            elif flag == "acceleration":
                extra["choices"] = ACCELERATIONS
            sp.add_argument("--" + flag.replace("_", "-"), dest=flag, type=kind, default=None, **extra)
    val = sub.add_parser("validate", help="run the invariant suite")
    val.add_argument("--group", action="append", help="restrict to a group (repeatable)")
    return parser


def config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.loads(fh.read())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
    for flag in _FLAGS:
        value = getattr(args, flag)
        if value is not None:
            data[flag] = value
    data["command"] = args.command
    return RunConfig.from_mapping(data)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "validate":
        return cmd_validate(args.group)
    try:
        cfg = config_from_args(args)
    except (ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return cmd_permittivity(cfg) if args.command == "permittivity" else cmd_potential(cfg)


if __name__ == "__main__":
    sys.exit(main())
