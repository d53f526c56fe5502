"""``odlro-lab``: extraction runs, temperature sweeps, ODLRO scans, validation.

Configuration precedence: command-line flags > JSON config file (``--config``
or the ``ODLRO_LAB_CONFIG`` environment variable) > built-in defaults.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from odlro_lab import output, sweep, validation
from odlro_lab.geometry import PartitionSpec
from odlro_lab.odlro import DEFAULT_SEPARATIONS

CONFIG_ENV = "ODLRO_LAB_CONFIG"


@dataclass
class RunConfig:
    dimension: int = 3
    mode_cutoff: int = 8
    particle_number: float = 1e4
    t_min: float = 0.1
    t_max: float = 3.0
    steps: int = 50
    spacing: str = "log"
    partition_a: float = 0.5
    partition_b: float = 0.5
    threshold: float = 0.1
    oracle: bool = False
    out: str = "-"
    format: str = "csv"
    seed: int = 0
    g_points: int = 64
    separations: list[float] = field(default_factory=lambda: list(DEFAULT_SEPARATIONS))

    def validate(self) -> None:
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        if self.mode_cutoff < 1:
            raise ValueError("mode_cutoff must be >= 1 (empty mode list)")
        if self.particle_number <= 0:
            raise ValueError("particle_number must be positive")
        if self.t_min <= 0 or self.t_max < self.t_min:
            raise ValueError(f"need 0 < t_min <= t_max, got {self.t_min}, {self.t_max}")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"spacing must be log or linear, got {self.spacing!r}")
        if not 0 < self.partition_a <= self.partition_b < 1:
            raise ValueError(f"need 0 < a <= b < 1, got a={self.partition_a}, b={self.partition_b}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.g_points < 1:
            raise ValueError("g_points must be >= 1")
        if not self.separations or any(not 0 <= s < 1 for s in self.separations):
            raise ValueError("separations must be a nonempty list in [0, 1)")

    @property
    def partition(self) -> PartitionSpec:
        return PartitionSpec(self.partition_a, self.partition_b)


FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def load_config_file(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    unknown = set(data) - FIELDS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = load_config_file(args.config or os.environ.get(CONFIG_ENV))
    for name in FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _temperatures(cfg: RunConfig, setup: sweep.GasSetup):
    grid = sweep.temperature_grid(cfg.t_min, cfg.t_max, cfg.steps, cfg.spacing)
    tc = setup.critical_temperature
    return grid * tc if tc is not None else grid


def _progress(i: int, n: int) -> None:
    print(f"[{i}/{n}]", file=sys.stderr)


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(cfg: RunConfig, subcommand: str, columns, rows) -> None:
    header = dict(dataclasses.asdict(cfg), subcommand=subcommand)
    with _open_out(cfg.out) as fh:
        output.write_rows(fh, cfg.format, columns, rows, header)


def run_extract(cfg: RunConfig) -> int:
    rows = sweep.extract_rows(sweep.default_g_grid(cfg.g_points))
    _emit(cfg, "extract", sweep.EXTRACT_COLUMNS, rows)
    return 0


def run_sweep(cfg: RunConfig) -> int:
    setup = sweep.prepare(cfg.dimension, cfg.mode_cutoff, cfg.particle_number, cfg.partition)
    temps = _temperatures(cfg, setup)
    rows = []
    for i, t in enumerate(temps, 1):
        _progress(i, len(temps))
        rows.append(sweep.sweep_row(setup, float(t), oracle=cfg.oracle))
    _emit(cfg, "sweep", sweep.SWEEP_COLUMNS, rows)
    return 1 if any(r["error"] for r in rows) else 0


def run_scan(cfg: RunConfig) -> int:
    setup = sweep.prepare(cfg.dimension, cfg.mode_cutoff, cfg.particle_number, cfg.partition)
    temps = _temperatures(cfg, setup)
    rows = []
    for i, t in enumerate(temps, 1):
        _progress(i, len(temps))
        rows.extend(sweep.scan_rows(setup, float(t), cfg.separations, cfg.threshold))
    _emit(cfg, "scan", sweep.SCAN_COLUMNS, rows)
    return 1 if any(r["error"] for r in rows) else 0


def run_validate(cfg: RunConfig, fault: Optional[str] = None) -> int:
    def report(res):
        status = "PASS" if res.passed else "FAIL"
        line = f"{status}  {res.name}"
        if not res.passed:
            line += f"  -- {res.detail}"
        print(line, flush=True)

    results = validation.run_validation(cfg.seed, fault, progress=report)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties hold")
    if failed:
        first = failed[0]
        print(json.dumps({"check": first.name, "detail": first.detail, "case": first.case},
                         default=str, sort_keys=True))
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    common.add_argument("--dimension", type=int, choices=(1, 2, 3))
    common.add_argument("--mode-cutoff", dest="mode_cutoff", type=int)
    common.add_argument("--particle-number", "-N", dest="particle_number", type=float)
    common.add_argument("--t-min", dest="t_min", type=float, help="in units of T_c for 3D, absolute otherwise")
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--spacing", choices=("log", "linear"))
    common.add_argument("--partition-a", dest="partition_a", type=float)
    common.add_argument("--partition-b", dest="partition_b", type=float)
    common.add_argument("--threshold", type=float, help="ODLRO eigenvalue-fraction threshold")
    common.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--out", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="odlro-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("extract", parents=[common], help="delta-pulse extraction protocol vs coupling g")
    p.add_argument("--g-points", dest="g_points", type=int)
    sub.add_parser("sweep", parents=[common], help="negativity of rho_1 across a temperature grid")
    p = sub.add_parser("scan", parents=[common], help="off-diagonal rho_1 scan and spectral ODLRO flag")
    p.add_argument("--separations", type=lambda s: [float(v) for v in s.split(",")],
                   help="comma-separated antipodal separations")
    p = sub.add_parser("validate", parents=[common], help="run the invariant suite")
    p.add_argument("--inject-fault", dest="inject_fault", choices=validation.FAULTS,
                   help="deliberately corrupt an input to exercise failure reporting")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (OSError, ValueError, TypeError) as exc:
        print(f"odlro-lab: invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        if args.subcommand == "extract":
            return run_extract(cfg)
        if args.subcommand == "sweep":
            return run_sweep(cfg)
        if args.subcommand == "scan":
            return run_scan(cfg)
        return run_validate(cfg, getattr(args, "inject_fault", None))
    except OSError as exc:
        print(f"odlro-lab: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
