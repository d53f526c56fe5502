"""Per-point pipelines behind the CLI: extraction, temperature sweep, ODLRO scan."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from odlro_lab import bose_gas, fock_extraction, negativity, odlro
from odlro_lab.bose_gas import Mode, ThermalState
from odlro_lab.geometry import GramSet, PartitionSpec, gram_matrices
from odlro_lab.negativity import NegativityReport


@dataclass(frozen=True)
class GasSetup:
    """Everything about a sweep that does not depend on temperature."""

    dimension: int
    cutoff: int
    particle_number: float
    partition: PartitionSpec
    modes: list[Mode] = field(repr=False)
    grams: GramSet = field(repr=False)

    @property
    def critical_temperature(self) -> Optional[float]:
        if self.dimension != 3:
            return None
        return bose_gas.critical_temperature(self.particle_number)


def prepare(dimension: int, cutoff: int, particle_number: float, partition: PartitionSpec) -> GasSetup:
    modes = bose_gas.box_modes(dimension, cutoff)
    return GasSetup(dimension, cutoff, float(particle_number), partition, modes, gram_matrices(modes, partition))


def temperature_grid(t_min: float, t_max: float, steps: int, spacing: str = "log") -> np.ndarray:
    if t_min <= 0 or t_max < t_min:
        raise ValueError(f"need 0 < t_min <= t_max, got {t_min}, {t_max}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return np.array([float(t_min)])
    if spacing == "log":
        return np.geomspace(t_min, t_max, steps)
    if spacing == "linear":
        return np.linspace(t_min, t_max, steps)
    raise ValueError(f"spacing must be 'log' or 'linear', got {spacing!r}")


@dataclass(frozen=True)
class SweepPoint:
    state: ThermalState
    chi_norm_squared: float
    analytic: NegativityReport
    oracle: Optional[NegativityReport] = None

    @property
    def temperature(self) -> float:
        return self.state.temperature


def sweep_point(setup: GasSetup, temperature: float, oracle: bool = False) -> SweepPoint:
    state = bose_gas.thermal_state(setup.modes, setup.particle_number, temperature)
    chi = negativity.chi_vector(state.occupations, setup.grams)
    meta = dict(temperature=temperature, partition=setup.partition, mode_cutoff=setup.cutoff,
                tail_weight=state.tail_weight)
    analytic = replace(negativity.analytic_negativity(chi, setup.grams, setup.partition), **meta)
    pt = None
    if oracle:
        pt = negativity.pt_oracle(state.occupations, setup.modes, setup.partition, setup.grams)
        pt = replace(pt, **meta)
    return SweepPoint(state, negativity.chi_norm_squared(chi, setup.grams), analytic, pt)


SWEEP_COLUMNS = (
    "T", "T_over_Tc", "mu", "condensate_fraction", "tail_weight", "chi_norm_sq",
    "negativity_analytic", "negativity_oracle", "negative_eigenvalue_count", "error",
)


def sweep_row(setup: GasSetup, temperature: float, oracle: bool = False) -> dict:
    """One output row; solver and conditioning failures land in ``error``."""
    tc = setup.critical_temperature
    row = dict.fromkeys(SWEEP_COLUMNS)
    row["T"] = float(temperature)
    row["T_over_Tc"] = None if tc is None else temperature / tc
    try:
        point = sweep_point(setup, temperature, oracle=False)
    except (bose_gas.SolverFailure, ValueError, ArithmeticError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(
        mu=point.state.chemical_potential,
        condensate_fraction=point.state.condensate_fraction,
        tail_weight=point.state.tail_weight,
        chi_norm_sq=point.chi_norm_squared,
        negativity_analytic=point.analytic.value,
    )
    if oracle:
        try:
            pt = negativity.pt_oracle(point.state.occupations, setup.modes, setup.partition, setup.grams)
        except negativity.ConditioningError as exc:
            row["error"] = f"ConditioningError: {exc}"
        else:
            row["negativity_oracle"] = pt.value
            row["negative_eigenvalue_count"] = pt.negative_eigenvalue_count
    return row


EXTRACT_COLUMNS = ("g", "negativity_analytic", "negativity_oracle", "abs_diff")


def extract_rows(g_values: Sequence[float]) -> list[dict]:
    rows = []
    for g in g_values:
        a = fock_extraction.analytic_extraction_negativity(g)
        o = fock_extraction.extraction_negativity_oracle(g)
        rows.append(dict(g=float(g), negativity_analytic=a, negativity_oracle=o, abs_diff=abs(a - o)))
    return rows


def default_g_grid(points: int = 64) -> np.ndarray:
    if points < 1:
        raise ValueError("need at least one g value")
    # half-open [0, pi): negativity is pi-periodic, and even counts hit pi/2 exactly
    return np.linspace(0.0, math.pi, points, endpoint=False)


SCAN_COLUMNS = ("T", "T_over_Tc", "separation", "x", "x_prime", "rho1_offdiag", "alpha", "odlro_flag", "error")


def scan_rows(setup: GasSetup, temperature: float, separations: Sequence[float],
              threshold: float = odlro.DEFAULT_THRESHOLD) -> list[dict]:
    """Antipodal off-diagonal scan plus the spectral ODLRO verdict at one T."""
    tc = setup.critical_temperature
    base = dict.fromkeys(SCAN_COLUMNS)
    base["T"] = float(temperature)
    base["T_over_Tc"] = None if tc is None else temperature / tc
    try:
        state = bose_gas.thermal_state(setup.modes, setup.particle_number, temperature)
    except (bose_gas.SolverFailure, ValueError, ArithmeticError) as exc:
        return [dict(base, error=f"{type(exc).__name__}: {exc}")]
    report = odlro.odlro_detect(state.occupations, threshold, trace=state.particle_number)
    scan = odlro.offdiagonal_scan(state.occupations, setup.modes, odlro.antipodal_path(separations))
    xs = scan.x if scan.x.ndim == 1 else scan.x[:, 0]
    xps = scan.x_prime if scan.x_prime.ndim == 1 else scan.x_prime[:, 0]
    rows = []
    for s, x, xp, v in zip(separations, xs, xps, scan.values):
        rows.append(dict(base, separation=float(s), x=float(x), x_prime=float(xp), rho1_offdiag=float(v),
                         alpha=report.lambda_max_fraction, odlro_flag=report.flag))
    return rows
