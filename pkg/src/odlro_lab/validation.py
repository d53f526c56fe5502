"""Invariant suite run by ``odlro-lab validate``.

Each check returns a :class:`CheckResult`; exceptions raised inside a check
(conditioning failures, invariant violations) are caught and reported as
failures carrying the exception text.
"""

from __future__ import annotations

import io
import math
import traceback
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from odlro_lab import bose_gas, fock_extraction, negativity, odlro, output, sweep
from odlro_lab.geometry import GramSet, PartitionSpec, axis_integral, gram_matrices, mirror_sign
from odlro_lab.quadrature import adaptive_simpson, sine_product

FAULTS = ("gram",)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    case: dict = field(default_factory=dict)


class _Failed(Exception):
    def __init__(self, detail, **case):
        super().__init__(detail)
        self.case = case


def _require(cond, detail, **case):
    if not cond:
        raise _Failed(detail, **case)


def break_psd(grams: GramSet) -> GramSet:
    """Push gramA's smallest eigenvalue to -1e-3 (fault injection)."""
    w, u = np.linalg.eigh(grams.gramA)
    v = u[:, 0]
    bad = grams.gramA - (w[0] + 1e-3) * np.outer(v, v)
    return GramSet(grams.pA, grams.pB, grams.pC, bad, grams.gramB)


class Validator:
    def __init__(self, seed: int = 0, fault: Optional[str] = None):
        if fault is not None and fault not in FAULTS:
            raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
        self.seed = seed
        self.fault = fault
        self._sweep_cache = {}

    # -- helpers --------------------------------------------------------------
    def grams(self, modes, partition) -> GramSet:
        g = gram_matrices(modes, partition)
        return break_psd(g) if self.fault == "gram" else g

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def half_box_sweep(self):
        """3D, N = 1e4, cutoff 8, half box, 50 log points over [0.1, 3] T_c."""
        if "sweep" not in self._sweep_cache:
            setup = sweep.prepare(3, 8, 1e4, PartitionSpec(0.5, 0.5))
            tc = setup.critical_temperature
            ts = sweep.temperature_grid(0.1, 3.0, 50) * tc
            points = [sweep.sweep_point(setup, t) for t in ts]
            self._sweep_cache["sweep"] = (setup, tc, points)
        return self._sweep_cache["sweep"]

    # -- fock_extraction ------------------------------------------------------
    def extraction_oracle(self):
        for g in np.linspace(0, 2 * math.pi, 100):
            a = fock_extraction.analytic_extraction_negativity(g)
            o = fock_extraction.extraction_negativity_oracle(g)
            _require(abs(a - o) <= 1e-12, "analytic vs eigensolver mismatch", g=g, analytic=a, oracle=o)

    def extraction_norm_and_group(self):
        rng = self.rng(1)
        s0 = fock_extraction.build_initial_state()
        for g1, g2 in rng.uniform(-10, 10, size=(50, 2)):
            s1 = fock_extraction.apply_coupling(s0, g1)
            _require(abs(s1.norm - 1) <= 1e-12, "norm not preserved", g=g1)
            two = fock_extraction.apply_coupling(s1, g2).amplitudes
            one = fock_extraction.apply_coupling(s0, g1 + g2).amplitudes
            _require(np.max(np.abs(two - one)) <= 1e-12, "group property violated", g1=g1, g2=g2)

    def extraction_symmetry(self):
        f = fock_extraction.analytic_extraction_negativity
        for g in np.linspace(0, math.pi, 41):
            _require(abs(f(g + math.pi) - f(g)) <= 1e-12, "not pi-periodic", g=g)
            _require(abs(f(math.pi / 2 + g) - f(math.pi / 2 - g)) <= 1e-12, "not symmetric about pi/2", g=g)

    # -- bose_gas -------------------------------------------------------------
    def ensemble_agreement(self):
        modes = bose_gas.box_modes(1, 6)
        for n in (2, 3, 4):
            for t in (5.0, 10.0, 20.0, 40.0, 80.0):
                can = bose_gas.canonical_occupations_bruteforce(modes, n, t)
                _require(abs(can.sum() - n) <= 1e-12, "canonical occupations do not sum to N", N=n, T=t)
                mu = bose_gas.solve_chemical_potential(modes, n, t)
                gc = bose_gas.occupations(modes, mu, t)
                diff = abs(can[0] / n - gc[0] / n)
                _require(diff <= 0.15, "ensembles disagree on condensate fraction", N=n, T=t, diff=diff)

    def particle_number(self):
        for dim, cutoff, n, ts in ((3, 8, 1e4, None), (1, 8, 100.0, (1.0, 50.0, 500.0))):
            modes = bose_gas.box_modes(dim, cutoff)
            if ts is None:
                ts = sweep.temperature_grid(0.1, 3.0, 12) * bose_gas.critical_temperature(n)
            for t in ts:
                levels = bose_gas.box_levels(dim, bose_gas.thermodynamic_cutoff(t, cutoff))
                mu = bose_gas.solve_chemical_potential(levels, n, t)
                total = float(levels.degeneracies @ bose_gas.occupations(levels, mu, t))
                _require(abs(total - n) <= 1e-7 * n, "occupancy sum misses N", dim=dim, T=t, total=total)
                occ = bose_gas.occupations(modes, mu, t)
                energies = np.array([m.energy for m in modes])
                steps = np.diff(occ)[np.diff(energies) > 0]
                _require(np.all(steps < 0), "occupations not decreasing in energy", dim=dim, T=t)

    # -- geometry -------------------------------------------------------------
    def overlaps_vs_quadrature(self):
        rng = self.rng(2)
        for _ in range(20):
            a, b = np.sort(rng.uniform(0.05, 0.95, 2))
            for region, (lo, hi) in (("A", (0.0, a)), ("B", (b, 1.0))):
                for n in range(1, 13):
                    for m in range(n, 13):
                        quad = adaptive_simpson(sine_product(n, m), lo, hi, 1e-12)
                        exact = float(axis_integral(n, m, lo, hi))
                        _require(abs(quad - exact) <= 1e-10, "closed-form overlap disagrees with quadrature",
                                 a=a, b=b, region=region, n=n, m=m, closed=exact, quadrature=quad)

    def gram_structure(self):
        rng = self.rng(3)
        cases = [(1, 12, PartitionSpec(0.5, 0.5)), (3, 4, PartitionSpec(0.5, 0.5))]
        for _ in range(10):
            a, b = np.sort(rng.uniform(0.05, 0.95, 2))
            cases.append((1, 8, PartitionSpec(float(a), float(b))))
        for dim, cutoff, part in cases:
            modes = bose_gas.box_modes(dim, cutoff)
            g = self.grams(modes, part)
            total = g.pA + g.pB + g.pC
            _require(np.max(np.abs(total - 1)) <= 1e-12, "probabilities do not sum to 1", partition=repr(part))
            for name, mat in (("gramA", g.gramA), ("gramB", g.gramB), ("gramA*gramB", g.gramA * g.gramB)):
                _require(np.allclose(mat, mat.T, atol=0), f"{name} not symmetric", partition=repr(part))
                _require(np.all(np.diag(mat) == 1.0), f"{name} diagonal not 1", partition=repr(part))
                _require(np.all(np.abs(mat) <= 1.0), f"{name} entries outside [-1, 1]", partition=repr(part))
                lam = float(np.linalg.eigvalsh(mat).min())
                _require(lam >= -1e-10, f"{name} not PSD (conditioning: min eigenvalue {lam:.3e})",
                         partition=repr(part), min_eigenvalue=lam)
            if part.adjacent and part.symmetric:
                n = [m.quantum_numbers[0] for m in modes]
                dev = float(np.max(np.abs(g.gramB - mirror_sign(n) * g.gramA)))
                _require(dev <= 1e-12, "mirror identity violated", deviation=dev)

    # -- negativity -----------------------------------------------------------
    def _oracle_cases(self):
        rng = self.rng(4)
        cases = []
        for cutoff in (1, 2, 4, 8):
            # at cutoff 8 the Grams are only invertible near the half-box cut
            lo_a = 0.45 if cutoff == 8 else 0.25
            cases.append((cutoff, PartitionSpec(0.5, 0.5)))
            for _ in range(10):
                a = float(rng.uniform(lo_a, 0.5))
                b = float(rng.uniform(0.5, 1 - lo_a))
                cases.append((cutoff, PartitionSpec(min(a, b), max(a, b))))
        return cases

    def oracle_equivalence(self):
        temps = (0.1, 0.5, 1.0, 2.0, 3.0)
        for cutoff, part in self._oracle_cases():
            modes = bose_gas.box_modes(1, cutoff)
            g = self.grams(modes, part)
            # 1D analogue of the T_c axis: ground-state gap scale
            scale = 3 * bose_gas.ENERGY_UNIT
            for t in temps:
                state = bose_gas.thermal_state(modes, 10.0, t * scale)
                chi = negativity.chi_vector(state.occupations, g)
                ana = negativity.analytic_negativity(chi, g, part).value
                pt = negativity.pt_oracle(state.occupations, modes, part, g)
                _require(abs(ana - pt.value) <= 1e-9, "closed form and partial-transpose oracle disagree",
                         cutoff=cutoff, a=part.a, b=part.b, T=t * scale, analytic=ana, oracle=pt.value)
                if part.adjacent:
                    _require(pt.negative_eigenvalue_count == 1, "adjacent partition without a unique negative "
                             "eigenvalue", cutoff=cutoff, a=part.a, T=t * scale, count=pt.negative_eigenvalue_count)

    def ground_state_consistency(self):
        rng = self.rng(5)
        parts = [PartitionSpec(0.25, 0.75)] + [PartitionSpec(*map(float, np.sort(rng.uniform(0.05, 0.95, 2))))
                                               for _ in range(9)]
        for part in parts:
            modes = bose_gas.box_modes(1, 1)
            g = self.grams(modes, part)
            gapped = negativity.negativity_gapped(negativity.chi_vector([1.0], g), g).value
            ground = negativity.negativity_ground_state_gapped(g.pA[0], g.pB[0], g.pC[0]).value
            _require(abs(gapped - ground) <= 1e-12, "gapped formula and T=0 form disagree", a=part.a, b=part.b)

    def sweep_ranges_and_uniqueness(self):
        setup, tc, points = self.half_box_sweep()
        grams = self.grams(setup.modes, setup.partition)
        for p in points[::5]:
            _require(0 <= p.chi_norm_squared <= 1 and 0 <= p.analytic.value <= 0.5, "value out of range",
                     T=p.temperature)
            pt = negativity.pt_oracle(p.state.occupations, setup.modes, setup.partition, grams)
            _require(abs(pt.value - p.analytic.value) <= 1e-9, "3D oracle mismatch", T=p.temperature)
            _require(pt.negative_eigenvalue_count == 1, "3D sweep point without a unique negative eigenvalue",
                     T=p.temperature, count=pt.negative_eigenvalue_count)

    def monotonicity_guard(self):
        setup = sweep.prepare(3, 8, 1e4, PartitionSpec(0.5, 0.5))
        tc = setup.critical_temperature
        cold = sweep.sweep_point(setup, 0.25 * tc).analytic.value
        hot = sweep.sweep_point(setup, 2.0 * tc).analytic.value
        _require(cold > hot, "negativity at 0.25 T_c does not exceed that at 2 T_c", cold=cold, hot=hot)

    # -- odlro ----------------------------------------------------------------
    def alpha_is_condensate_fraction(self):
        setup, tc, points = self.half_box_sweep()
        for p in points:
            occ = p.state.occupations
            rep = odlro.odlro_detect(occ, trace=p.state.particle_number)
            _require(rep.lambda_max_fraction == float(occ.max()) / p.state.particle_number,
                     "alpha differs from max occupation / N", T=p.temperature)

    def offdiagonal_monotone(self):
        setup, tc, points = self.half_box_sweep()
        window = [p for p in points if 0.5 <= p.temperature / tc <= 1.25]
        vals = [odlro.rho1_position(p.state.occupations, setup.modes, 0.25, 0.75) for p in window]
        # window is ordered by increasing T: values must fall
        _require(all(x > y for x, y in zip(vals, vals[1:])), "off-diagonal value not monotone through T_c",
                 values=vals)

    def kernel_cauchy_schwarz(self):
        setup, tc, points = self.half_box_sweep()
        rng = self.rng(6)
        pairs = rng.uniform(0, 1, size=(20, 2, 3))
        for p in points[::7]:
            occ = p.state.occupations
            for x, xp in pairs:
                off = odlro.rho1_position(occ, setup.modes, x, xp)
                dx = odlro.rho1_position(occ, setup.modes, x, x)
                dxp = odlro.rho1_position(occ, setup.modes, xp, xp)
                _require(dx >= 0 and abs(off) <= math.sqrt(dx * dxp) + 1e-12, "kernel not positive",
                         T=p.temperature)

    # -- cli ------------------------------------------------------------------
    def csv_determinism(self):
        rows = sweep.extract_rows(sweep.default_g_grid(8))
        texts = []
        for _ in range(2):
            buf = io.StringIO()
            output.write_csv(buf, sweep.EXTRACT_COLUMNS, rows, {"subcommand": "extract"})
            texts.append(buf.getvalue())
        _require(texts[0] == texts[1], "CSV output not deterministic")
        cell = texts[0].splitlines()[2].split(",")[1]
        _require("e" in cell and "E" not in cell and len(cell.split("e")[0].replace("-", "").replace(".", "")) == 17,
                 "numeric cell not in 17-digit scientific form", cell=cell)

    CHECKS: tuple[tuple[str, str], ...] = (
        ("extraction: analytic == eigensolver on 100 g points", "extraction_oracle"),
        ("extraction: norm preservation and group property", "extraction_norm_and_group"),
        ("extraction: pi-periodic, symmetric about pi/2", "extraction_symmetry"),
        ("bose_gas: canonical vs grand-canonical condensate fraction", "ensemble_agreement"),
        ("bose_gas: occupancy sum == N, occupations decreasing", "particle_number"),
        ("geometry: closed-form overlaps vs adaptive quadrature", "overlaps_vs_quadrature"),
        ("geometry: Gram PSD, unit diagonal, probabilities, mirror identity", "gram_structure"),
        ("negativity: oracle equivalence (adjacent and gapped)", "oracle_equivalence"),
        ("negativity: gapped formula == T=0 closed form", "ground_state_consistency"),
        ("negativity: ranges and unique negative eigenvalue on 3D sweep", "sweep_ranges_and_uniqueness"),
        ("negativity: N(0.25 T_c) > N(2 T_c)", "monotonicity_guard"),
        ("odlro: alpha == max occupation / N", "alpha_is_condensate_fraction"),
        ("odlro: off-diagonal value monotone through T_c", "offdiagonal_monotone"),
        ("odlro: kernel Cauchy-Schwarz bound", "kernel_cauchy_schwarz"),
        ("cli: deterministic 17-digit CSV", "csv_determinism"),
    )

    def run(self, progress: Optional[Callable[[CheckResult], None]] = None) -> list[CheckResult]:
        results = []
        for name, attr in self.CHECKS:
            try:
                getattr(self, attr)()
            except _Failed as exc:
                res = CheckResult(name, False, str(exc), exc.case)
            except Exception as exc:  # a crash inside a check is a failure of that check
                res = CheckResult(name, False, f"{type(exc).__name__}: {exc}",
                                  {"traceback": traceback.format_exc(limit=3)})
            else:
                res = CheckResult(name, True)
            results.append(res)
            if progress is not None:
                progress(res)
        return results


def run_validation(seed: int = 0, fault: Optional[str] = None, progress=None) -> list[CheckResult]:
    return Validator(seed, fault).run(progress)
