"""Ideal Bose gas in a hard-wall box.

Units are hbar = m = k_B = L = 1, so a mode with quantum numbers
(n_1, ..., n_d) has energy (pi^2 / 2) * sum(n_i^2).

The grand-canonical route (``solve_chemical_potential`` + ``occupations``)
scales to large N; ``canonical_occupations_bruteforce`` is an exhaustive
small-N reference.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import zeta

from odlro_lab.errors import SolverFailure

ENERGY_UNIT = math.pi**2 / 2
ZETA_3_2 = float(zeta(1.5))

GRAND_CANONICAL = "grand_canonical"
CANONICAL_BRUTEFORCE = "canonical_bruteforce"

# exhaustive canonical regime
MAX_BRUTEFORCE_PARTICLES = 6
MAX_BRUTEFORCE_MODES = 8

# Boltzmann factor e^-40 ~ 4e-18 below the relative solver tolerance
_THERMAL_WINDOW = 40.0
_MAX_BISECTIONS = 400
_MAX_EXPANSIONS = 200


@dataclass(frozen=True)
class Mode:
    """Single-particle eigenstate of the unit box."""

    quantum_numbers: tuple[int, ...]
    energy: float

    @classmethod
    def from_quantum_numbers(cls, quantum_numbers: Sequence[int]) -> "Mode":
        qn = tuple(int(n) for n in quantum_numbers)
        if not qn or min(qn) < 1:
            raise ValueError(f"quantum numbers must be >= 1, got {qn}")
        return cls(qn, ENERGY_UNIT * sum(n * n for n in qn))

    @property
    def dimension(self) -> int:
        return len(self.quantum_numbers)


@dataclass(frozen=True)
class EnergyLevels:
    """Distinct energies with their degeneracies (compressed spectrum)."""

    energies: np.ndarray
    degeneracies: np.ndarray


@dataclass(frozen=True)
class ThermalState:
    """Mean occupations of a (possibly truncated) mode list at one temperature.

    ``tail_weight`` is the fraction of the N particles that sit in modes
    outside ``occupations`` (zero when the solve used the same mode list).
    """

    temperature: float
    particle_number: float
    chemical_potential: float
    occupations: np.ndarray
    ensemble: str = GRAND_CANONICAL
    tail_weight: float = 0.0

    @property
    def condensate_fraction(self) -> float:
        return float(self.occupations[0] / self.particle_number)

    @property
    def normalized(self) -> np.ndarray:
        """Occupations renormalized to sum to one over the retained modes."""
        return self.occupations / self.occupations.sum()


def box_modes(dimension: int, cutoff: int) -> list[Mode]:
    """All modes with 1 <= n_i <= cutoff, ascending in energy.

    Ties are broken lexicographically by quantum numbers.
    """
    if dimension not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {dimension}")
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    qns = itertools.product(range(1, cutoff + 1), repeat=dimension)
    modes = [Mode.from_quantum_numbers(q) for q in qns]
    modes.sort(key=lambda m: (sum(n * n for n in m.quantum_numbers), m.quantum_numbers))
    return modes


@functools.lru_cache(maxsize=64)
def box_levels(dimension: int, cutoff: int) -> EnergyLevels:
    """Compressed spectrum of ``box_modes(dimension, cutoff)``.

    Degeneracies are counted by histogramming sums of squares, which keeps
    per-axis cutoffs in the hundreds cheap in 3D.
    """
    if dimension not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {dimension}")
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    squares = np.arange(1, cutoff + 1, dtype=np.int64) ** 2
    counts = np.bincount(squares)
    for _ in range(dimension - 1):
        grown = np.zeros(counts.size + squares[-1], dtype=np.int64)
        for s in squares:
            grown[s : s + counts.size] += counts
        counts = grown
    sums = np.nonzero(counts)[0]
    energies = ENERGY_UNIT * sums.astype(float)
    degeneracies = counts[sums].astype(float)
    energies.flags.writeable = False  # shared through the cache
    degeneracies.flags.writeable = False
    return EnergyLevels(energies, degeneracies)


def _spectrum(modes) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(modes, EnergyLevels):
        return np.asarray(modes.energies, float), np.asarray(modes.degeneracies, float)
    energies = np.array([m.energy if isinstance(m, Mode) else m for m in modes], dtype=float)
    return energies, np.ones_like(energies)


def occupations(modes, mu: float, temperature: float) -> np.ndarray:
    """Bose-Einstein mean occupations 1 / (exp((E_k - mu)/T) - 1)."""
    energies, _ = _spectrum(modes)
    if energies.size == 0:
        raise ValueError("empty mode list")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if mu >= energies.min():
        raise ValueError(f"chemical potential {mu} must lie below the ground energy {energies.min()}")
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1((energies - mu) / temperature)


def solve_chemical_potential(modes, particle_number: float, temperature: float) -> float:
    """Chemical potential that puts ``particle_number`` bosons into ``modes``.

    Deterministic bisection on (mu_low, E_0). The lower end starts at
    E_0 - max(10 T, 10 E_0 + 1) and is pushed down geometrically until the
    occupancy sum drops below N. ``modes`` may be a mode list, a sequence of
    energies, or an :class:`EnergyLevels`.
    """
    energies, weights = _spectrum(modes)
    if energies.size == 0:
        raise ValueError("empty mode list")
    if particle_number <= 0 or temperature <= 0:
        raise ValueError("particle number and temperature must be positive")
    e0 = energies.min()

    def excess(mu):
        with np.errstate(over="ignore"):
            return float(weights @ (1.0 / np.expm1((energies - mu) / temperature))) - particle_number

    span = max(10 * temperature, 10 * e0 + 1)
    lo, hi = e0 - span, e0
    for _ in range(_MAX_EXPANSIONS):
        if excess(lo) < 0:
            break
        span *= 2
        lo = e0 - span
    else:
        raise SolverFailure("could not bracket the chemical potential from below", (lo, hi))

    for _ in range(_MAX_BISECTIONS):
        mid = lo + 0.5 * (hi - lo)
        if not lo < mid < hi:
            break
        f = excess(mid)
        if abs(f) <= 1e-12 * particle_number:
            return mid
        if f > 0:
            hi = mid
        else:
            lo = mid
    mu = lo if hi == e0 else min((lo, hi), key=lambda m: abs(excess(m)))
    if abs(excess(mu)) > 1e-9 * particle_number:
        raise SolverFailure("bisection stalled before reaching 1e-9 relative accuracy", (lo, hi))
    return mu


def thermodynamic_cutoff(temperature: float, minimum: int = 1) -> int:
    """Per-axis cutoff beyond which every mode has E - E_0 > 40 T."""
    n = math.isqrt(int(math.ceil(2 * _THERMAL_WINDOW * temperature / math.pi**2))) + 2
    return max(minimum, n)


def thermal_state(modes: Sequence[Mode], particle_number: float, temperature: float) -> ThermalState:
    """Grand-canonical state of the box gas, reported on a truncated mode list.

    The chemical potential is solved on a per-axis cutoff large enough that
    every neglected mode sits more than 40 T above the ground state, so
    ``tail_weight`` measures how much of the gas lives outside ``modes``.
    """
    if not modes:
        raise ValueError("empty mode list")
    dimension = modes[0].dimension
    cutoff = max(max(m.quantum_numbers) for m in modes)
    levels = box_levels(dimension, thermodynamic_cutoff(temperature, minimum=cutoff))
    mu = solve_chemical_potential(levels, particle_number, temperature)
    occ = occupations(modes, mu, temperature)
    tail = 1.0 - float(occ.sum()) / particle_number
    return ThermalState(temperature, particle_number, mu, occ, GRAND_CANONICAL, tail)


def canonical_occupations_bruteforce(modes, particle_number: int, temperature: float) -> np.ndarray:
    """Exact canonical mean occupations by enumerating every configuration.

    Each configuration (n_1, ..., n_M) with sum N is weighted by
    exp(-E_total / T); weights are taken relative to the all-in-ground-state
    configuration so they never underflow at low T.
    """
    energies, _ = _spectrum(modes)
    n_modes = energies.size
    if n_modes == 0:
        raise ValueError("empty mode list")
    if not 1 <= particle_number <= MAX_BRUTEFORCE_PARTICLES or n_modes > MAX_BRUTEFORCE_MODES:
        raise ValueError(
            f"exhaustive regime is N <= {MAX_BRUTEFORCE_PARTICLES} and at most "
            f"{MAX_BRUTEFORCE_MODES} modes (got N={particle_number}, {n_modes} modes)"
        )
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    configs = np.array(
        [np.bincount(c, minlength=n_modes) for c in
         itertools.combinations_with_replacement(range(n_modes), int(particle_number))],
        dtype=float,
    )
    e_min = particle_number * energies.min()
    weights = np.exp(-(configs @ energies - e_min) / temperature)
    return weights @ configs / weights.sum()


def critical_temperature(particle_number: float, volume: float = 1.0, dimension: int = 3) -> float:
    """Thermodynamic-limit condensation temperature 2 pi (n / zeta(3/2))^(2/3)."""
    if dimension != 3:
        raise ValueError("the ideal box gas only condenses at fixed density in 3D")
    if particle_number < 1 or volume <= 0:
        raise ValueError("need N >= 1 and a positive volume")
    return 2 * math.pi * (particle_number / (volume * ZETA_3_2)) ** (2.0 / 3.0)
