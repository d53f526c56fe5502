"""Diagnostics for off-diagonal long-range order in rho_1.

Two views of the same phenomenon: a macroscopic eigenvalue fraction
(``odlro_detect``) and a position-space kernel rho_1(x, x') that stays
large at large separation (``offdiagonal_scan``).

Everything is trace-one: multiply by N for the extensive normalization
Tr rho_1 = N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from odlro_lab.bose_gas import Mode

DEFAULT_THRESHOLD = 0.1
_NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class OdlroReport:
    lambda_max_fraction: float
    threshold: float
    flag: bool
    spectrum_head: tuple[float, ...]


@dataclass(frozen=True)
class OffDiagonalScan:
    x: np.ndarray
    x_prime: np.ndarray
    values: np.ndarray  # rho_1(x, x') * volume
    volume: float = 1.0

    @property
    def separations(self) -> np.ndarray:
        diff = self.x_prime - self.x
        return np.abs(diff) if diff.ndim == 1 else np.linalg.norm(diff, axis=1)


def _points(x, dimension: int, transverse: float = 0.5) -> np.ndarray:
    """Promote a scalar coordinate to a point with the other axes at ``transverse``."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.size == dimension:
        return arr
    if arr.size == 1:
        out = np.full(dimension, transverse)
        out[0] = arr[0]
        return out
    raise ValueError(f"point {x!r} does not fit a {dimension}D box")


def _mode_values(modes: Sequence[Mode], point: np.ndarray) -> np.ndarray:
    n = np.array([m.quantum_numbers for m in modes], dtype=float)
    return np.prod(np.sqrt(2.0) * np.sin(np.pi * n * point), axis=1)


def rho1_position(occupations, modes: Sequence[Mode], x, x_prime) -> float:
    """sum_k (n_k / N) phi_k(x) phi_k(x'), with N the sum of ``occupations``."""
    occ = np.asarray(occupations, dtype=float)
    if occ.size != len(modes) or occ.size == 0:
        raise ValueError("need one occupation per mode")
    dim = modes[0].dimension
    c = occ / occ.sum()
    return float(c @ (_mode_values(modes, _points(x, dim)) * _mode_values(modes, _points(x_prime, dim))))


def antipodal_path(separations: Iterable[float], center: float = 0.5) -> list[tuple[float, float]]:
    """Pairs (c - s/2, c + s/2) along the split axis."""
    return [(center - s / 2, center + s / 2) for s in separations]


DEFAULT_SEPARATIONS = tuple(np.round(np.linspace(0.0, 0.9, 10), 12))


def offdiagonal_scan(occupations, modes: Sequence[Mode], path=None, volume: float = 1.0) -> OffDiagonalScan:
    """Evaluate rho_1 * V along ``path`` (default: antipodal pairs about the center)."""
    if path is None:
        path = antipodal_path(DEFAULT_SEPARATIONS)
    path = list(path)
    if not path:
        raise ValueError("empty scan path")
    dim = modes[0].dimension
    xs = np.array([_points(p[0], dim) for p in path])
    xps = np.array([_points(p[1], dim) for p in path])
    vals = np.array([rho1_position(occupations, modes, a, b) * volume for a, b in zip(xs, xps)])
    if dim == 1:
        xs, xps = xs[:, 0], xps[:, 0]
    return OffDiagonalScan(xs, xps, vals, volume)


def odlro_detect(spectrum, threshold: float = DEFAULT_THRESHOLD, trace: Optional[float] = None,
                 head: int = 5) -> OdlroReport:
    """Flag a dominant eigenvalue: alpha = lambda_max / trace >= threshold.

    ``spectrum`` is any eigenvalue list of a reduced density matrix. For the
    ideal gas the occupations themselves are the spectrum of rho_1; pass
    ``trace=N`` when the list is truncated so alpha stays max(n_k) / N.
    """
    lam = np.asarray(spectrum, dtype=float).ravel()
    if lam.size == 0:
        raise ValueError("empty spectrum")
    if lam.min() < -_NEGATIVE_TOL:
        raise ValueError(f"eigenvalue {lam.min()!r} is negative: not a density operator")
    if lam.max() <= 0:
        raise ValueError("spectrum has no positive eigenvalue")
    total = float(lam.sum()) if trace is None else float(trace)
    alpha = float(lam.max()) / total
    top = np.sort(lam)[::-1][:head] / total
    return OdlroReport(alpha, threshold, alpha >= threshold, tuple(float(v) for v in top))
