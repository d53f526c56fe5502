"""Slab partitions of the unit box and the overlap data they induce.

The box is cut along one axis into A = [0, a], C = [a, b] and B = [b, 1].
Restricted to a region M, each eigenfunction phi_k leaves a piece of
weight p^(M)_k; the normalized pieces |M_k> are generally not orthogonal,
and their Gram matrices feed the negativity formulas.

All split-axis integrals use the closed-form primitives of
2 sin(n pi x) sin(m pi x); the transverse axes integrate over the whole
box and contribute Kronecker deltas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from odlro_lab.bose_gas import Mode

REGIONS = ("A", "B", "C")


@dataclass(frozen=True)
class PartitionSpec:
    """A | C | B split at fractions ``a`` <= ``b`` along ``axis``."""

    a: float = 0.5
    b: float = 0.5
    axis: int = 0

    def __post_init__(self):
        if not 0.0 < self.a <= self.b < 1.0:
            raise ValueError(f"partition needs 0 < a <= b < 1, got a={self.a}, b={self.b}")
        if self.axis < 0:
            raise ValueError(f"axis must be non-negative, got {self.axis}")

    @property
    def adjacent(self) -> bool:
        return self.a == self.b

    @property
    def symmetric(self) -> bool:
        return self.a == 1.0 - self.b

    def bounds(self, region: str) -> tuple[float, float]:
        if region == "A":
            return 0.0, self.a
        if region == "B":
            return self.b, 1.0
        if region == "C":
            return self.a, self.b
        raise ValueError(f"unknown region {region!r}; expected one of {REGIONS}")


@dataclass(frozen=True)
class GramSet:
    """Partition probabilities and normalized-overlap Grams for a mode list."""

    pA: np.ndarray
    pB: np.ndarray
    pC: np.ndarray
    gramA: np.ndarray
    gramB: np.ndarray

    def __len__(self):
        return self.pA.size


def mode_wavefunction_value(mode: Mode, x) -> float:
    """prod_i sqrt(2) sin(n_i pi x_i), the normalized box eigenfunction."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if xs.size != mode.dimension:
        raise ValueError(f"point has {xs.size} coordinates, mode lives in {mode.dimension}D")
    n = np.asarray(mode.quantum_numbers, dtype=float)
    return float(np.prod(math.sqrt(2.0) * np.sin(n * math.pi * xs)))


def _primitive(n, m, x):
    """Antiderivative of 2 sin(n pi x) sin(m pi x), vectorized over n, m."""
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    diff = n - m
    total = n + m
    same = diff == 0
    safe = np.where(same, 1.0, diff)
    cross = np.sin(safe * math.pi * x) / (safe * math.pi) - np.sin(total * math.pi * x) / (total * math.pi)
    diag = x - np.sin(2 * n * math.pi * x) / (2 * n * math.pi)
    return np.where(same, diag, cross)


def axis_integral(n, m, lo: float, hi: float):
    """Integral of 2 sin(n pi x) sin(m pi x) over [lo, hi]."""
    return _primitive(n, m, hi) - _primitive(n, m, lo)


def _split_number(mode: Mode, partition: PartitionSpec) -> int:
    if partition.axis >= mode.dimension:
        raise ValueError(f"cannot split axis {partition.axis} of a {mode.dimension}D mode")
    return mode.quantum_numbers[partition.axis]


def partition_probabilities(mode: Mode, partition: PartitionSpec) -> tuple[float, float, float]:
    """Weights (pA, pB, pC) of |phi_k|^2 in the three regions."""
    n = _split_number(mode, partition)
    return tuple(float(axis_integral(n, n, *partition.bounds(r))) for r in ("A", "B", "C"))


def _transverse(mode: Mode, axis: int) -> tuple[int, ...]:
    return mode.quantum_numbers[:axis] + mode.quantum_numbers[axis + 1 :]


def overlap(mode_k: Mode, mode_l: Mode, region: str, partition: PartitionSpec) -> float:
    """Normalized overlap <M_k|M_l> of the two modes restricted to ``region``."""
    if region not in ("A", "B"):
        raise ValueError(f"overlaps are defined for regions A and B, got {region!r}")
    n = _split_number(mode_k, partition)
    m = _split_number(mode_l, partition)
    lo, hi = partition.bounds(region)
    p_k = float(axis_integral(n, n, lo, hi))
    p_l = float(axis_integral(m, m, lo, hi))
    if p_k <= 0.0 or p_l <= 0.0:
        raise ValueError(f"region {region} carries no weight of one of the modes; normalized piece undefined")
    if _transverse(mode_k, partition.axis) != _transverse(mode_l, partition.axis):
        return 0.0
    value = float(axis_integral(n, m, lo, hi)) / math.sqrt(p_k * p_l)
    return min(1.0, max(-1.0, value))


def gram_matrices(modes: Sequence[Mode], partition: PartitionSpec) -> GramSet:
    """Assemble probabilities and both Gram matrices for ``modes``.

    At the half-box split the reflection x -> 1 - x gives
    gramB_kl = (-1)^(n_k + n_l) gramA_kl; this identity is checked and a
    violation raises.
    """
    if len(modes) == 0:
        raise ValueError("empty mode list")
    axis = partition.axis
    n = np.array([_split_number(m, partition) for m in modes], dtype=float)
    probs = {r: axis_integral(n, n, *partition.bounds(r)) for r in REGIONS}

    transverse = [_transverse(m, axis) for m in modes]
    labels = {t: i for i, t in enumerate(sorted(set(transverse)))}
    tid = np.array([labels[t] for t in transverse])
    same = tid[:, None] == tid[None, :]

    grams = {}
    for r in ("A", "B"):
        p = probs[r]
        if np.any(p <= 0.0):
            raise ValueError(f"region {r} carries no weight of some mode; normalized piece undefined")
        raw = axis_integral(n[:, None], n[None, :], *partition.bounds(r))
        g = np.where(same, raw, 0.0) / np.sqrt(np.outer(p, p))
        g = 0.5 * (g + g.T)
        np.fill_diagonal(g, 1.0)
        grams[r] = np.clip(g, -1.0, 1.0)

    gs = GramSet(probs["A"], probs["B"], probs["C"], grams["A"], grams["B"])
    if partition.adjacent and partition.symmetric:
        check_mirror_identity(gs, n)
    return gs


def mirror_sign(split_numbers) -> np.ndarray:
    n = np.asarray(split_numbers, dtype=int)
    return np.where((n[:, None] + n[None, :]) % 2 == 0, 1.0, -1.0)


def check_mirror_identity(grams: GramSet, split_numbers, tol: float = 1e-12) -> float:
    """Max deviation from gramB = (-1)^(n+m) gramA; raises beyond ``tol``."""
    dev = float(np.max(np.abs(grams.gramB - mirror_sign(split_numbers) * grams.gramA)))
    if dev > tol:
        raise ValueError(f"half-box mirror identity violated by {dev:.3e}")
    return dev
