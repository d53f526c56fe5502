"""Negativity of the single-particle density matrix across a spatial cut.

rho_1 = sum_k c_k |phi_k><phi_k| with c_k = <n_k>/N. Splitting the box
into A | C | B and tracing out C leaves a two-party state of "particle in
A or vacuum" times "particle in B or vacuum". Transposing the B factor maps
the A<->B coherences onto a vacuum <-> (A-particle, B-particle) block whose
single negative eigenvalue has the closed forms implemented here.

``pt_oracle`` reaches the same number without any of that algebra: it
writes rho_1 out in an orthonormal basis, transposes the B indices and
diagonalizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from odlro_lab.errors import ConditioningError, InvariantViolation
from odlro_lab.geometry import GramSet, PartitionSpec

ANALYTIC_ADJACENT = "analytic_adjacent"
ANALYTIC_GAPPED = "analytic_gapped"
ANALYTIC_GROUND_STATE = "analytic_ground_state"
PT_ORACLE = "pt_oracle"

GRAM_CONDITION_FLOOR = 1e-12
# largest mode count written out on the full (1 + M)^2 tensor space
FULL_TENSOR_MAX_MODES = 32
_RANGE_SLACK = 1e-12


@dataclass(frozen=True)
class ChiVector:
    """Coefficients of |chi> (``c``), of |delta> (``d``) and the vacuum weight ``q``."""

    c: np.ndarray
    d: np.ndarray
    q: float

    def __post_init__(self):
        if np.any(self.c < 0):
            raise ValueError("chi coefficients must be non-negative")
        if abs(float(self.c.sum()) - 1.0) > 1e-9:
            raise ValueError(f"chi coefficients must sum to 1, got {self.c.sum()!r}")
        if not -_RANGE_SLACK <= self.q <= 1 + _RANGE_SLACK:
            raise ValueError(f"vacuum weight q={self.q} outside [0, 1]")


@dataclass(frozen=True)
class NegativityReport:
    value: float
    method: str
    temperature: Optional[float] = None
    partition: Optional[PartitionSpec] = None
    mode_cutoff: Optional[int] = None
    tail_weight: Optional[float] = None
    negative_eigenvalue_count: Optional[int] = None


def chi_vector(occupations, grams: GramSet) -> ChiVector:
    """Build |chi>, |delta> and q from mean occupations.

    Occupations are renormalized over the supplied modes, so truncated mode
    lists still give a trace-one rho_1.
    """
    occ = np.asarray(occupations, dtype=float)
    if occ.shape != grams.pA.shape:
        raise ValueError(f"{occ.size} occupations for {grams.pA.size} modes")
    c = occ / occ.sum()
    d = c * np.sqrt(grams.pA * grams.pB)
    q = float(c @ grams.pC)
    return ChiVector(c, d, min(max(q, 0.0), 1.0))


def _check_range(name, value, upper):
    if not -_RANGE_SLACK <= value <= upper + _RANGE_SLACK:
        raise InvariantViolation(f"{name}={value!r} outside [0, {upper}]")
    return min(max(value, 0.0), upper)


def _hadamard_form(x, grams: GramSet) -> float:
    if x.shape != grams.pA.shape or grams.gramA.shape != (x.size, x.size):
        raise ValueError("coefficient and Gram dimensions disagree")
    return float(x @ (grams.gramA * grams.gramB) @ x)


def chi_norm_squared(chi: ChiVector, grams: GramSet) -> float:
    """<chi|chi> = sum_kl c_k c_l gramA_kl gramB_kl, always in [0, 1]."""
    return _check_range("<chi|chi>", _hadamard_form(chi.c, grams), 1.0)


def delta_norm_squared(chi: ChiVector, grams: GramSet) -> float:
    return _check_range("<delta|delta>", _hadamard_form(chi.d, grams), 0.25)


def _report(value, method, **kw):
    return NegativityReport(_check_range("negativity", value, 0.5), method, **kw)


def negativity_adjacent(chi: ChiVector, grams: GramSet) -> NegativityReport:
    """1/2 sqrt(<chi|chi>) for partitions with no gap region.

    Off the half-box split the pieces carry amplitudes sqrt(pA_k), sqrt(pB_k)
    instead of 1/sqrt(2), and the value becomes sqrt(<delta|delta>), which
    coincides with 1/2 sqrt(<chi|chi>) when pA = pB = 1/2.
    """
    if np.any(grams.pC > 1e-12):
        raise ValueError("gapped partition: use negativity_gapped")
    if np.all(np.abs(grams.pA - 0.5) <= 1e-12) and np.all(np.abs(grams.pB - 0.5) <= 1e-12):
        value = 0.5 * math.sqrt(chi_norm_squared(chi, grams))
    else:
        value = math.sqrt(delta_norm_squared(chi, grams))
    return _report(value, ANALYTIC_ADJACENT)


def negativity_gapped(chi: ChiVector, grams: GramSet) -> NegativityReport:
    """1/2 (sqrt(4 <delta|delta> + q^2) - q) for A | C | B partitions."""
    dd = delta_norm_squared(chi, grams)
    q = chi.q
    # 2 dd / (sqrt(4 dd + q^2) + q) avoids cancellation when q >> dd
    denom = math.sqrt(4 * dd + q * q) + q
    value = 0.0 if denom == 0.0 else 2 * dd / denom
    return _report(value, ANALYTIC_GAPPED)


def negativity_ground_state_gapped(p0A: float, p0B: float, p0C: float) -> NegativityReport:
    """Zero-temperature negativity 1/2 p0C (sqrt(1 + 4 p0A p0B / p0C^2) - 1).

    Continuous at p0C = 0, where it equals sqrt(p0A p0B).
    """
    if min(p0A, p0B, p0C) < 0 or abs(p0A + p0B + p0C - 1.0) > 1e-9:
        raise ValueError(f"probabilities ({p0A}, {p0B}, {p0C}) must be non-negative and sum to 1")
    p0A, p0B, p0C = float(p0A), float(p0B), float(p0C)
    prod = p0A * p0B
    # rationalized: 2 p0A p0B / (sqrt(p0C^2 + 4 p0A p0B) + p0C), no division by p0C
    denom = math.sqrt(p0C * p0C + 4 * prod) + p0C
    value = 0.0 if denom == 0.0 else 2 * prod / denom
    return _report(value, ANALYTIC_GROUND_STATE)


# --- generic partial transpose -------------------------------------------

def partial_transpose(rho: np.ndarray, dims: Sequence[int], sys: int = 1) -> np.ndarray:
    """Transpose subsystem ``sys`` of an operator on a tensor-product space."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if rho.shape != (math.prod(dims),) * 2:
        raise ValueError(f"matrix of shape {rho.shape} does not act on dims {dims}")
    t = rho.reshape(dims + dims)
    perm = list(range(2 * n))
    perm[sys], perm[n + sys] = perm[n + sys], perm[sys]
    return t.transpose(perm).reshape(rho.shape)


def pt_spectrum_negativity(rho_pt: np.ndarray, tol: float = 1e-12) -> tuple[float, int]:
    """Sum of |negative eigenvalues| of a Hermitian matrix and their count."""
    w = np.linalg.eigvalsh(rho_pt)
    neg = w[w < -tol]
    return float(-neg.sum()) + 0.0, int(neg.size)


def matrix_negativity(rho: np.ndarray, dims: Sequence[int], sys: int = 1, tol: float = 1e-12) -> float:
    """Negativity of a bipartite density matrix under transposition of ``sys``."""
    return pt_spectrum_negativity(partial_transpose(rho, dims, sys), tol)[0]


# --- Lowdin-basis oracle ---------------------------------------------------

def lowdin_coordinates(gram: np.ndarray, label: str = "Gram") -> np.ndarray:
    """Coordinates of non-orthogonal unit vectors in their Lowdin basis.

    The symmetric orthonormal basis is e = v G^(-1/2); vector v_k then has
    coordinates G^(1/2)[:, k]. Gram eigenvalues below 1e-12 are rejected.
    """
    w, u = np.linalg.eigh(gram)
    if w.min() < GRAM_CONDITION_FLOOR:
        raise ConditioningError(f"{label} matrix numerically singular, cannot orthogonalize", float(w.min()))
    return (u * np.sqrt(w)) @ u.T


def _coherent_parts(occupations, grams: GramSet):
    occ = np.asarray(occupations, dtype=float)
    if occ.shape != grams.pA.shape:
        raise ValueError(f"{occ.size} occupations for {grams.pA.size} modes")
    c = occ / occ.sum()
    xa = lowdin_coordinates(grams.gramA, "gramA")
    xb = lowdin_coordinates(grams.gramB, "gramB")
    amp_a = xa * np.sqrt(c * grams.pA)  # column k: sqrt(c_k pA_k) |A_k>
    amp_b = xb * np.sqrt(c * grams.pB)
    vacuum = float(c @ grams.pC)
    return amp_a, amp_b, vacuum


def rho_ab_full(occupations, grams: GramSet) -> np.ndarray:
    """rho_1 with C traced out, on the full (1 + M) x (1 + M) local spaces.

    Local index 0 is the vacuum of that region; 1..M the Lowdin basis.
    """
    amp_a, amp_b, vacuum = _coherent_parts(occupations, grams)
    m = amp_a.shape[0]
    d = m + 1
    vecs = np.zeros((amp_a.shape[1], d, d))
    vecs[:, 1:, 0] = amp_a.T
    vecs[:, 0, 1:] = amp_b.T
    flat = vecs.reshape(amp_a.shape[1], d * d)
    rho = flat.T @ flat
    rho[0, 0] += vacuum
    return rho


def _compressed_pt(occupations, grams: GramSet) -> np.ndarray:
    """Partial transpose restricted to a subspace containing its range.

    rho lives on vacuum (+) A-particle (+) B-particle. Transposing B sends
    each coherence |e_i, vac><vac, f_j| to |e_i, f_j><vac, vac|, so the
    two-particle sector is reached only along X = sum_ij X_ij |e_i f_j>,
    X being the A/B coherence block. Basis: [vac, A (M), B (M), X / |X|].
    """
    amp_a, amp_b, vacuum = _coherent_parts(occupations, grams)
    m = amp_a.shape[0]
    single = np.vstack([amp_a, amp_b])
    rho = single @ single.T  # on A (+) B particle sectors
    cross = rho[:m, m:].copy()

    dim = 2 * m + 2
    out = np.zeros((dim, dim))
    out[0, 0] = vacuum
    out[1 : m + 1, 1 : m + 1] = rho[:m, :m]
    out[m + 1 : 2 * m + 1, m + 1 : 2 * m + 1] = rho[m:, m:].T
    norm = float(np.linalg.norm(cross))
    out[-1, 0] = out[0, -1] = norm
    return out


def pt_oracle(
    occupations,
    modes: Sequence,
    partition: PartitionSpec,
    grams: GramSet,
    *,
    full_tensor: Optional[bool] = None,
    tol: float = 1e-12,
) -> NegativityReport:
    """Negativity of rho_1 by explicit partial transposition and eigensolve.

    Up to 32 modes the state is written on the whole (1 + M)^2-dimensional
    two-region space and the B indices are literally swapped. Beyond that
    the transpose is restricted to the (2M + 2)-dimensional subspace that
    contains its range, which leaves every nonzero eigenvalue unchanged.
    """
    m = len(grams)
    if len(modes) != m:
        raise ValueError(f"{len(modes)} modes but Grams for {m}")
    if full_tensor is None:
        full_tensor = m <= FULL_TENSOR_MAX_MODES
    if full_tensor:
        rho = rho_ab_full(occupations, grams)
        rho_pt = partial_transpose(rho, (m + 1, m + 1), sys=1)
    else:
        rho_pt = _compressed_pt(occupations, grams)
    value, count = pt_spectrum_negativity(rho_pt, tol)
    return _report(value, PT_ORACLE, partition=partition, negative_eigenvalue_count=count)


def analytic_negativity(chi: ChiVector, grams: GramSet, partition: PartitionSpec) -> NegativityReport:
    """Dispatch to the adjacent or gapped closed form."""
    if partition.adjacent:
        return negativity_adjacent(chi, grams)
    return negativity_gapped(chi, grams)
