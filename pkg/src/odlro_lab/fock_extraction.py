"""Extracting entanglement from a single massive particle.

A particle in a well, split into an A half and a B half, meets two boxes
that each hold one particle. A delta pulse of strength g merges the well
particle with a box particle into a molecule. Starting from one particle
per box, the dynamics never leaves four configurations:

    0  well particle in A,  both box particles present
    1  well particle in B,  both box particles present
    2  well empty,          molecule in box A, particle in box B
    3  well empty,          particle in box A, molecule in box B

The coupling only swaps 0 <-> 2 and 1 <-> 3, so it squares to the identity
and exp(igV) = cos(g) + i sin(g) V exactly.

Box qubits use up = particle (no molecule) and down = molecule (no
particle), ordered |uu>, |ud>, |du>, |dd> with box A first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from odlro_lab.negativity import matrix_negativity

CONFIGURATIONS = (
    "well_A+box_A_particle+box_B_particle",
    "well_B+box_A_particle+box_B_particle",
    "box_A_molecule+box_B_particle",
    "box_A_particle+box_B_molecule",
)

COUPLING = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ],
    dtype=complex,
)

# (well index, box-qubit index); well: 0 = A half, 1 = B half, 2 = empty
_EMBEDDING = ((0, 0), (1, 0), (2, 2), (2, 1))
_UP_UP, _UP_DOWN, _DOWN_UP, _DOWN_DOWN = range(4)


@dataclass(frozen=True)
class ProtocolState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (4,):
            raise ValueError("protocol states live on exactly four configurations")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_dict(self) -> dict[str, complex]:
        return dict(zip(CONFIGURATIONS, self.amplitudes.tolist()))


def build_initial_state() -> ProtocolState:
    """Well particle split evenly over the halves, no molecules."""
    h = 1 / math.sqrt(2)
    return ProtocolState(np.array([h, h, 0, 0], dtype=complex))


def coupling_propagator(g: float) -> np.ndarray:
    return math.cos(g) * np.eye(4) + 1j * math.sin(g) * COUPLING


def apply_coupling(state: ProtocolState, g: float) -> ProtocolState:
    """exp(i g V) applied to ``state``."""
    return ProtocolState(coupling_propagator(g) @ state.amplitudes)


def reduced_box_state(state: ProtocolState) -> np.ndarray:
    """Trace out the well particle, leaving a 4x4 state of the two boxes."""
    psi = np.zeros((3, 4), dtype=complex)
    for amp, (well, boxes) in zip(state.amplitudes, _EMBEDDING):
        psi[well, boxes] += amp
    return psi.T @ psi.conj()


def analytic_extraction_negativity(g: float) -> float:
    """(sqrt(cos^4 g + sin^4 g) - cos^2 g) / 2."""
    c2 = math.cos(g) ** 2
    s2 = math.sin(g) ** 2
    # rationalized: s^4 / (2 (sqrt(c^4 + s^4) + c^2)), exact zero at g = k pi
    return s2 * s2 / (2 * (math.sqrt(c2 * c2 + s2 * s2) + c2))


def extraction_negativity_oracle(g: float) -> float:
    """Same quantity from the simulated protocol and a partial-transpose eigensolve."""
    rho = reduced_box_state(apply_coupling(build_initial_state(), g))
    return matrix_negativity(rho, (2, 2), sys=1)
