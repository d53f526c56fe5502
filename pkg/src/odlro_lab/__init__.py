"""Single-particle entanglement with vacuum versus off-diagonal long-range order.

Submodules
----------
fock_extraction  delta-pulse extraction of entanglement from one particle
bose_gas         ideal Bose gas in a hard-wall box
geometry         A | C | B slab partitions, probabilities and overlap Grams
negativity       closed-form and partial-transpose negativities of rho_1
odlro            dominant-eigenvalue and off-diagonal diagnostics
cli              ``odlro-lab`` command line front end
"""

from odlro_lab.errors import ConditioningError, InvariantViolation, SolverFailure

__version__ = "0.1.0"

__all__ = ["ConditioningError", "InvariantViolation", "SolverFailure", "__version__"]
