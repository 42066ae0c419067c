"""Exact computer algebra for affine Poisson schemes, symplectic groupoids,
and Hamiltonian reduction.

All arithmetic is exact over the rationals.  Every object (scheme, groupoid,
action) is stored through its coordinate algebra: a finitely presented
commutative algebra together with the comorphisms of the structure maps.
Every verdict the engine emits is backed by an ideal-membership certificate
computed with Groebner bases.
"""

from .arith import Polynomial, VarList, grevlex, lex, block_order, parse_polynomial
from .groebner import Ideal, BudgetExceededError
from .algebra import PresentedAlgebra, AlgebraMorphism, FiberedCoproduct
from .poisson import PoissonStructure
from .groupoid import AffineGroupoid, SymplecticGroupoid, Subgroupoid
from .action import GroupoidAction, GraphIdeal
from .reduction import InvariantBasis, ReductionResult

__version__ = "0.1.0"

__all__ = [
    "Polynomial",
    "VarList",
    "grevlex",
    "lex",
    "block_order",
    "parse_polynomial",
    "Ideal",
    "BudgetExceededError",
    "PresentedAlgebra",
    "AlgebraMorphism",
    "FiberedCoproduct",
    "PoissonStructure",
    "AffineGroupoid",
    "SymplecticGroupoid",
    "Subgroupoid",
    "GroupoidAction",
    "GraphIdeal",
    "InvariantBasis",
    "ReductionResult",
    "__version__",
]
