"""Exact Hall-algebra computations for small quivers over prime fields."""

from .dhall import DerivedHallAlgebra, varsigma_diamond
from .errors import BudgetExceeded, ConsistencyError, HallforgeError, KindMismatch, QuiverSchemaError
from .hallalg import HallElement, IHallAlgebra, RingelHallAlgebra, linear_combine
from .percomplex import PerComplex, complex_isoclasses, d1_stats, homology_and_image, k_complex, stalk
from .quiver import Quiver, a_n, kronecker, parse_quiver
from .repcat import IsoTable, Rep, enumerate_isoclasses, find_isomorphism
from .scalars import Coeff, qbinom, qfact, qint, v_pow

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Coeff",
    "ConsistencyError",
    "DerivedHallAlgebra",
    "HallElement",
    "HallforgeError",
    "IHallAlgebra",
    "IsoTable",
    "KindMismatch",
    "PerComplex",
    "Quiver",
    "QuiverSchemaError",
    "Rep",
    "RingelHallAlgebra",
    "a_n",
    "complex_isoclasses",
    "d1_stats",
    "enumerate_isoclasses",
    "find_isomorphism",
    "homology_and_image",
    "k_complex",
    "kronecker",
    "linear_combine",
    "parse_quiver",
    "qbinom",
    "qfact",
    "qint",
    "stalk",
    "v_pow",
    "varsigma_diamond",
]
