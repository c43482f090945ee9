"""Pseudoanalytic function theory for ``(div p grad + q) u = 0``.

Bicomplex and quaternionic algebra, forward-mode jets over an expression
language, formal powers from generating sequences, the factorization and
conjugate transforms, and a boundary-collocation Dirichlet solver.
"""

from .bicomplex import Bicomplex, conj, inverse, is_zero_divisor, mul
from .errors import VekuaError
from .exprlang import eval_jet2, eval_jet3, parse
from .fields import BicomplexField, ScalarField, Segment
from .pseudoanalytic import FormalPower, PowerTable, build_sequence_condition_s, formal_power
from .quat3d import ComplexQuaternion, QuaternionField3D
from .solver import CompleteSystem, DirichletProblem, Domain, solve_collocation
from .transforms import EllipticCoefficients

__version__ = "0.1.0"

__all__ = [
    "Bicomplex", "BicomplexField", "CompleteSystem", "ComplexQuaternion", "DirichletProblem", "Domain",
    "EllipticCoefficients", "FormalPower", "PowerTable", "QuaternionField3D", "ScalarField", "Segment",
    "VekuaError", "build_sequence_condition_s", "conj", "eval_jet2", "eval_jet3", "formal_power",
    "inverse", "is_zero_divisor", "mul", "parse", "solve_collocation",
]
