"""Exact Hermitian geometry on Lie algebras: SKT, astheno-Kahler and balanced conditions."""

from .connections import ConnectionData, bismut, chern, first_canonical, levi_civita
from .dsl import DSLError, parse, to_text
from .forms import Form
from .hermitian import CONDITIONS, ComplexStructure, HermitianStructure
from .lie import LieAlgebra
from .scalar import I, PI, Q, Scalar

__all__ = [
    "CONDITIONS",
    "ComplexStructure",
    "ConnectionData",
    "DSLError",
    "Form",
    "HermitianStructure",
    "I",
    "LieAlgebra",
    "PI",
    "Q",
    "Scalar",
    "bismut",
    "chern",
    "first_canonical",
    "levi_civita",
    "parse",
    "to_text",
]
