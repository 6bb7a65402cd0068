"""liftlab: p-derivations, Frobenius lifts and lifting obstructions in characteristic p."""

from .polyring import QQ, ZZ, PolyRing, Polynomial, Zmod, parse, polyring, render
from .groebner import Ideal, buchberger, ideal_membership, normal_form
from .matforms import MatrixOfVariables, determinant, pfaffian
from .pops import FrobeniusLift, PDerivation, phi
from .liftcheck import lc_vanishing_search, trace_lift_obstruction, zdanowicz_check

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "ZZ",
    "Zmod",
    "PolyRing",
    "Polynomial",
    "parse",
    "polyring",
    "render",
    "Ideal",
    "buchberger",
    "ideal_membership",
    "normal_form",
    "MatrixOfVariables",
    "determinant",
    "pfaffian",
    "FrobeniusLift",
    "PDerivation",
    "phi",
    "lc_vanishing_search",
    "trace_lift_obstruction",
    "zdanowicz_check",
]
