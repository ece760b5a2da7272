"""Exact invariants of K2-extensions of split tori and reductive groups."""

from .fields import FunctionField, ParseError, Place, RationalField, field_from_name
from .lattice import BilinearIncarnation, Lattice, LatticeMap, QuadraticForm, RootDatum, extend_hom
from .presets import preset

__version__ = "0.1.0"

__all__ = [
    "BilinearIncarnation",
    "FunctionField",
    "Lattice",
    "LatticeMap",
    "ParseError",
    "Place",
    "QuadraticForm",
    "RationalField",
    "RootDatum",
    "extend_hom",
    "field_from_name",
    "preset",
]
