"""Exhaustive verification of finite limits, limit-density constructions and
codensity monads in finite sets and finite-dimensional spaces over F_q."""

from finlim.diagram import (Cone, Diagram, LimitData, ShapeGraph, check_cone, compute_limit,
                            is_limit_cone, mediating_morphism)
from finlim.sets import SetMap, SetObj
from finlim.vectors import Field, LinMap, VecObj

__version__ = "0.1.0"

__all__ = [
    "Cone", "Diagram", "Field", "LimitData", "LinMap", "SetMap", "SetObj", "ShapeGraph",
    "VecObj", "check_cone", "compute_limit", "is_limit_cone", "mediating_morphism",
]
