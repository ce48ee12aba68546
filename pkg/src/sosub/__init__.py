"""Lasserre-type upper bounds for polynomial minimization in extended precision."""

from .bounds import BoundResult, bound_sequence, compute_bound, compute_ub, compute_ubpf
from .measures import GammaAlpha, MomentSequence, UniformBox, parse_measure
from .numerics import working_precision
from .polyring import Polynomial, parse_poly

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "GammaAlpha",
    "MomentSequence",
    "Polynomial",
    "UniformBox",
    "bound_sequence",
    "compute_bound",
    "compute_ub",
    "compute_ubpf",
    "parse_measure",
    "parse_poly",
    "working_precision",
]
