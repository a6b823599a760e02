"""Levi normal forms of truncated Poisson structures and Lie algebroids."""

from .algebroid import AlgebroidData, algebroid_levi_normalize
from .cohom import Cochain, ce_differential, solve_1cocycle, solve_2cocycle, solve_direct
from .levi import LeviRunState, convergence_report, levi_normalize, levi_step
from .liealg import LeviAlgebraData, ModuleWindow, build_window, levi_malcev_split, validate_levi_input
from .poisson import PoissonTable, jacobiator, pushforward
from .polyalg import PolyMap, Polynomial, compose, invert_near_identity, substitute

__all__ = [
    "AlgebroidData",
    "algebroid_levi_normalize",
    "Cochain",
    "ce_differential",
    "solve_1cocycle",
    "solve_2cocycle",
    "solve_direct",
    "LeviRunState",
    "convergence_report",
    "levi_normalize",
    "levi_step",
    "LeviAlgebraData",
    "ModuleWindow",
    "build_window",
    "levi_malcev_split",
    "validate_levi_input",
    "PoissonTable",
    "jacobiator",
    "pushforward",
    "PolyMap",
    "Polynomial",
    "compose",
    "invert_near_identity",
    "substitute",
]
