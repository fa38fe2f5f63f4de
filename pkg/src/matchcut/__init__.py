"""Matching cuts, disconnected perfect matchings and perfect matching cuts.

Exact solvers with certificates, the gadgets of the hardness reductions for
graphs of large girth and H*-free graphs, and witness transport through each
reduction.
"""

from .colouring import BLUE, RED, ColouringClass, classify, colouring_from_str, colouring_to_str
from .graph import Graph, GraphBuilder, girth, is_hstar_free, make_named, subdivide
from .matching import has_perfect_matching, maximum_matching
from .solvers import Certificate, Formula, brute_force_decide, solve, solve_dpm, solve_mc, solve_pmc

__version__ = "0.1.0"

__all__ = [
    "BLUE",
    "RED",
    "Certificate",
    "ColouringClass",
    "Formula",
    "Graph",
    "GraphBuilder",
    "brute_force_decide",
    "classify",
    "colouring_from_str",
    "colouring_to_str",
    "girth",
    "has_perfect_matching",
    "is_hstar_free",
    "make_named",
    "maximum_matching",
    "solve",
    "solve_dpm",
    "solve_mc",
    "solve_pmc",
    "subdivide",
]
