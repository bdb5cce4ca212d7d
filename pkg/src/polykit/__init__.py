"""Simple 3-polytopes, belts and the cohomology of their moment-angle manifolds."""

from .belts import PolytopeClass, check_scc, classify, enumerate_belts
from .cohomology import bigraded_table, cohomology_ring
from .constructions import make_named
from .core import SimplePolytope3, are_isomorphic, load_polytopes, parse_polytope

__version__ = "0.1.0"

__all__ = [
    "PolytopeClass",
    "SimplePolytope3",
    "are_isomorphic",
    "bigraded_table",
    "check_scc",
    "classify",
    "cohomology_ring",
    "enumerate_belts",
    "load_polytopes",
    "make_named",
    "parse_polytope",
]
