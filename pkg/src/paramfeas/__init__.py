"""Certify parametric integer feasibility statements.

Problems quantify over integer parameters ``r >= r0``, ``k >= k0`` and ask
that every integer point of a base polytope extends to an integer solution
of one of several goal systems.  The method eliminates variables with an
integer rounding criterion, proves the resulting parameter inequalities
with positivity certificates, and settles the remaining finitely many
parameter values by exact lattice enumeration.
"""
from .dsl import load, parse, parse_expression, to_source, validate
from .elimination import INTEGER, REAL, eliminate_all
from .exact import BINOM, MultiPoly, binom_eval, expand_binom, poly_eval
from .pipeline import Report, RunConfig, check_fixed, run
from .polyhedron import HPolyhedron, covering_check, enumerate_vertices
from .positivity import certify_positive

__version__ = "0.1.0"

__all__ = [
    "BINOM", "INTEGER", "REAL", "HPolyhedron", "MultiPoly", "Report", "RunConfig",
    "binom_eval", "certify_positive", "check_fixed", "covering_check", "eliminate_all",
    "enumerate_vertices", "expand_binom", "load", "parse", "parse_expression", "poly_eval",
    "run", "to_source", "validate",
]
