"""Qualitative preference reasoning under hard constraints.

CP-nets, CPR-nets and LP-trees, with dominance testing and constrained
optimisation by backtracking search.
"""

from .cpnet import Cpt, CpNet, PreferenceRow
from .cprnet import AriStatement, CprNet, build_cprnet
from .csp import Constraint, ConstraintSet
from .lptree import LpNode, LpTree
from .model import Comparison, Outcome, PartialAssignment, VariableSet
from .modelfile import ModelDocument, format_model, load_model, parse_model
from .solvers import DominanceTester, acyclic_cp_dt, search_cpr, search_lp

__all__ = [
    "AriStatement",
    "Comparison",
    "Constraint",
    "ConstraintSet",
    "CpNet",
    "CprNet",
    "Cpt",
    "DominanceTester",
    "LpNode",
    "LpTree",
    "ModelDocument",
    "Outcome",
    "PartialAssignment",
    "PreferenceRow",
    "VariableSet",
    "acyclic_cp_dt",
    "build_cprnet",
    "format_model",
    "load_model",
    "parse_model",
    "search_cpr",
    "search_lp",
]
