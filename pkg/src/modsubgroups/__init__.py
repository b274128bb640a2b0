"""Finite-index subgroups of PSL2(Z) through Kulkarni diagrams."""

from .core import Cusp, Perm, ProjMatrix, make_cusp, normalize
from .trees import BivalentTree, enumerate_trees, extend, star
from .diagrams import TreeDiagram, enumerate_tree_diagrams
from .kulkarni import KulkarniDiagram, farey_symbol, invariants, kulkarni_diagram
from .wordproblem import coset_representatives, is_member, reduce
from .classification import (
    Passport,
    block_systems,
    canonical_passport,
    classify,
    gl2_key,
    is_congruence,
    passport,
    theta,
)
from .pipeline import RunConfig, enumerate_subgroups, table1

__version__ = "0.1.0"

__all__ = [
    "Cusp",
    "Perm",
    "ProjMatrix",
    "make_cusp",
    "normalize",
    "BivalentTree",
    "enumerate_trees",
    "extend",
    "star",
    "TreeDiagram",
    "enumerate_tree_diagrams",
    "KulkarniDiagram",
    "farey_symbol",
    "invariants",
    "kulkarni_diagram",
    "coset_representatives",
    "is_member",
    "reduce",
    "Passport",
    "block_systems",
    "canonical_passport",
    "classify",
    "gl2_key",
    "is_congruence",
    "passport",
    "theta",
    "RunConfig",
    "enumerate_subgroups",
    "table1",
]
