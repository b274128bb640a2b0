"""Cached enumeration results shared by several test modules."""

from __future__ import annotations

from functools import lru_cache

from modsubgroups.classification import Passport, SubgroupRecord, canonical_passport, classify, passport
from modsubgroups.core import normalize
from modsubgroups.diagrams import (
    TreeDiagram,
    enumerate_colorings,
    enumerate_tree_diagrams,
    index_triples,
    oriented_trees,
)
from modsubgroups.kulkarni import GeneralizedFareySymbol, KulkarniDiagram, kulkarni_diagram
from modsubgroups.wordproblem import is_member

from data import TABLE2


@lru_cache(maxsize=None)
def diagrams(d: int) -> tuple[TreeDiagram, ...]:
    return tuple(enumerate_tree_diagrams(d))


@lru_cache(maxsize=None)
def records(d: int) -> tuple[SubgroupRecord, ...]:
    return tuple(classify(D) for D in diagrams(d))


@lru_cache(maxsize=None)
def classes(d: int) -> tuple[SubgroupRecord, ...]:
    """One record per SL2 class, in key order."""
    chosen: dict[bytes, SubgroupRecord] = {}
    for r in sorted(records(d), key=lambda r: (r.key, r.diagram_id)):
        chosen.setdefault(r.key, r)
    return tuple(chosen.values())


def all_labelled_diagrams(d: int):
    """Every coloring of every oriented tree, with no rotation reduction."""
    for m, b, r, f in index_triples(d):
        for D in oriented_trees(m):
            for col in enumerate_colorings(D, (b, r, f)):
                yield TreeDiagram(D, col)


def gfs(items: list[str]) -> GeneralizedFareySymbol:
    return GeneralizedFareySymbol.parse(items)


@lru_cache(maxsize=None)
def table2_diagram(row: int) -> KulkarniDiagram:
    """The labelled diagram whose subgroup is exactly the one printed in Table 2 row ``row``.

    Among all labelled diagrams with the row's g.F.s. and passport class, the
    one containing every printed generator.
    """
    d, items, (s, _, t), _, _, _, gens, _ = TABLE2[row]
    key = canonical_passport(Passport.parse(s, t, d))
    target = gfs(items)
    for D in all_labelled_diagrams(d):
        K = kulkarni_diagram(D)
        if K.gfs != target or canonical_passport(passport(K)) != key:
            continue
        if all(is_member(K, normalize(*g)) for g in gens):
            return K
    raise LookupError(f"no diagram realises Table 2 row {row}")
