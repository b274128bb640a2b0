from __future__ import annotations

from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modsubgroups.trees import (
    BivalentTree,
    aut_group,
    aut_kernel_generators,
    canonical_code,
    enumerate_trees,
    extend,
    external_classes,
    from_edges,
    internal_subtree,
    removable_vertices,
    restrict,
    single_edge,
    star,
)

from oracles import automorphism_count, brute_force_tree_classes, to_graph


def bi23() -> BivalentTree:
    return from_edges(2, 3, [(1, 2)])


def test_star_adjacency():
    T = star(3)
    assert T.neighbors(1) == (2, 3, 4)
    assert T.num_vertices == 4
    assert list(T.external) == [2, 3, 4]


def test_single_edge_is_degenerate_tree():
    T = single_edge()
    assert T.m == 0 and T.num_vertices == 2
    assert T.edges() == [(1, 2)]


def test_invalid_trees_rejected():
    with pytest.raises(ValueError):
        BivalentTree(1, 3, ((2, 3), (1,), (1,)))  # wrong vertex count
    with pytest.raises(ValueError):
        BivalentTree(1, 3, ((2, 3, 4), (1,), (1,), (2,)))  # not symmetric


def test_extend_star_gives_unique_bi23():
    for v in star(3).external:
        E = extend(star(3), v)
        assert canonical_code(E) == canonical_code(bi23())
    assert len(enumerate_trees(2, 3)) == 1


def test_bi23_labels():
    T = bi23()
    assert T.fibers == ((3, 4), (5, 6))
    assert T.phi(5) == 2
    assert external_classes(T) == [(3, 4), (5, 6)]
    assert internal_subtree(T) == {1: (2,), 2: (1,)}


def test_internal_subtree_of_star_is_single_vertex():
    assert internal_subtree(star(3)) == {1: ()}


def test_extend_within_two_set_gives_isomorphic_trees():
    for T in enumerate_trees(3, 3) + enumerate_trees(4, 3):
        for v in T.external:
            codes = {canonical_code(extend(T, w)) for w in T.two(v)}
            assert len(codes) == 1


@pytest.mark.parametrize("m,count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 2), (6, 4), (7, 6), (8, 11)])
def test_enumerate_trees_counts(m, count):
    assert len(enumerate_trees(m, 3)) == count


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_enumerate_trees_matches_brute_force(m):
    ours = [to_graph(T) for T in enumerate_trees(m, 3)]
    ref = brute_force_tree_classes(m)
    assert len(ours) == len(ref)
    for G in ours:
        assert sum(nx.is_isomorphic(G, H) for H in ref) == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_enumerate_valence_four_matches_brute_force(m):
    assert len(enumerate_trees(m, 4)) == len(brute_force_tree_classes(m, 4))


@pytest.mark.parametrize("m", [5, 6, 7])
def test_full_aut_pruning_same_classes(m):
    a = sorted(canonical_code(T) for T in enumerate_trees(m, 3))
    b = sorted(canonical_code(T) for T in enumerate_trees(m, 3, full_aut_pruning=True))
    assert a == b


def test_kernel_examples():
    assert aut_group(bi23()).kernel_order == 4
    assert aut_group(star(3)).kernel_order == 6
    # a path has at most one leaf per internal vertex, so the kernel is trivial
    T = from_edges(4, 2, [(1, 2), (2, 3), (3, 4)])
    assert aut_kernel_generators(T) == []
    assert aut_group(T).kernel_order == 1


def test_bi23_automorphisms_by_exhaustion():
    T = bi23()
    edges = {frozenset(e) for e in T.edges()}
    count = 0
    kernel = 0
    for p in permutations(range(1, 7)):
        f = dict(zip(range(1, 7), p))
        if {frozenset((f[u], f[v])) for u, v in edges} == edges:
            count += 1
            kernel += f[1] == 1 and f[2] == 2
    assert count == aut_group(T).order == 8
    assert kernel == aut_group(T).kernel_order == 4


def test_aut_order_examples():
    assert aut_group(star(3)).order == 6
    path = from_edges(4, 3, [(1, 2), (2, 3), (3, 4)])
    G = aut_group(path)
    assert G.order == 2 * G.kernel_order


def _small_trees():
    for n, top in ((3, 5), (4, 3)):
        for m in range(1, top + 1):
            yield from enumerate_trees(m, n)


@pytest.mark.parametrize("T", list(_small_trees()), ids=lambda T: canonical_code(T))
def test_aut_order_matches_brute_force(T):
    assert T.num_vertices <= 12
    G = aut_group(T)
    assert G.order == automorphism_count(to_graph(T))
    assert G.order == G.kernel_order * G.internal_order


@pytest.mark.parametrize("T", enumerate_trees(4, 3) + enumerate_trees(5, 3))
def test_aut_generators_are_automorphisms_and_generate(T):
    G = aut_group(T)
    edges = {frozenset(e) for e in T.edges()}
    for g in G.generators:
        assert {frozenset((g(u), g(v))) for u, v in edges} == edges
    assert len(G.elements()) == G.order


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.data())
def test_restrict_undoes_extend(m, data):
    T = data.draw(st.sampled_from(enumerate_trees(m, 3)))
    v = data.draw(st.sampled_from(list(T.external)))
    E = extend(T, v)
    assert E.m == m + 1
    assert E.m in removable_vertices(E)
    assert canonical_code(restrict(E, E.m)) == canonical_code(T)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.data())
def test_restrictions_stay_in_previous_level(m, data):
    T = data.draw(st.sampled_from(enumerate_trees(m, 3)))
    previous = {canonical_code(U) for U in enumerate_trees(m - 1, 3)}
    for u in removable_vertices(T):
        assert canonical_code(restrict(T, u)) in previous


@given(st.integers(1, 9))
def test_vertex_count_identity(m):
    for T in enumerate_trees(m, 3):
        assert len(T.external) == m + 2
