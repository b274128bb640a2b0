"""Bi-valent trees: enumeration of isomorphism classes and automorphism groups.

A bi-valent tree in Bi(m, n) has m internal vertices of valence n and
(n-2)m + 2 external leaves. Vertices are labelled 1..m (internal) followed by
the external ones grouped by the internal vertex they hang from (their
Phi-image), parents in increasing order. Isomorphism of two such trees is
decided on the internal subtree alone, via an AHU canonical code rooted at
its center or bicenter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import factorial, prod
from typing import Iterable, Sequence

from .core import Perm

__all__ = [
    "BivalentTree",
    "AutGroup",
    "star",
    "single_edge",
    "extend",
    "restrict",
    "removable_vertices",
    "enumerate_trees",
    "internal_subtree",
    "canonical_code",
    "aut_kernel_generators",
    "aut_group",
    "external_classes",
    "from_edges",
]


@dataclass(frozen=True)
class BivalentTree:
    m: int
    n: int
    adjacency: tuple[tuple[int, ...], ...]  # adjacency[v-1] = sorted neighbours of v

    def __post_init__(self) -> None:
        nv = len(self.adjacency)
        expected = (self.n - 1) * self.m + 2
        if nv != expected:
            raise ValueError(f"expected {expected} vertices, got {nv}")
        for v, nbrs in enumerate(self.adjacency, 1):
            deg = self.n if v <= self.m else 1
            if len(nbrs) != deg:
                raise ValueError(f"vertex {v} has valence {len(nbrs)}, expected {deg}")
            for w in nbrs:
                if v not in self.adjacency[w - 1]:
                    raise ValueError(f"adjacency not symmetric at {v}-{w}")
        if sum(map(len, self.adjacency)) != 2 * (nv - 1) or not self._connected():
            raise ValueError("not a tree")

    def _connected(self) -> bool:
        seen = {1}
        stack = [1]
        while stack:
            for w in self.adjacency[stack.pop() - 1]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.adjacency)

    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def internal(self) -> range:
        return range(1, self.m + 1)

    @property
    def external(self) -> range:
        return range(self.m + 1, self.num_vertices + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v - 1]

    def is_external(self, v: int) -> bool:
        return self.m < v <= self.num_vertices

    def phi(self, v: int) -> int:
        """Internal vertex adjacent to the external vertex v."""
        if not self.is_external(v):
            raise ValueError(f"{v} is not external")
        return self.adjacency[v - 1][0]

    def two(self, v: int) -> tuple[int, ...]:
        """External vertices sharing v's Phi-image (v included)."""
        if self.m == 0:
            return (v,)
        p = self.phi(v)
        return tuple(w for w in self.neighbors(p) if self.is_external(w))

    @cached_property
    def fibers(self) -> tuple[tuple[int, ...], ...]:
        """Phi-fibers: for each internal vertex, its external neighbours."""
        return tuple(tuple(w for w in self.neighbors(u) if w > self.m) for u in self.internal)

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v, nb in enumerate(self.adjacency, 1) for w in nb if v < w]

    @cached_property
    def distances(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs tree distances, 1-based rows ([0] row unused)."""
        nv = self.num_vertices
        rows = [()]
        for s in range(1, nv + 1):
            dist = [0] * (nv + 1)
            dist[s] = 0
            seen = {s}
            frontier = [s]
            k = 0
            while frontier:
                k += 1
                nxt = []
                for x in frontier:
                    for y in self.adjacency[x - 1]:
                        if y not in seen:
                            seen.add(y)
                            dist[y] = k
                            nxt.append(y)
                frontier = nxt
            rows.append(tuple(dist))
        return tuple(rows)


def _build(m: int, n: int, internal_adj: dict[int, list[int]]) -> BivalentTree:
    """Attach leaves to an internal tree on 1..m using the labelling convention."""
    adj: dict[int, list[int]] = {v: list(internal_adj.get(v, [])) for v in range(1, m + 1)}
    nxt = m + 1
    for v in range(1, m + 1):
        while len(adj[v]) < n:
            adj[v].append(nxt)
            adj[nxt] = [v]
            nxt += 1
    return BivalentTree(m, n, tuple(tuple(sorted(adj[v])) for v in range(1, nxt)))


def single_edge(n: int = 3) -> BivalentTree:
    """The degenerate m = 0 tree: one edge between two external vertices."""
    return BivalentTree(0, n, ((2,), (1,)))


def star(n: int) -> BivalentTree:
    """The unique element of Bi(1, n)."""
    if n <= 1:
        raise ValueError("valence must exceed 1")
    return _build(1, n, {})


def _internal_adj(T: BivalentTree) -> dict[int, list[int]]:
    return {u: [w for w in T.neighbors(u) if w <= T.m] for u in T.internal}


def extend(T: BivalentTree, v: int) -> BivalentTree:
    """Turn the external vertex v into an internal one with n-1 new leaves."""
    if T.m == 0:
        if v not in (1, 2):
            raise ValueError(f"{v} is not external")
        return star(T.n)
    if not T.is_external(v):
        raise ValueError(f"{v} is not external")
    adj = _internal_adj(T)
    new = T.m + 1
    p = T.phi(v)
    adj[p].append(new)
    adj[new] = [p]
    return _build(T.m + 1, T.n, adj)


def removable_vertices(T: BivalentTree) -> list[int]:
    """Internal vertices with exactly one internal neighbour (m > 1)."""
    if T.m <= 1:
        return []
    return [u for u in T.internal if sum(1 for w in T.neighbors(u) if w <= T.m) == 1]


def restrict(T: BivalentTree, u: int) -> BivalentTree:
    """Delete the leaves of the internal leaf u, making u external."""
    if u not in removable_vertices(T):
        raise ValueError(f"{u} is not an internal leaf")
    keep = [w for w in T.internal if w != u]
    relabel = {w: i for i, w in enumerate(keep, 1)}
    old = _internal_adj(T)
    adj = {relabel[w]: [relabel[x] for x in old[w] if x != u] for w in keep}
    return _build(T.m - 1, T.n, adj)


def internal_subtree(T: BivalentTree) -> dict[int, tuple[int, ...]]:
    """Induced subgraph on the internal vertices, as an adjacency map."""
    if T.m == 0:
        raise ValueError("the m = 0 tree has no internal subtree")
    return {u: tuple(w for w in T.neighbors(u) if w <= T.m) for u in T.internal}


def _centers(adj: dict[int, Sequence[int]]) -> list[int]:
    degree = {v: len(nb) for v, nb in adj.items()}
    remaining = len(adj)
    layer = [v for v, k in degree.items() if k <= 1]
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_codes(adj: dict[int, Sequence[int]], root: int, block: int | None = None) -> dict[int, str]:
    """AHU codes of every vertex of the tree rooted at ``root``.

    ``block`` removes one edge at the root, used for the two halves at a bicenter.
    """
    codes: dict[int, str] = {}
    order = []
    parent = {root: 0}
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in adj[v]:
            if w != parent[v] and not (v == root and w == block):
                parent[w] = v
                stack.append(w)
    for v in reversed(order):
        kids = sorted(codes[w] for w in adj[v] if w != parent[v] and not (v == root and w == block))
        codes[v] = "(" + "".join(kids) + ")"
    return codes


def _code_of_adj(adj: dict[int, Sequence[int]]) -> str:
    c = _centers(adj)
    if len(c) == 1:
        return _rooted_codes(adj, c[0])[c[0]]
    u, v = c
    cu = _rooted_codes(adj, u, block=v)[u]
    cv = _rooted_codes(adj, v, block=u)[v]
    return "[" + "".join(sorted((cu, cv))) + "]"


def canonical_code(T: BivalentTree) -> str:
    """Isomorphism invariant of T (complete: internal subtrees decide isomorphism)."""
    if T.m == 0:
        return f"n{T.n}:edge"
    return f"n{T.n}:" + _code_of_adj(internal_subtree(T))


def external_classes(T: BivalentTree) -> list[tuple[int, ...]]:
    """Orbits of the kernel Aut_e on V_e: the Phi-fibers (nonempty ones)."""
    if T.m == 0:
        return [(1, 2)]
    return [f for f in T.fibers if f]


def enumerate_trees(m: int, n: int, *, full_aut_pruning: bool = False) -> list[BivalentTree]:
    """One representative per isomorphism class of Bi(m, n).

    Builds Bi(m, n) by extending each representative of Bi(m-1, n) at one
    vertex per class of V_e under Aut_e, then discards isomorphic duplicates
    by canonical code. With ``full_aut_pruning`` the extension points are
    taken up to the full automorphism group instead, which prunes more.
    """
    if m < 1 or n <= 1:
        raise ValueError("need m >= 1 and n > 1")
    reps = [star(n)]
    for _ in range(m - 1):
        found: dict[str, BivalentTree] = {}
        for T in reps:
            if full_aut_pruning:
                points = [min(c) for c in _aut_orbits_on_external(T)]
            else:
                points = [c[0] for c in external_classes(T)]
            for v in points:
                E = extend(T, v)
                found.setdefault(canonical_code(E), E)
        reps = [found[k] for k in sorted(found)]
    return reps


@dataclass(frozen=True)
class AutGroup:
    """Automorphism group as generators (permutations of all vertices) plus order."""

    generators: tuple[Perm, ...]
    order: int
    kernel_order: int
    internal_order: int

    def elements(self) -> set[Perm]:
        """Full closure; only sensible for small groups."""
        deg = self.generators[0].degree if self.generators else 0
        ident = Perm.identity(deg)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.generators:
                    h = s * g
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return seen


def aut_kernel_generators(T: BivalentTree) -> list[Perm]:
    """Transpositions of consecutive leaves in each Phi-fiber; they generate Aut_e."""
    nv = T.num_vertices
    gens = []
    for fiber in external_classes(T):
        for x, y in zip(fiber, fiber[1:]):
            img = list(range(1, nv + 1))
            img[x - 1], img[y - 1] = y, x
            gens.append(Perm(tuple(img)))
    return gens


def _kernel_order(T: BivalentTree) -> int:
    return prod(factorial(len(f)) for f in external_classes(T))


def _subtree_iso(adj, codes, parent, x, y, out: dict[int, int]) -> None:
    """Extend ``out`` with an isomorphism of the rooted subtrees at x and y."""
    out[x] = y
    kx = sorted((w for w in adj[x] if w != parent[x]), key=lambda w: codes[w])
    ky = sorted((w for w in adj[y] if w != parent[y]), key=lambda w: codes[w])
    for a, b in zip(kx, ky):
        _subtree_iso(adj, codes, parent, a, b, out)


def _internal_aut(adj: dict[int, Sequence[int]]) -> tuple[list[dict[int, int]], int]:
    """Generators (as vertex maps) and order of the automorphism group of a tree."""
    c = _centers(adj)
    root = c[0]
    codes = _rooted_codes(adj, root, block=c[1] if len(c) == 2 else None)
    parent = {root: 0}
    order_list = [root]
    for v in order_list:
        for w in adj[v]:
            if w != parent[v] and not (len(c) == 2 and v == root and w == c[1]):
                parent[w] = v
                order_list.append(w)
    gens: list[dict[int, int]] = []
    size = 1
    roots = [root]
    if len(c) == 2:
        other = c[1]
        parent[other] = 0
        codes.update(_rooted_codes(adj, other, block=root))
        extra = [other]
        for v in extra:
            for w in adj[v]:
                if w != parent[v] and not (v == other and w == root):
                    parent[w] = v
                    extra.append(w)
        order_list += extra
        roots.append(other)
        parent[root], parent[other] = other, root
        if codes[root] == codes[other]:
            swap: dict[int, int] = {}
            _subtree_iso(adj, codes, parent, root, other, swap)
            _subtree_iso(adj, codes, parent, other, root, swap)
            gens.append(swap)
            size *= 2
    for v in order_list:
        kids = [w for w in adj[v] if w != parent[v]]
        groups: dict[str, list[int]] = {}
        for w in kids:
            groups.setdefault(codes[w], []).append(w)
        for same in groups.values():
            size *= factorial(len(same))
            for a, b in zip(same, same[1:]):
                swap = {}
                _subtree_iso(adj, codes, parent, a, b, swap)
                _subtree_iso(adj, codes, parent, b, a, swap)
                gens.append(swap)
    return gens, size


def _lift(T: BivalentTree, tau: dict[int, int]) -> Perm:
    """2-ordered extension of an internal automorphism: fibers map in order."""
    img = list(range(1, T.num_vertices + 1))
    for u in T.internal:
        tu = tau.get(u, u)
        img[u - 1] = tu
        for x, y in zip(T.fibers[u - 1], T.fibers[tu - 1]):
            img[x - 1] = y
    return Perm(tuple(img))


def aut_group(T: BivalentTree) -> AutGroup:
    """Aut(T) = Aut_e ⋊ Aut(T_i), generated by kernel swaps and lifted internal ones."""
    kernel = aut_kernel_generators(T)
    k_order = _kernel_order(T)
    if T.m == 0:
        return AutGroup(tuple(kernel), 2, 2, 1)
    tau_gens, i_order = _internal_aut(internal_subtree(T))
    lifts = [_lift(T, tau) for tau in tau_gens]
    return AutGroup(tuple(kernel + lifts), k_order * i_order, k_order, i_order)


def _aut_orbits_on_external(T: BivalentTree) -> list[tuple[int, ...]]:
    from .core import orbits

    G = aut_group(T)
    if not G.generators:
        return [(v,) for v in T.external]
    return [tuple(sorted(b)) for b in orbits(G.generators, T.num_vertices) if min(b) > T.m]


def from_edges(m: int, n: int, internal_edges: Iterable[tuple[int, int]]) -> BivalentTree:
    """Bi-valent tree whose internal subtree on 1..m has the given edges."""
    adj: dict[int, list[int]] = {v: [] for v in range(1, m + 1)}
    for u, v in internal_edges:
        adj[u].append(v)
        adj[v].append(u)
    return _build(m, n, adj)
