"""Tree diagrams: oriented, colored bi-valent trees (n = 3).

An orientation picks a 3-cycle of neighbours at every internal vertex. It
induces the function ``right_of`` on external vertices whose single orbit is
the cyclic order of the leaves. A coloring splits the leaves into blue (odd),
red fixed (even) and red free vertices matched in pairs.

Two enumeration conventions are offered for whole indices:

``"table"``
    The counting convention behind the published diagram counts. Internal
    vertices with two or more external neighbours keep one orientation,
    all others take both, and orientations are not identified across the
    tree's automorphisms. Colorings of one oriented tree are identified only
    under the rotations of the cyclic leaf order that are tree symmetries and
    either fix the internal vertices (one internal vertex) or are involutions.
``"isomorphism"``
    Exact isomorphism classes of tree diagrams: oriented trees up to
    orientation-preserving isomorphism and colorings up to every rotational
    symmetry of the oriented tree.

Both conventions reach every subgroup class; they differ only in how much
redundancy is left for the passport stage to remove.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

from .trees import BivalentTree, enumerate_trees, single_edge, star

__all__ = [
    "OrientedTree",
    "Coloring",
    "TreeDiagram",
    "enumerate_orientations",
    "right_of",
    "left_of",
    "cyclic_order",
    "parameter_triples",
    "index_triples",
    "two_partitions",
    "enumerate_colorings",
    "coloring_count",
    "enumerate_tree_diagrams",
    "oriented_trees",
    "diagrams_for",
    "CONVENTIONS",
]

CONVENTIONS = ("table", "isomorphism")


def _cycle(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Rotate a 3-cycle so its smallest entry comes first."""
    t = (a, b, c)
    k = t.index(min(t))
    return t[k:] + t[:k]


@dataclass(frozen=True)
class OrientedTree:
    tree: BivalentTree
    orientation: tuple[tuple[int, int, int], ...]  # orientation[v-1] = sigma_v as a 3-cycle

    def __post_init__(self) -> None:
        if self.tree.n != 3:
            raise ValueError("orientations need valence 3")
        if len(self.orientation) != self.tree.m:
            raise ValueError("one 3-cycle per internal vertex")
        for v, cyc in enumerate(self.orientation, 1):
            if sorted(cyc) != list(self.tree.neighbors(v)):
                raise ValueError(f"sigma_{v} = {cyc} is not a cycle on the neighbours of {v}")

    @cached_property
    def _sigma(self) -> tuple[dict[int, int], ...]:
        return tuple({a: b, b: c, c: a} for a, b, c in self.orientation)

    def sigma(self, v: int, w: int) -> int:
        return self._sigma[v - 1][w]

    @cached_property
    def order(self) -> tuple[int, ...]:
        return cyclic_order(self)

    @cached_property
    def key(self) -> tuple[int, ...]:
        """Orientation-preserving isomorphism invariant: rotation-minimal leaf distance matrix."""
        order = self.order
        dist = self.tree.distances
        n = len(order)
        return min(
            tuple(dist[order[(i + k) % n]][order[(j + k) % n]] for i in range(n) for j in range(i + 1, n))
            for k in range(n)
        )

    @cached_property
    def rotation_symmetries(self) -> tuple[int, ...]:
        """Shifts k of the cyclic leaf order induced by automorphisms of the oriented tree."""
        order = self.order
        dist = self.tree.distances
        n = len(order)
        base = [[dist[order[i]][order[j]] for j in range(n)] for i in range(n)]
        return tuple(
            k
            for k in range(n)
            if all(base[i][j] == base[(i + k) % n][(j + k) % n] for i in range(n) for j in range(i + 1, n))
        )


def right_of(D: OrientedTree, v: int) -> int:
    """The external vertex to the right of v (end of the well-oriented path from v)."""
    T = D.tree
    if not T.is_external(v):
        raise ValueError(f"{v} is not external")
    if T.m == 0:
        return 3 - v
    a, b = v, T.phi(v)
    c = D.sigma(b, a)
    while c <= T.m:
        a, b = b, c
        c = D.sigma(b, a)
    return c


def left_of(D: OrientedTree, v: int) -> int:
    """Inverse of ``right_of``: follow inverse rotations."""
    T = D.tree
    if not T.is_external(v):
        raise ValueError(f"{v} is not external")
    if T.m == 0:
        return 3 - v
    inv = [{y: x for x, y in s.items()} for s in D._sigma]
    a, b = v, T.phi(v)
    c = inv[b - 1][a]
    while c <= T.m:
        a, b = b, c
        c = inv[b - 1][a]
    return c


def cyclic_order(D: OrientedTree) -> tuple[int, ...]:
    """Orbit of ``right_of`` from the smallest external vertex."""
    T = D.tree
    start = T.m + 1
    seq = [start]
    nxt = right_of(D, start)
    while nxt != start:
        if len(seq) > T.num_vertices:
            break
        seq.append(nxt)
        nxt = right_of(D, nxt)
    if len(seq) != len(T.external):
        raise RuntimeError(f"right_of orbit has length {len(seq)}, expected {len(T.external)}")
    return tuple(seq)


def enumerate_orientations(T: BivalentTree, *, dedup: bool = False) -> list[OrientedTree]:
    """Orientations of T, one fixed choice at vertices with >= 2 external neighbours.

    With ``dedup`` the list is further reduced to orientation-preserving
    isomorphism classes.
    """
    if T.n != 3:
        raise ValueError("orientations need valence 3")
    if T.m == 0:
        return [OrientedTree(T, ())]
    choices = []
    for v in T.internal:
        x, y, z = T.neighbors(v)
        if len(T.fibers[v - 1]) >= 2:
            choices.append([(x, y, z)])
        else:
            choices.append([(x, y, z), (x, z, y)])
    out = [OrientedTree(T, combo) for combo in product(*choices)]
    if dedup:
        seen: dict[tuple[int, ...], OrientedTree] = {}
        for D in out:
            seen.setdefault(D.key, D)
        out = list(seen.values())
    return out


def index_triples(d: int) -> list[tuple[int, int, int, int]]:
    """All (m, b, r, f) with b + r + 2f = m + 2 and d = 3m + b."""
    if d < 1:
        raise ValueError("index must be positive")
    out = []
    for m in range(max(0, -(-(d - 2) // 4)), d // 3 + 1):
        b = d - 3 * m
        for f in range(0, (m - b) // 2 + 2):
            r = m + 2 - b - 2 * f
            if r >= 0:
                out.append((m, b, r, f))
    return out


def parameter_triples(d: int) -> set[tuple[int, int, int]]:
    return {(b, r, f) for _, b, r, f in index_triples(d)}


def two_partitions(items: Sequence[int]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every perfect matching of ``items`` exactly once, pairs in increasing order."""
    if len(items) % 2:
        raise ValueError("need an even number of elements")
    items = sorted(items)

    def rec(rest: list[int]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not rest:
            yield ()
            return
        a = rest[0]
        for i in range(1, len(rest)):
            for tail in rec(rest[1:i] + rest[i + 1 :]):
                yield ((a, rest[i]),) + tail

    yield from rec(list(items))


@dataclass(frozen=True)
class Coloring:
    blue: tuple[int, ...]
    red_fixed: tuple[int, ...]
    free_pairs: tuple[tuple[int, int], ...]

    @property
    def params(self) -> tuple[int, int, int]:
        return (len(self.blue), len(self.red_fixed), len(self.free_pairs))

    def label(self, v: int) -> str | int:
        """'odd', 'even' or the partner vertex."""
        if v in self.blue:
            return "odd"
        if v in self.red_fixed:
            return "even"
        for x, y in self.free_pairs:
            if v == x:
                return y
            if v == y:
                return x
        raise KeyError(v)


def coloring_count(n: int, t: tuple[int, int, int]) -> int:
    b, r, f = t
    dfact = 1
    for k in range(2 * f - 1, 0, -2):
        dfact *= k
    return comb(n, b) * comb(n - b, r) * dfact


def enumerate_colorings(D: OrientedTree, t: tuple[int, int, int]) -> Iterator[Coloring]:
    """All colorings of the leaves of D with parameters t = (b, r, f)."""
    b, r, f = t
    leaves = list(D.tree.external)
    if b + r + 2 * f != len(leaves) or min(t) < 0:
        raise ValueError(f"parameters {t} do not fit {len(leaves)} leaves")
    for B in combinations(leaves, b):
        rest = [v for v in leaves if v not in B]
        for R0 in combinations(rest, r):
            R1 = [v for v in rest if v not in R0]
            for P in two_partitions(R1):
                yield Coloring(B, R0, P)


@dataclass(frozen=True)
class TreeDiagram:
    oriented: OrientedTree
    coloring: Coloring

    @property
    def tree(self) -> BivalentTree:
        return self.oriented.tree

    @property
    def external_order(self) -> tuple[int, ...]:
        return self.oriented.order

    @property
    def m(self) -> int:
        return self.tree.m

    @property
    def index(self) -> int:
        return 3 * self.tree.m + len(self.coloring.blue)

    def position_word(self) -> tuple[tuple[str, int], ...]:
        """Per cyclic position: color letter and, for free vertices, the offset to the partner."""
        order = self.external_order
        pos = {v: i for i, v in enumerate(order)}
        n = len(order)
        word = []
        for v in order:
            lab = self.coloring.label(v)
            if lab == "odd":
                word.append(("b", 0))
            elif lab == "even":
                word.append(("e", 0))
            else:
                word.append(("f", (pos[lab] - pos[v]) % n))
        return tuple(word)

    @cached_property
    def ident(self) -> str:
        """Stable short identifier of this labelled diagram."""
        payload = repr((self.tree.adjacency, self.oriented.orientation, self.coloring))
        return hashlib.sha1(payload.encode()).hexdigest()[:12]


def _rotate_word(word: Sequence[tuple[str, int]], k: int) -> tuple[tuple[str, int], ...]:
    n = len(word)
    return tuple(word[(i - k) % n] for i in range(n))


def oriented_trees(m: int, convention: str = "table") -> list[OrientedTree]:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if m == 0:
        return enumerate_orientations(single_edge())
    if m == 1:
        return enumerate_orientations(star(3))
    out = []
    for T in enumerate_trees(m, 3):
        out.extend(enumerate_orientations(T, dedup=convention == "isomorphism"))
    return out


def diagrams_for(D: OrientedTree, t: tuple[int, int, int], convention: str = "table") -> list[TreeDiagram]:
    """Colorings of one oriented tree, reduced under the convention's rotations."""
    m = D.tree.m
    n = len(D.order)
    if m == 0:
        return [TreeDiagram(D, next(enumerate_colorings(D, t)))]
    syms = D.rotation_symmetries
    if convention == "table" and m >= 2:
        syms = tuple(k for k in syms if (2 * k) % n == 0)
    seen: set[tuple] = set()
    out = []
    for col in enumerate_colorings(D, t):
        diagram = TreeDiagram(D, col)
        word = diagram.position_word()
        if word in seen:
            continue
        out.append(diagram)
        for k in syms:
            seen.add(_rotate_word(word, k))
    return out


def enumerate_tree_diagrams(d: int, convention: str = "table") -> list[TreeDiagram]:
    """Tree diagrams whose subgroup has index d."""
    if d < 2:
        raise ValueError("index must be at least 2")
    out = []
    for m, b, r, f in index_triples(d):
        for D in oriented_trees(m, convention):
            out.extend(diagrams_for(D, (b, r, f), convention))
    return out
