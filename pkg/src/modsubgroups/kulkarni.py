"""Kulkarni diagrams: a tree diagram plus its generalized Farey symbol.

The g.F.s. is a cusp list ``-1/0, 0/1, c_3, ..., c_{m+2}, 1/0``. Side k joins
c_k and c_{k+1} and carries the label of the k-th leaf in cyclic order:
``"even"``, ``"odd"`` or the 1-based index of its partner side.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Sequence, Union

from .core import Cusp, Perm, ProjMatrix, make_cusp, normalize, orbits
from .diagrams import TreeDiagram

__all__ = [
    "GeneralizedFareySymbol",
    "KulkarniDiagram",
    "Invariants",
    "CuspClass",
    "bipartite_distance",
    "tree_distance",
    "farey_symbol",
    "kulkarni_diagram",
    "cusp_generator",
    "generators",
    "cusp_orbit_group",
    "cusp_classes",
    "cusp_d",
    "cusp_width",
    "invariants",
]

SideLabel = Union[str, int]


@dataclass(frozen=True)
class GeneralizedFareySymbol:
    cusps: tuple[Cusp, ...]

    def __post_init__(self) -> None:
        c = self.cusps
        if len(c) < 3 or c[0] != Cusp(-1, 0) or c[-1] != Cusp(1, 0):
            raise ValueError("a g.F.s. runs from -1/0 to 1/0")
        inner = c[1:-1]
        if any(x.is_infinite for x in inner) or any(x >= y for x, y in zip(inner, inner[1:])):
            raise ValueError("interior cusps must be increasing rationals")
        if inner[0].den != 1 or inner[-1].den != 1:
            raise ValueError("second and second-to-last cusps must be integers")
        if Cusp(0, 1) not in inner:
            raise ValueError("0 must be a cusp")
        for x, y in zip(c, c[1:]):
            if abs(x.num * y.den - x.den * y.num) != 1:
                raise ValueError(f"{x}, {y} are not unimodular neighbours")

    def __len__(self) -> int:
        return len(self.cusps)

    def __getitem__(self, i: int) -> Cusp:
        """1-based access."""
        return self.cusps[i - 1]

    def strings(self) -> list[str]:
        return [str(c) for c in self.cusps]

    @classmethod
    def parse(cls, items: Sequence[str]) -> GeneralizedFareySymbol:
        return cls(tuple(Cusp.parse(s) for s in items))


def tree_distance(D: TreeDiagram, v: int, w: int) -> int:
    return D.tree.distances[v][w]


def bipartite_distance(D: TreeDiagram, v: int, w: int) -> int:
    """Distance in the bipartite cuboid graph between cycle-adjacent leaves."""
    order = D.external_order
    i, j = order.index(v), order.index(w)
    n = len(order)
    if (j - i) % n != 1 and (i - j) % n != 1:
        raise ValueError(f"{v} and {w} are not adjacent in the cyclic order")
    blue = set(D.coloring.blue)
    corr = (v in blue) + (w in blue)
    return 2 * tree_distance(D, v, w) - 2 + corr


def farey_symbol(D: TreeDiagram) -> GeneralizedFareySymbol:
    """The g.F.s. attached to D, built left to right from cyclic leaf distances."""
    v = D.external_order
    ne = len(v)
    F = [(-1, 0), (0, 1)]
    if ne > 2:
        F.append((1, tree_distance(D, v[0], v[1]) - 1))
        for i in range(2, ne - 1):  # 1-based i = 2..ne-2
            dist = tree_distance(D, v[i - 1], v[i])
            alpha, beta = F[i - 1]  # older cusp
            gamma, delta = F[i]  # newest cusp
            # beta*X - alpha*Y = dist - 1,  gamma*Y - delta*X = -1
            det = beta * gamma - alpha * delta
            rhs1, rhs2 = dist - 1, -1
            X_num = rhs1 * gamma + alpha * rhs2
            Y_num = beta * rhs2 + delta * rhs1
            if det == 0 or X_num % det or Y_num % det:
                raise RuntimeError("g.F.s. step has no integral solution")
            F.append((X_num // det, Y_num // det))
    F.append((1, 0))
    return GeneralizedFareySymbol(tuple(make_cusp(p, q) for p, q in F))


@dataclass(frozen=True)
class KulkarniDiagram:
    diagram: TreeDiagram
    gfs: GeneralizedFareySymbol
    side_labels: tuple[SideLabel, ...]

    def __post_init__(self) -> None:
        if len(self.gfs) != len(self.side_labels) + 1:
            raise ValueError("one side per consecutive cusp pair")
        for k, lab in enumerate(self.side_labels, 1):
            if isinstance(lab, int) and self.side_labels[lab - 1] != k:
                raise ValueError(f"side {k} pairs with {lab} but not conversely")

    @property
    def index(self) -> int:
        return self.diagram.index

    @property
    def num_sides(self) -> int:
        return len(self.side_labels)

    @cached_property
    def gens(self) -> tuple[ProjMatrix, ...]:
        return tuple(generators(self))

    @cached_property
    def side_matrices(self) -> tuple[tuple[int, int, int, int], ...]:
        """Signed generator entries per side (1-based side k at [k-1])."""
        return tuple(_generator_entries(self, k) for k in range(1, self.num_sides + 1))


def kulkarni_diagram(D: TreeDiagram) -> KulkarniDiagram:
    gfs = farey_symbol(D)
    pos = {v: k for k, v in enumerate(D.external_order, 1)}
    labels: list[SideLabel] = []
    for v in D.external_order:
        lab = D.coloring.label(v)
        labels.append(pos[lab] if isinstance(lab, int) else lab)
    return KulkarniDiagram(D, gfs, tuple(labels))


def _generator_entries(K: KulkarniDiagram, k: int) -> tuple[int, int, int, int]:
    G = K.gfs
    if not 1 <= k <= K.num_sides:
        raise ValueError(f"side {k} out of range")
    a, b = G[k + 1].num, G[k + 1].den
    c, d = G[k].num, G[k].den
    lab = K.side_labels[k - 1]
    if lab == "even":
        return (a * b + c * d, -c * c - a * a, b * b + d * d, -a * b - c * d)
    if lab == "odd":
        return (
            a * b + c * b + c * d,
            -c * c - a * c - a * a,
            b * b + b * d + d * d,
            -a * b - a * d - c * d,
        )
    if not isinstance(lab, int):
        raise ValueError(f"free side {k} without partner")
    j = lab
    a2, b2 = G[j + 1].num, G[j + 1].den
    c2, d2 = G[j].num, G[j].den
    return (a2 * b + c2 * d, -c2 * c - a2 * a, d2 * d + b2 * b, -a * b2 - c * d2)


def cusp_generator(K: KulkarniDiagram, k: int) -> ProjMatrix:
    """Side-pairing transformation attached to side k."""
    return normalize(*_generator_entries(K, k))


def generators(K: KulkarniDiagram) -> list[ProjMatrix]:
    """Independent generators: one per even/odd side and one per free pair."""
    out = []
    for k, lab in enumerate(K.side_labels, 1):
        if isinstance(lab, int) and lab < k:
            continue
        out.append(cusp_generator(K, k))
    return out


def cusp_orbit_group(K: KulkarniDiagram) -> list[Perm]:
    """Transpositions on cusp indices 1..m+2 whose orbits are the cusp classes."""
    n = K.num_sides  # = m + 2 cusp positions once -oo and oo are identified

    def wrap(i: int) -> int:
        return (i - 1) % n + 1

    def transposition(x: int, y: int) -> Perm:
        img = list(range(1, n + 1))
        x, y = wrap(x), wrap(y)
        img[x - 1], img[y - 1] = y, x
        return Perm(tuple(img))

    gens = []
    for k, lab in enumerate(K.side_labels, 1):
        if isinstance(lab, int):
            gens.append(transposition(k, lab + 1))
            gens.append(transposition(k + 1, lab))
        else:
            gens.append(transposition(k, k + 1))
    return gens


def cusp_classes(K: KulkarniDiagram) -> list[frozenset[int]]:
    return orbits(cusp_orbit_group(K), K.num_sides)


def cusp_d(K: KulkarniDiagram, i: int) -> int:
    """|a_{i-1} b_{i+1} - a_{i+1} b_{i-1}| with indices cyclic on 1..m+2."""
    n = K.num_sides
    G = K.gfs
    prev = G[(i - 2) % n + 1]
    nxt = G[i % n + 1]
    return abs(prev.num * nxt.den - nxt.num * prev.den)


def _odd(K: KulkarniDiagram, side: int) -> bool:
    n = K.num_sides
    return K.side_labels[(side - 1) % n] == "odd"


def cusp_width(K: KulkarniDiagram, C: frozenset[int] | Sequence[int]) -> int:
    """Width of a cusp class: sum of d(c) + e(c)/2, accumulated as 2W."""
    twice = 0
    for i in C:
        e = _odd(K, i - 1) + _odd(K, i)
        twice += 2 * cusp_d(K, i) + e
    if twice % 2:
        raise RuntimeError("cusp width is not an integer")
    return twice // 2


@dataclass(frozen=True)
class CuspClass:
    members: tuple[Cusp, ...]
    positions: tuple[int, ...]
    width: int


@dataclass(frozen=True)
class Invariants:
    index: int
    e2: int
    e3: int
    t: int
    genus: int
    level: int
    cusps: tuple[CuspClass, ...]


def invariants(K: KulkarniDiagram) -> Invariants:
    D = K.diagram
    b, r, f = D.coloring.params
    classes = []
    for C in cusp_classes(K):
        pos = tuple(sorted(C))
        classes.append(CuspClass(tuple(K.gfs[i] for i in pos), pos, cusp_width(K, pos)))
    t = len(classes)
    twice_g = f - t + 1
    if twice_g < 0 or twice_g % 2:
        raise RuntimeError(f"inconsistent diagram: 2g = {twice_g}")
    index = 3 * D.m + b
    if sum(c.width for c in classes) != index:
        raise RuntimeError("cusp widths do not sum to the index")
    return Invariants(
        index=index,
        e2=r,
        e3=b,
        t=t,
        genus=twice_g // 2,
        level=lcm(*(c.width for c in classes)),
        cusps=tuple(classes),
    )
