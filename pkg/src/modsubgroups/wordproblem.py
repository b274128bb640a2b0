"""Word problem for the subgroup attached to a Kulkarni diagram.

``reduce`` multiplies g on the left by side-pairing generators until both
column cusps g(oo) and g(0) are cusps of the g.F.s.; ``is_member`` decides
membership from that reduced form. Matrices are handled as signed 4-tuples
``(a, b, c, d)`` internally; the public functions accept ``ProjMatrix`` too.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Union

from .core import ProjMatrix, normalize
from .kulkarni import KulkarniDiagram, cusp_d

__all__ = [
    "SignedMatrix",
    "reduce",
    "is_member",
    "coset_representatives",
    "ReductionError",
]

Mat = tuple[int, int, int, int]


class ReductionError(RuntimeError):
    """The reduction exceeded its step bound."""


@dataclass(frozen=True, slots=True)
class SignedMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def entries(self) -> Mat:
        return (self.a, self.b, self.c, self.d)

    def projective(self) -> ProjMatrix:
        return normalize(self.a, self.b, self.c, self.d)


MatrixLike = Union[SignedMatrix, ProjMatrix, Mat]


def _entries(g: MatrixLike) -> Mat:
    if isinstance(g, tuple):
        a, b, c, d = g
        if a * d - b * c != 1:
            raise ValueError("determinant must be 1")
        return g
    return g.entries()


def _mul(x: Mat, y: Mat) -> Mat:
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def _inv(x: Mat) -> Mat:
    return (x[3], -x[1], -x[2], x[0])


def _quo(p: int, q: int) -> tuple[int, int]:
    """Cusp p/q with non-negative denominator; q = 0 gives -1/0 or 1/0."""
    if q == 0:
        return (1 if p > 0 else -1, 0)
    if q < 0:
        return (-p, -q)
    return (p, q)


def _cmp(x: tuple[int, int], y: tuple[int, int]) -> int:
    if x[1] == 0 or y[1] == 0:
        u = x[0] if x[1] == 0 else 0
        v = y[0] if y[1] == 0 else 0
        return (u > v) - (u < v)
    lhs, rhs = x[0] * y[1], y[0] * x[1]
    return (lhs > rhs) - (lhs < rhs)


def _same(x: tuple[int, int], y: tuple[int, int]) -> bool:
    """Equal as list markers (-oo and oo differ); fractions need not be reduced."""
    if x[1] == 0 or y[1] == 0:
        return x[1] == y[1] and x[0] == y[0]
    return x[0] * y[1] == y[0] * x[1]


def _proj_same(x: tuple[int, int], y: tuple[int, int]) -> bool:
    return x[0] * y[1] == y[0] * x[1]


_cusp_key = cmp_to_key(_cmp)


class _Context:
    """Precomputed g.F.s. data for repeated reductions."""

    __slots__ = ("N", "G", "keys", "odd", "gens", "gens_inv", "free_with_1", "side1_even", "mediants", "lookup")

    def __init__(self, K: KulkarniDiagram) -> None:
        self.G = [(0, 0)] + [(c.num, c.den) for c in K.gfs.cusps]  # 1-based
        self.N = len(K.gfs)
        self.keys = [_cusp_key(x) for x in self.G[1:]]
        labels = K.side_labels
        self.odd = [False] + [lab == "odd" for lab in labels]
        self.gens = [(1, 0, 0, 1)] + list(K.side_matrices)
        self.gens_inv = [_inv(x) for x in self.gens]
        self.mediants = [(0, 0)] + [
            (self.G[k][0] + self.G[k + 1][0], self.G[k][1] + self.G[k + 1][1]) for k in range(1, self.N)
        ]
        self.free_with_1 = [j for j, lab in enumerate(labels, 1) if lab == 1]
        self.side1_even = labels[0] == "even"
        # reduced cusp -> list position, markers kept apart
        self.lookup = {}
        for i, (p, q) in enumerate(self.G[1:], 1):
            self.lookup[(p, q)] = i

    def position(self, x: tuple[int, int]) -> int | None:
        p, q = x
        if q:
            from math import gcd

            g = gcd(p, q)
            x = (p // g, q // g)
        return self.lookup.get(x)


_CONTEXTS: dict[int, tuple[KulkarniDiagram, _Context]] = {}


def _context(K: KulkarniDiagram) -> _Context:
    hit = _CONTEXTS.get(id(K))
    if hit is not None and hit[0] is K:
        return hit[1]
    ctx = _Context(K)
    if len(_CONTEXTS) > 256:
        _CONTEXTS.clear()
    _CONTEXTS[id(K)] = (K, ctx)
    return ctx


def _s2(x: Mat) -> Mat:
    """x times (0 1; -1 0)."""
    return (-x[1], x[0], -x[3], x[2])


def _s(x: Mat) -> Mat:
    """x times (0 -1; 1 0)."""
    return (x[1], -x[0], x[3], -x[2])


def _reduce(ctx: _Context, g: Mat, max_steps: int) -> Mat:
    G, N = ctx.G, ctx.N
    last = G[N - 1]
    wraps = 0
    for _ in range(max_steps):
        g11, g12, g21, g22 = g
        if g21 == 0:
            case = 1
        elif g22 == 0:
            case = 2
        else:
            case = 0
        if case == 0:
            if _cmp(_quo(g12, g22), _quo(g11, g21)) > 0:
                g = _s2(g)
                wraps += 1
                continue
        elif case == 1:
            if g11 > 0:
                if _cmp(_quo(g12, g22), (0, 1)) < 0:
                    g = _s(g)
                    wraps += 1
                    continue
            elif _cmp(_quo(g12, g22), last) > 0:
                g = (-g11, -g12, -g21, -g22)
            else:
                g = _s2(g)
                wraps += 1
                continue
        else:
            if g12 > 0:
                if _cmp(_quo(g11, g21), (0, 1)) > 0:
                    g = _s2(g)
                    wraps += 1
                    continue
                g = (-g11, -g12, -g21, -g22)
            elif _cmp(_quo(g11, g21), last) > 0:
                g = _s(g)
                wraps += 1
                continue
        g11, g12, g21, g22 = g
        a = _quo(g12, g22)
        b = _quo(g11, g21)
        pa = ctx.position(a)
        pb = ctx.position(b)
        if pa is not None and pb is not None:
            for _ in range(wraps % 4):
                g = _s2(g)
            return g
        if case == 1:
            c = N
        elif case == 2:
            c = 2
        elif pb is not None:
            c = pb
        else:
            c = bisect_left(ctx.keys, _cusp_key(b)) + 1
        side = c - 1
        if not ctx.odd[side]:
            y = ctx.gens[side]
        elif g21 == 0 or _cmp(b, ctx.mediants[side]) > 0:
            y = ctx.gens[side]
        else:
            y = ctx.gens_inv[side]
        g = _mul(y, g)
    raise ReductionError(f"reduction did not terminate within {max_steps} steps")


def _step_bound(g: Mat, ctx: _Context) -> int:
    size = max(abs(x) for x in g) + 1
    return 64 + 16 * ctx.N * size.bit_length() * 4


def reduce(K: KulkarniDiagram, g: MatrixLike, max_steps: int | None = None) -> SignedMatrix:
    """A reduced element of the coset Delta*g."""
    ctx = _context(K)
    x = _entries(g)
    bound = max_steps if max_steps is not None else _step_bound(x, ctx)
    return SignedMatrix(*_reduce(ctx, x, bound))


def _member_reduced(ctx: _Context, x: Mat) -> bool:
    a, b, c, d = x
    if b == 0 and c == 0:
        return True
    if a == 0 and d == 0 and abs(b) == 1:
        return ctx.side1_even
    col0 = _quo(b, d)  # image of 0
    colinf = _quo(a, c)  # image of oo
    for j in ctx.free_with_1:
        if _proj_same(col0, ctx.G[j]) and _proj_same(colinf, ctx.G[j + 1]):
            return True
    return False


def _is_member(ctx: _Context, x: Mat) -> bool:
    return _member_reduced(ctx, _reduce(ctx, x, _step_bound(x, ctx)))


def is_member(K: KulkarniDiagram, g: MatrixLike) -> bool:
    """Whether g lies in the subgroup attached to K."""
    ctx = _context(K)
    return _is_member(ctx, _entries(g))


def _rep_entries(K: KulkarniDiagram) -> list[Mat]:
    G = K.gfs
    N = len(G)
    reps: list[Mat] = []
    for i in range(1, N):
        w = cusp_d(K, i)
        A = (-G[i].num, G[i + 1].num, -G[i].den, G[i + 1].den)
        if K.side_labels[i - 1] == "odd":
            reps.append(_mul(A, (1, -1, 0, 1)))
        for j in range(w):
            reps.append(_mul(A, (1, j, 0, 1)))
    return reps


def coset_representatives(K: KulkarniDiagram) -> list[ProjMatrix]:
    """Representatives g_1..g_d of the right cosets Delta*g_i."""
    return [normalize(*x) for x in _rep_entries(K)]
