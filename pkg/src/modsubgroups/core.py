"""Exact arithmetic for PSL2(Z): projective matrices, cusps and permutations.

Everything here is immutable. Matrices are stored as their sign-normalized
SL2(Z) representative, cusps as reduced fractions with the two infinity
markers ``-1/0`` and ``1/0`` kept distinct, and permutations 1-based so that
cycle notation reads the same as in hand computations.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "ProjMatrix",
    "Cusp",
    "Perm",
    "normalize",
    "mat_mul",
    "mat_inv",
    "make_cusp",
    "perm_compose",
    "perm_inverse",
    "fixed_points",
    "cycle_type",
    "orbits",
    "is_transitive",
    "IDENTITY",
    "S",
    "T",
    "R",
    "LOWER",
    "INT64_BOUND",
]

# Entries beyond this abort: every value we produce up to index ~20 is tiny,
# so hitting the bound means something has gone badly wrong.
INT64_BOUND = 2**63


def _check_bound(*xs: int) -> None:
    for x in xs:
        if not -INT64_BOUND < x < INT64_BOUND:
            raise OverflowError(f"matrix entry {x} exceeds the 64-bit guard")


@dataclass(frozen=True, slots=True)
class ProjMatrix:
    """Element of PSL2(Z) stored as its sign-normalized SL2(Z) lift."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")
        if not (self.c > 0 or (self.c == 0 and self.d > 0)):
            raise ValueError(f"{self.rows()} is not sign-normalized")

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: ProjMatrix) -> ProjMatrix:
        return mat_mul(self, other)

    def inverse(self) -> ProjMatrix:
        return mat_inv(self)

    def __pow__(self, k: int) -> ProjMatrix:
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = out @ base
        return out

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    @classmethod
    def parse(cls, text: str) -> ProjMatrix:
        """Parse ``"[[a,b],[c,d]]"``."""
        nums = re.findall(r"-?\d+", text)
        shape = re.fullmatch(r"\s*\[\s*\[[^\[\]]*\]\s*,\s*\[[^\[\]]*\]\s*\]\s*", text)
        if len(nums) != 4 or shape is None:
            raise ValueError(f"cannot parse matrix {text!r}")
        return normalize(*map(int, nums))


def normalize(a: int, b: int, c: int, d: int) -> ProjMatrix:
    """Return the representative of ±(a,b;c,d) with c > 0, or c = 0 and d > 0."""
    if a * d - b * c != 1:
        raise ValueError(f"determinant of [[{a},{b}],[{c},{d}]] is not 1")
    _check_bound(a, b, c, d)
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    return ProjMatrix(a, b, c, d)


def mat_mul(A: ProjMatrix, B: ProjMatrix) -> ProjMatrix:
    return normalize(
        A.a * B.a + A.b * B.c,
        A.a * B.b + A.b * B.d,
        A.c * B.a + A.d * B.c,
        A.c * B.b + A.d * B.d,
    )


def mat_inv(A: ProjMatrix) -> ProjMatrix:
    return normalize(A.d, -A.b, -A.c, A.a)


IDENTITY = ProjMatrix(1, 0, 0, 1)
S = ProjMatrix(0, -1, 1, 0)
T = ProjMatrix(1, 1, 0, 1)
R = mat_mul(S, T)
LOWER = ProjMatrix(1, 0, 1, 1)


@dataclass(frozen=True, slots=True)
class Cusp:
    """Reduced extended rational; ``-1/0`` and ``1/0`` are distinct markers."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den < 0:
            raise ValueError("denominator must be non-negative")
        if self.den == 0 and self.num not in (-1, 1):
            raise ValueError("infinite cusp must be -1/0 or 1/0")
        if self.den > 0 and gcd(self.num, self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not reduced")

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def projectively_equal(self, other: Cusp) -> bool:
        """True when both name the same point of P1(Q); -oo and oo coincide."""
        return self.num * other.den == other.num * self.den

    def _cmp(self, other: Cusp) -> int:
        if self.den == 0 or other.den == 0:
            x = self.num if self.den == 0 else 0
            y = other.num if other.den == 0 else 0
            return (x > y) - (x < y)
        lhs, rhs = self.num * other.den, other.num * self.den
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other: Cusp) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Cusp) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Cusp) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Cusp) -> bool:
        return self._cmp(other) >= 0

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    @classmethod
    def parse(cls, text: str) -> Cusp:
        p, _, q = text.partition("/")
        return make_cusp(int(p), int(q) if q else 1)


def make_cusp(p: int, q: int) -> Cusp:
    """Reduce p/q; a zero denominator gives -oo or oo by the sign of p."""
    if p == 0 and q == 0:
        raise ValueError("0/0 is not a cusp")
    if q == 0:
        return Cusp(1 if p > 0 else -1, 0)
    g = gcd(p, q)
    if q < 0:
        g = -g
    return Cusp(p // g, q // g)


NEG_INF = Cusp(-1, 0)
POS_INF = Cusp(1, 0)


@dataclass(frozen=True, slots=True)
class Perm:
    """Permutation of {1..d}; ``images[i-1]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Perm) -> Perm:
        """Functional composition: ``(p * q)(i) = p(q(i))``."""
        return perm_compose(self, other)

    def __pow__(self, k: int) -> Perm:
        n = self.degree
        base = self if k >= 0 else perm_inverse(self)
        out = list(range(1, n + 1))
        img = base.images
        k = abs(k)
        # square-and-multiply on image tables
        while k:
            if k & 1:
                out = [img[x - 1] for x in out]
            img = tuple(img[x - 1] for x in img)
            k >>= 1
        return Perm(tuple(out))

    def inverse(self) -> Perm:
        return perm_inverse(self)

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles(include_fixed=True))) if self.degree else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, cycles: str | Iterable[Sequence[int]], degree: int) -> Perm:
        """Build from ``"(1,2)(3,4)"`` or a list of cycles."""
        if isinstance(cycles, str):
            cycles = [
                [int(x) for x in body.split(",") if x.strip()]
                for body in re.findall(r"\(([^()]*)\)", cycles)
            ]
        img = list(range(1, degree + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for i, x in enumerate(cyc):
                if not 1 <= x <= degree or x in seen:
                    raise ValueError(f"bad cycle entry {x} for degree {degree}")
                seen.add(x)
                img[x - 1] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """Return p∘q (apply q first)."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    pi = p.images
    return Perm(tuple(pi[x - 1] for x in q.images))


def perm_inverse(p: Perm) -> Perm:
    out = [0] * p.degree
    for i, x in enumerate(p.images, 1):
        out[x - 1] = i
    return Perm(tuple(out))


def fixed_points(p: Perm) -> set[int]:
    return {i for i, x in enumerate(p.images, 1) if i == x}


def cycle_type(p: Perm) -> Counter[int]:
    """Multiset of cycle lengths, fixed points included."""
    return Counter(len(c) for c in p.cycles(include_fixed=True))


def orbits(gens: Iterable[Perm], degree: int) -> list[frozenset[int]]:
    """Orbit partition of {1..degree} under the group generated by ``gens``."""
    parent = list(range(degree + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator of degree {g.degree}, expected {degree}")
        for i, x in enumerate(g.images, 1):
            ri, rx = find(i), find(x)
            if ri != rx:
                parent[max(ri, rx)] = min(ri, rx)
    blocks: dict[int, set[int]] = {}
    for i in range(1, degree + 1):
        blocks.setdefault(find(i), set()).add(i)
    return [frozenset(b) for _, b in sorted(blocks.items())]


def is_transitive(gens: Iterable[Perm], degree: int) -> bool:
    return len(orbits(gens, degree)) == 1
