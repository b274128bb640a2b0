"""Coset action, passports, canonical forms, congruence test and block systems.

``theta`` is the right action on the cosets Delta*g_i listed by
``coset_representatives``: ``theta(g)(i) = j`` when Delta*g_i*g = Delta*g_j.
As functions this is an anti-homomorphism, so the passport relation reads
sigma_R = sigma_S o sigma_T with sigma_T applied first. Wherever a matrix word
has to be evaluated (Hsu's relators) the inverse permutations are used, which
turns the action into a homomorphism for functional composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    LOWER,
    Perm,
    ProjMatrix,
    S,
    T,
    fixed_points,
    is_transitive,
    perm_compose,
    perm_inverse,
)
from .kulkarni import KulkarniDiagram, invariants, kulkarni_diagram
from .diagrams import TreeDiagram
from .wordproblem import _context, _entries, _inv, _is_member, _mul, _rep_entries

__all__ = [
    "Passport",
    "SubgroupRecord",
    "theta",
    "passport",
    "canonical_passport",
    "gl2_key",
    "key_hex",
    "is_congruence",
    "hsu_test",
    "block_systems",
    "classify",
]


@dataclass(frozen=True)
class Passport:
    degree: int
    sigma_S: Perm
    sigma_R: Perm
    sigma_T: Perm

    def __post_init__(self) -> None:
        d = self.degree
        if not (self.sigma_S.degree == self.sigma_R.degree == self.sigma_T.degree == d):
            raise ValueError("degree mismatch")
        if not (self.sigma_S**2).is_identity():
            raise ValueError("sigma_S^2 != 1")
        if not (self.sigma_R**3).is_identity():
            raise ValueError("sigma_R^3 != 1")
        if perm_compose(self.sigma_S, self.sigma_T) != self.sigma_R:
            raise ValueError("sigma_S o sigma_T != sigma_R")
        if not is_transitive([self.sigma_S, self.sigma_R], d):
            raise ValueError("<sigma_S, sigma_R> is not transitive")

    @classmethod
    def from_ST(cls, sigma_S: Perm, sigma_T: Perm) -> Passport:
        return cls(sigma_S.degree, sigma_S, perm_compose(sigma_S, sigma_T), sigma_T)

    @classmethod
    def parse(cls, s: str, t: str, degree: int) -> Passport:
        return cls.from_ST(Perm.from_cycles(s, degree), Perm.from_cycles(t, degree))

    def strings(self) -> tuple[str, str, str]:
        return (str(self.sigma_S), str(self.sigma_R), str(self.sigma_T))

    @property
    def genus(self) -> int:
        """Riemann-Hurwitz: g = 1 + d/12 - e2/4 - e3/3 - t/2."""
        d = self.degree
        e2 = len(fixed_points(self.sigma_S))
        e3 = len(fixed_points(self.sigma_R))
        t = len(self.sigma_T.cycles(include_fixed=True))
        twelve_g = 12 + d - 3 * e2 - 4 * e3 - 6 * t
        if twelve_g % 12:
            raise ValueError("inconsistent passport")
        return twelve_g // 12


def _coset_perm(K: KulkarniDiagram, g: ProjMatrix | Sequence[int]) -> Perm:
    ctx = _context(K)
    reps = _rep_entries(K)
    invs = [_inv(x) for x in reps]
    ge = _entries(g) if not isinstance(g, tuple) else g
    remaining = list(range(len(reps)))
    img = [0] * len(reps)
    for i, gi in enumerate(reps):
        h = _mul(gi, ge)
        for pos, j in enumerate(remaining):
            if _is_member(ctx, _mul(h, invs[j])):
                img[i] = j + 1
                del remaining[pos]
                break
        else:
            raise RuntimeError(f"no coset found for representative {i + 1}")
    return Perm(tuple(img))


def theta(K: KulkarniDiagram, g: ProjMatrix) -> Perm:
    """Permutation of the cosets induced by right multiplication by g."""
    return _coset_perm(K, g)


def passport(K: KulkarniDiagram) -> Passport:
    sS = theta(K, S)
    sT = theta(K, T)
    return Passport.from_ST(sS, sT)


def _relabel(sS: Sequence[int], sT: Sequence[int], base: int, width: int = 1) -> bytes:
    """Image tables after renumbering points in breadth-first order from ``base``."""
    d = len(sS)
    label = [0] * (d + 1)
    label[base] = 1
    order = [base]
    nxt = 2
    for x in order:
        for g in (sS, sT):
            y = g[x - 1]
            if not label[y]:
                label[y] = nxt
                nxt += 1
                order.append(y)
    if len(order) != d:
        raise ValueError("passport is not transitive")
    out = bytearray(d.to_bytes(width, "big"))
    for g in (sS, sT):
        for x in order:
            out += label[g[x - 1]].to_bytes(width, "big")
    return bytes(out)


def canonical_passport(P: Passport) -> bytes:
    """Invariant of (sigma_S, sigma_T) under simultaneous conjugation."""
    sS, sT = P.sigma_S.images, P.sigma_T.images
    width = 1 if P.degree < 256 else 2
    return min(_relabel(sS, sT, p, width) for p in range(1, P.degree + 1))


def gl2_key(P: Passport) -> bytes:
    """Invariant under conjugation in GL2(Z): diag(1,-1) fixes S and inverts T."""
    Q = Passport.from_ST(P.sigma_S, perm_inverse(P.sigma_T))
    return min(canonical_passport(P), canonical_passport(Q))


def key_hex(key: bytes) -> str:
    return key.hex()


def _split_two(n: int) -> tuple[int, int]:
    e = 1
    while n % 2 == 0:
        n //= 2
        e *= 2
    return e, n


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    """Smallest non-negative x with x = r1 mod m1 and x = r2 mod m2 (coprime moduli)."""
    x = (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2))) % (m1 * m2) if m2 > 1 else r1 % m1
    return x


def hsu_test(sigma_L: Perm, sigma_lower: Perm) -> bool:
    """Hsu's congruence criterion on the images of L = (1 1; 0 1) and R = (1 0; 1 1).

    Both arguments must come from a homomorphism into the symmetric group
    under functional composition (``p * q`` applies q first).
    """
    d = sigma_L.degree
    one = Perm.identity(d)
    L, R = sigma_L, sigma_lower
    N = L.order()
    e, m = _split_two(N)

    def comm(x: Perm, y: Perm) -> Perm:
        return x.inverse() * y.inverse() * x * y

    if e == 1:
        half = (N + 1) // 2
        return ((R**2) * (L ** (-half))) ** 3 == one
    if m == 1:
        z = next(x for x in range(N) if (1 - 5 * x) % N == 0)
        tau = (L**20) * (R**z) * (L**-4) * (R**-1)
        u = L * R.inverse() * L
        return (
            comm(tau, u) == tau**-2
            and comm(R, tau) == R**24
            and (tau * (R**5) * L * R.inverse() * L) ** 3 == one
        )
    z = next(x for x in range(e) if (1 - 5 * x) % e == 0)
    c = _crt(0, e, 1, m)
    dd = _crt(1, e, 0, m)
    a, b = L**c, R**c
    l, r = L**dd, R**dd
    s = (l**20) * (r**z) * (l**-4) * (r**-1)
    u = l * r.inverse() * l
    aba = a * b.inverse() * a
    return (
        comm(a, r) == one
        and aba**4 == one
        and aba**2 == (b.inverse() * a) ** 3
        and (b.inverse() * a) ** 3 == ((b**2) * (a ** (-((m + 1) // 2)))) ** 3
        and comm(s, u) == s**-2
        and comm(r, s) == r**24
        and u**2 == (s * (r**5) * u) ** 3
    )


def is_congruence(K: KulkarniDiagram | None = None, *, sigma_T: Perm | None = None, sigma_lower: Perm | None = None) -> bool:
    """Congruence test for the subgroup of K (or for given right-action images)."""
    if K is not None:
        sigma_T = theta(K, T)
        sigma_lower = theta(K, LOWER)
    if sigma_T is None or sigma_lower is None:
        raise ValueError("need a diagram or both permutations")
    return hsu_test(sigma_T.inverse(), sigma_lower.inverse())


def _block_closure(gens: Sequence[Sequence[int]], seed: Iterable[int], d: int) -> list[int]:
    """Finest invariant partition merging ``seed``; returns root labels per point."""
    parent = list(range(d + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seed = list(seed)
    pending = []
    for x in seed[1:]:
        pending.append((seed[0], x))
    while pending:
        x, y = pending.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for g in gens:
            pending.append((g[x - 1], g[y - 1]))
    return [find(x) for x in range(d + 1)]


def block_systems(P: Passport, blockcount: int) -> list[tuple[tuple[int, ...], ...]]:
    """Every partition into ``blockcount`` equal blocks preserved by sigma_S and sigma_T."""
    d = P.degree
    if blockcount < 1 or d % blockcount:
        raise ValueError(f"{blockcount} does not divide the degree {d}")
    size = d // blockcount
    gens = [P.sigma_S.images, P.sigma_T.images]
    found: set[tuple[tuple[int, ...], ...]] = set()
    seen: set[frozenset[int]] = set()
    stack = [frozenset([1])]
    while stack:
        B = stack.pop()
        if B in seen:
            continue
        seen.add(B)
        if len(B) == size:
            roots = _block_closure(gens, B, d)
            blocks: dict[int, list[int]] = {}
            for x in range(1, d + 1):
                blocks.setdefault(roots[x], []).append(x)
            found.add(tuple(sorted(tuple(b) for b in blocks.values())))
            continue
        for x in range(1, d + 1):
            if x in B:
                continue
            roots = _block_closure(gens, list(B) + [x], d)
            block = frozenset(y for y in range(1, d + 1) if roots[y] == roots[1])
            if len(block) <= size and size % len(block) == 0 and block not in seen:
                stack.append(block)
    return sorted(found)


@dataclass(frozen=True)
class SubgroupRecord:
    index: int
    passport: Passport
    key: bytes
    gl2: bytes
    genus: int
    e2: int
    e3: int
    cusps: tuple[tuple[tuple[str, ...], int], ...]
    level: int
    generators: tuple[ProjMatrix, ...]
    congruence: bool
    diagram: KulkarniDiagram = field(compare=False, repr=False)

    @property
    def diagram_id(self) -> str:
        return self.diagram.diagram.ident


def classify(D: TreeDiagram | KulkarniDiagram, *, congruence: bool = True) -> SubgroupRecord:
    """All invariants of one diagram, cross-checked against its passport."""
    K = D if isinstance(D, KulkarniDiagram) else kulkarni_diagram(D)
    inv = invariants(K)
    P = passport(K)
    if len(fixed_points(P.sigma_S)) != inv.e2 or len(fixed_points(P.sigma_R)) != inv.e3:
        raise RuntimeError("elliptic counts disagree with the passport")
    widths = sorted(c.width for c in inv.cusps)
    if sorted(len(c) for c in P.sigma_T.cycles(include_fixed=True)) != widths:
        raise RuntimeError("cusp widths disagree with sigma_T")
    if P.genus != inv.genus:
        raise RuntimeError("genus disagrees with the passport")
    cong = (
        hsu_test(P.sigma_T.inverse(), theta(K, LOWER).inverse()) if congruence else False
    )
    return SubgroupRecord(
        index=inv.index,
        passport=P,
        key=canonical_passport(P),
        gl2=gl2_key(P),
        genus=inv.genus,
        e2=inv.e2,
        e3=inv.e3,
        cusps=tuple((tuple(str(x) for x in c.members), c.width) for c in inv.cusps),
        level=inv.level,
        generators=K.gens,
        congruence=cong,
        diagram=K,
    )
