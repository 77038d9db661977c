"""Explicit Shimura reciprocity at the level of matrices mod N.

The group ``W`` is the image of ``(O_K/N)^*`` in ``GL2(Z/N)/{+-1}`` through
the regular representation on the basis ``(theta_K, 1)``.  Modulo the image
of the global units it is ``Gal(K_(N)/H_K)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from sympy import isprime

from .modlevel import GL2ModN
from .numerics import QuadSurd
from .quadforms import BQF, class_number, require_fundamental, theta_K

__all__ = [
    "FieldData",
    "w_group",
    "kernel",
    "gal_over_HK",
    "u_Q",
    "relative_galois",
    "generated_subgroup",
]

# units modulo +-1 as (t, s) with u = t + s theta_K
UNITS = {
    -3: [(1, 0), (-2, 1), (1, -1)],  # 1, theta - 2, 1 - theta
    -4: [(1, 0), (0, 1)],  # 1, i
}


@dataclass(frozen=True)
class FieldData:
    d: int
    B: int
    C: int
    omega: int
    h: int

    @classmethod
    def from_discriminant(cls, d: int) -> FieldData:
        d = require_fundamental(d)
        if d % 4 == 0:
            B, C = 0, -d // 4
        else:
            B, C = -3, (9 - d) // 4
        omega = {-3: 6, -4: 4}.get(d, 2)
        return cls(d, B, C, omega, class_number(d))

    @cached_property
    def theta(self) -> QuadSurd:
        return theta_K(self.d)

    def matrix(self, t: int, s: int, n: int) -> GL2ModN:
        """Image of ``t + s theta_K`` in ``GL2(Z/n)/{+-1}``."""
        return GL2ModN(n, t - self.B * s, -self.C * s, s, t)


def _as_field(F) -> FieldData:
    return F if isinstance(F, FieldData) else FieldData.from_discriminant(F)


def w_group(n: int, F) -> list[GL2ModN]:
    if n < 2:
        raise ValueError("n must be at least 2")
    F = _as_field(F)
    out = set()
    for t in range(n):
        for s in range(n):
            # det = t^2 - B t s + C s^2 is the norm of t + s theta
            det = t * t - F.B * t * s + F.C * s * s
            if gcd(det % n, n) == 1:
                out.add(F.matrix(t, s, n))
    return sorted(out)


def kernel(n: int, F) -> list[GL2ModN]:
    F = _as_field(F)
    units = UNITS.get(F.d, [(1, 0)])
    return sorted({F.matrix(t, s, n) for t, s in units})


def _cosets(group: list[GL2ModN], sub: list[GL2ModN]) -> list[GL2ModN]:
    """Coset representatives, the identity coset first."""
    reps, covered = [], set()
    ident = [g for g in group if g.entries == (1, 0, 0, 1)]
    for g in ident + [g for g in group if g not in ident]:
        if g in covered:
            continue
        reps.append(g)
        covered.update(k @ g for k in sub)
    return reps


def gal_over_HK(n: int, F) -> list[GL2ModN]:
    """Coset representatives of ``W`` modulo the unit image, one per class."""
    F = _as_field(F)
    return _cosets(w_group(n, F), kernel(n, F))


def u_Q(Q: BQF, p: int, F) -> GL2ModN:
    """Matrix carrying ``h(theta_K)`` to its conjugate ``h^u_Q(theta_Q)``."""
    F = _as_field(F)
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if Q.discriminant != F.d or not Q.is_reduced():
        raise ValueError(f"{Q} is not a reduced form of discriminant {F.d}")
    a, b, c = Q
    if F.d % 4 == 0:
        assert b % 2 == 0
        h = b // 2
        if a % p:
            m = (a, h, 0, 1)
        elif c % p:
            m = (-h, -c, 1, 0)
        else:
            m = (-a - h, -c - h, 1, -1)
    else:
        assert (3 + b) % 2 == 0 and (3 - b) % 2 == 0, "b must be odd"
        plus, minus = (3 + b) // 2, (3 - b) // 2
        if a % p:
            m = (a, plus, 0, 1)
        elif c % p:
            m = (minus, -c, 1, 0)
        else:
            m = (-a + minus, -c - plus, 1, -1)
    return GL2ModN(p, *m)


def relative_galois(m: int, n: int, F) -> list[GL2ModN]:
    """``Gal(K_(m)/K_(n))`` as classes of ``W_m / Ker_m`` trivial mod ``n``."""
    if m % n:
        raise ValueError(f"{n} does not divide {m}")
    F = _as_field(F)
    if m == n:
        return [GL2ModN.identity(m)]
    ker_n = set(kernel(n, F))
    inside = [g for g in w_group(m, F) if g.reduce(n) in ker_n]
    return _cosets(inside, kernel(m, F))


def generated_subgroup(gens, n: int) -> set[GL2ModN]:
    group = {GL2ModN.identity(n)}
    frontier = list(group)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return group
