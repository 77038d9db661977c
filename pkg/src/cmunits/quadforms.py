"""Reduced binary quadratic forms, class numbers and CM points."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from sympy import factorint, isprime

from .numerics import QuadSurd

__all__ = [
    "InvalidDiscriminant",
    "NonFundamentalDiscriminant",
    "BQF",
    "check_discriminant",
    "is_fundamental",
    "require_fundamental",
    "fundamental_discriminants",
    "reduced_forms",
    "class_number",
    "theta_K",
    "theta_Q",
    "kronecker_symbol",
    "splitting_type",
]


class InvalidDiscriminant(ValueError):
    pass


class NonFundamentalDiscriminant(InvalidDiscriminant):
    pass


@dataclass(frozen=True, order=True)
class BQF:
    """The form ``a X^2 + b XY + c Y^2``."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if a < 1 or self.discriminant >= 0:
            return False
        return (-a < b <= a < c) or (0 <= b <= a == c)

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def check_discriminant(d: int) -> int:
    d = int(d)
    if d >= 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{d} is not a negative discriminant")
    return d


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def require_fundamental(d: int) -> int:
    d = check_discriminant(d)
    if not is_fundamental(d):
        raise NonFundamentalDiscriminant(f"{d} is not a fundamental discriminant")
    return d


def fundamental_discriminants(lo: int, hi: int = -3) -> list[int]:
    """Fundamental discriminants in ``[lo, hi]``, from ``hi`` downward."""
    return [d for d in range(min(hi, -3), lo - 1, -1) if is_fundamental(d)]


def reduced_forms(d: int) -> list[BQF]:
    """Primitive reduced forms of discriminant ``d``, by ascending ``a`` then ``b``.

    The principal form comes first.
    """
    d = check_discriminant(d)
    forms = []
    amax = isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(BQF(a, b, c))
    return forms


def class_number(d: int) -> int:
    return len(reduced_forms(d))


def theta_K(d: int) -> QuadSurd:
    """Generator of the ring of integers used as the base CM point."""
    d = require_fundamental(d)
    if d % 4 == 0:
        return QuadSurd(0, 1, 2, d)
    return QuadSurd(3, 1, 2, d)


def theta_Q(Q: BQF) -> QuadSurd:
    """Root ``(-b + sqrt(d)) / 2a`` of a reduced form."""
    if not Q.is_reduced():
        raise ValueError(f"{Q} is not reduced")
    return QuadSurd(-Q.b, 1, 2 * Q.a, Q.discriminant)


def kronecker_symbol(d: int, p: int) -> int:
    """Splitting of the prime ``p`` in the field of discriminant ``d``.

    +1 split, -1 inert, 0 ramified.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        if d % 4 == 0:
            return 0
        return 1 if d % 8 == 1 else -1
    r = d % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def splitting_type(d: int, p: int) -> str:
    return {1: "split", -1: "inert", 0: "ramified"}[kronecker_symbol(d, p)]
