"""Level criterion for Siegel-function products and the group GL2(Z/N)/{+-1}."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import primefactors

from .numerics import ComplexBall
from .siegel import SiegelIndex, eval_siegel

__all__ = [
    "ExponentFamily",
    "FamilyParseError",
    "parse_family",
    "level_conditions",
    "check_level",
    "field_degree",
    "GL2ModN",
    "canonical_pm",
    "gl2_action",
    "act_family",
    "enumerate_gl2",
    "decompose",
    "evaluate_family",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 24


class FamilyParseError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentFamily:
    """Exponents ``m(r1, r2)`` of a product of Siegel functions of level ``n``."""

    n: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("level must be positive")
        merged: dict[SiegelIndex, int] = {}
        for idx, m in dict(self.entries).items():
            idx = idx.with_level(self.n)
            merged[idx] = merged.get(idx, 0) + int(m)
        clean = {k: v for k, v in sorted(merged.items()) if v != 0}
        object.__setattr__(self, "entries", clean)

    def __iter__(self):
        return iter(self.entries.items())

    def __hash__(self):
        return hash((self.n, tuple(self.entries.items())))

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return ";".join(f"{i.a}/{i.n},{i.b}/{i.n}:{m}" for i, m in self)


_TERM = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*,\s*(-?\d+)\s*/\s*(\d+)\s*:\s*(-?\d+)\s*$")


def parse_family(text: str, n: int | None = None) -> ExponentFamily:
    """Parse ``"a/n,b/n:m;..."`` into a family.

    Without ``n`` the level is the lcm of the denominators as written, so
    ``"0/6,3/6:4"`` has level 6.
    """
    terms = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        mt = _TERM.match(chunk)
        if mt is None:
            raise FamilyParseError(f"cannot parse term {chunk.strip()!r}")
        a, n1, b, n2, m = (int(g) for g in mt.groups())
        if n1 == 0 or n2 == 0:
            raise FamilyParseError(f"zero denominator in {chunk.strip()!r}")
        r1, r2 = Fraction(a, n1), Fraction(b, n2)
        if r1.denominator == 1 and r2.denominator == 1:
            raise FamilyParseError(f"index {chunk.strip()!r} lies in Z^2")
        terms.append((r1, r2, m, n1, n2))
    if not terms:
        raise FamilyParseError("empty family")
    if n is None:
        n = 1
        for *_, n1, n2 in terms:
            for den in (n1, n2):
                n = n * den // gcd(n, den)
    entries: dict[SiegelIndex, int] = {}
    for r1, r2, m, *_ in terms:
        try:
            idx = SiegelIndex.from_pair(r1, r2, n)
        except ValueError as exc:
            raise FamilyParseError(str(exc)) from None
        entries[idx] = entries.get(idx, 0) + m
    return ExponentFamily(n, entries)


def level_conditions(fam: ExponentFamily) -> dict[str, bool]:
    """The four congruences of the level criterion, by name.

    ``r1_squares`` and ``r2_squares`` form the first displayed condition,
    ``r1_r2`` the second and ``exponent_sum`` the third.
    """
    N = fam.n
    s11 = sum(m * idx.a * idx.a for idx, m in fam)
    s22 = sum(m * idx.b * idx.b for idx, m in fam)
    s12 = sum(m * idx.a * idx.b for idx, m in fam)
    total = sum(m for _, m in fam)
    mod_sq = gcd(2, N) * N
    return {
        "r1_squares": s11 % mod_sq == 0,
        "r2_squares": s22 % mod_sq == 0,
        "r1_r2": s12 % N == 0,
        "exponent_sum": (gcd(12, N) * total) % 12 == 0,
    }


def check_level(fam: ExponentFamily) -> bool:
    """Sufficient test that the product is a function of level ``fam.n``.

    A ``False`` answer does not prove the product lies outside that level.
    """
    return all(level_conditions(fam).values())


def field_degree(n: int) -> int:
    """``[F_n : F_1] = #GL2(Z/n)/{+-1}``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2:
        return 6
    deg = Fraction(n**4, 2)
    for p in primefactors(n):
        deg *= (1 - Fraction(1, p)) * (1 - Fraction(1, p * p))
    assert deg.denominator == 1
    return int(deg)


@dataclass(frozen=True, order=True)
class GL2ModN:
    """Invertible 2x2 matrix over Z/n, taken modulo +-1."""

    n: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("modulus must be positive")
        m = tuple(x % n for x in (self.a, self.b, self.c, self.d))
        if gcd((m[0] * m[3] - m[1] * m[2]) % n, n) != 1:
            raise ValueError(f"matrix {m} is not invertible mod {n}")
        neg = tuple(-x % n for x in m)
        for name, v in zip("abcd", min(m, neg)):
            object.__setattr__(self, name, v)

    @classmethod
    def from_matrix(cls, mat, n: int) -> GL2ModN:
        if len(mat) == 4:
            a, b, c, d = mat
        else:
            (a, b), (c, d) = mat
        return cls(n, a, b, c, d)

    @classmethod
    def identity(cls, n: int) -> GL2ModN:
        return cls(n, 1, 0, 0, 1)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    def __matmul__(self, other: GL2ModN) -> GL2ModN:
        if other.n != self.n:
            raise ValueError("moduli differ")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return GL2ModN(self.n, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __mul__ = __matmul__

    def inverse(self) -> GL2ModN:
        inv = pow(self.det, -1, self.n) if self.n > 1 else 0
        a, b, c, d = self.entries
        return GL2ModN(self.n, d * inv, -b * inv, -c * inv, a * inv)

    def reduce(self, m: int) -> GL2ModN:
        """Image modulo a divisor ``m`` of ``n``."""
        if self.n % m:
            raise ValueError(f"{m} does not divide {self.n}")
        return GL2ModN(m, *self.entries)

    def as_list(self) -> list[int]:
        return list(self.entries)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.n}"


def canonical_pm(idx: SiegelIndex) -> SiegelIndex:
    """Representative of ``+-idx`` modulo Z^2."""
    neg = SiegelIndex(-idx.a, -idx.b, idx.n)
    return min(idx, neg)


def gl2_action(idx: SiegelIndex, alpha: GL2ModN) -> SiegelIndex:
    """``(r1, r2) -> (r1 a + r2 c, r1 b + r2 d)`` modulo Z^2 and sign.

    Meaningful for the ``12n/gcd(6, n)``-th powers of Siegel functions.
    """
    if idx.n != alpha.n:
        raise ValueError(f"index denominator {idx.n} differs from matrix modulus {alpha.n}")
    a, b, c, d = alpha.entries
    return canonical_pm(SiegelIndex(idx.a * a + idx.b * c, idx.a * b + idx.b * d, idx.n))


def act_family(fam: ExponentFamily, alpha: GL2ModN) -> ExponentFamily:
    entries: dict[SiegelIndex, int] = {}
    for idx, m in fam:
        j = gl2_action(idx, alpha)
        entries[j] = entries.get(j, 0) + m
    return ExponentFamily(fam.n, entries)


def enumerate_gl2(n: int, cap: int = ENUMERATION_CAP) -> list[GL2ModN]:
    """All elements of GL2(Z/n)/{+-1}, sorted."""
    if n > cap:
        raise ValueError(f"modulus {n} exceeds enumeration cap {cap}")
    units = {u for u in range(n) if gcd(u, n) == 1}
    seen = set()
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if (a * d - b * c) % n in units:
            seen.add(GL2ModN(n, a, b, c, d))
    return sorted(seen)


def _sym(x: int, n: int) -> int:
    x %= n
    return x - n if 2 * x > n else x


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def decompose(alpha: GL2ModN) -> tuple[tuple[tuple[int, int], tuple[int, int]], int]:
    """Write ``alpha = (alpha1 mod n) * diag(1, dval)`` with ``alpha1`` in SL2(Z).

    ``alpha`` is a class modulo +-1, so the congruence holds for its
    canonical representative.
    """
    n = alpha.n
    dval = alpha.det
    if n == 1:
        return ((1, 0), (0, 1)), 0
    dinv = pow(dval, -1, n)
    a, b, c, d = alpha.a, alpha.b * dinv % n, alpha.c, alpha.d * dinv % n
    if c == 0 and d in (1, n - 1):
        # upper unitriangular up to sign; keep the obvious lift
        sign = 1 if d == 1 else -1
        return ((1, _sym(sign * b, n)), (0, 1)), dval
    # bottom row: coprime integer lift of (c, d)
    c0 = c if c else n
    d0 = d
    while gcd(c0, d0) != 1:
        d0 += n
    _, u, v = _xgcd(d0, c0)
    x, y = u, -v  # x*d0 - y*c0 = 1
    e = _sym(b * x - a * y, n)
    top = (x + e * c0, y + e * d0)
    if next(v for v in (*top, c0, d0) if v) < 0:
        # alpha is a class mod +-1; prefer the lift with positive leading entry
        top, c0, d0 = (-top[0], -top[1]), -c0, -d0
    return (top, (c0, d0)), dval


def evaluate_family(fam: ExponentFamily, tau, prec: int) -> ComplexBall:
    """Numerical value of ``prod g_idx(tau)^m``."""
    val = ComplexBall(1, prec=prec)
    for idx, m in fam:
        val = val * eval_siegel(idx, tau, prec + 16) ** m
    return val.with_prec(prec)
