"""Certified size bounds for Siegel-function norms and the resulting searches
for imaginary quadratic fields of class number one and two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, log, pi

import sympy

from .invariants import fourth_power_cubic
from .numerics import PrecisionError, RealBall, pi_ball, root_of_unity
from .quadforms import (
    class_number,
    fundamental_discriminants,
    is_fundamental,
    kronecker_symbol,
    require_fundamental,
    theta_K,
)
from .siegel import bernoulli2, eval_gamma2

__all__ = [
    "BoundCertificate",
    "CASE_TAGS",
    "A_of",
    "siegel_bound_a",
    "siegel_bound_0b",
    "case_i_bound",
    "case_ii_bound",
    "cn2_split_bounds",
    "certify_case_i",
    "certify_case_ii",
    "certify_cn2_split",
    "cn2_tail_certificate",
    "SearchResult",
    "class_number_one_search",
    "class_number_two_split_search",
    "class_number_two_list",
    "HeegnerHit",
    "heegner_solutions",
    "heegner_search",
    "resultant_oracle",
    "match_discriminant",
]

CASE_TAGS = ("not_inert_2", "inert2_ram3", "cn2_split2")
DEFAULT_PREC = 128
CASE_I_EDGE = -31
CASE_II_EDGE = -51


@dataclass(frozen=True)
class BoundCertificate:
    """Upper bound for ``|Norm|^(1/12)``; the field cannot exist when it is below 1."""

    d: int
    case_tag: str
    bound_value: RealBall
    passes: bool
    precision_bits: int

    @classmethod
    def from_bound(cls, d: int, tag: str, bound: RealBall) -> BoundCertificate:
        passes = bound.midpoint + bound.radius < 1
        return cls(d, tag, bound, passes, bound.prec)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "case": self.case_tag,
            "bound": self.bound_value.decimal(20),
            "passes": self.passes,
            "precision_bits": self.precision_bits,
        }


def A_of(d: int, prec: int = DEFAULT_PREC) -> RealBall:
    """``|e^(2 pi i theta_K)| = e^(-pi sqrt|d|)``."""
    return (-(pi_ball(prec) * RealBall(-d, prec).sqrt())).exp()


def _check_A(A: RealBall) -> None:
    if not (A.is_positive() and A.is_below(1)):
        raise PrecisionError(f"A = {A} is not certified in (0, 1)")


def siegel_bound_a(a, A: RealBall) -> RealBall:
    """Bound for ``|g_(a,b)|`` with ``0 < a <= 1/2`` at a point with ``|q| = A``."""
    a = Fraction(a)
    if not 0 < a <= Fraction(1, 2):
        raise ValueError(f"a = {a} outside (0, 1/2]")
    _check_A(A)
    return A.rpow(bernoulli2(a) / 2) * (2 * A.rpow(a) / (1 - A)).exp()


def siegel_bound_0b(b, A: RealBall) -> RealBall:
    """Bound for ``|g_(0,b)|`` with ``0 < b < 1`` at a point with ``|q| = A``."""
    b = Fraction(b)
    if not 0 < b < 1:
        raise ValueError(f"b = {b} outside (0, 1)")
    _check_A(A)
    chord = abs(1 - root_of_unity(b.denominator, b.numerator, A.prec))
    return A.rpow(Fraction(1, 12)) * chord * (2 * A / (1 - A)).exp()


def case_i_bound(A: RealBall, even: bool) -> RealBall:
    """Bound when 2 is not inert: ``even`` for ``d = 0 mod 4``, else ``d = 1 mod 8``."""
    half = Fraction(1, 2)
    if even:
        return siegel_bound_0b(half, A) * siegel_bound_a(half, A)
    return siegel_bound_0b(half, A)


def case_ii_bound(A: RealBall) -> RealBall:
    third = Fraction(1, 3)
    return siegel_bound_0b(third, A) * siegel_bound_a(third, A) ** 2


def cn2_split_bounds(A: RealBall) -> tuple[RealBall, RealBall]:
    """The two bounds (bottom row of ``u_Q`` with ``r = 0`` or ``r = 1``),
    already uniform in the leading coefficient ``a >= 2`` of the second form.
    """
    _check_A(A)
    prec = A.prec
    s3 = RealBall(3, prec).sqrt()
    e = (-(pi_ball(prec) * s3)).exp()  # smallest possible |q| ratio, a <= sqrt|d|/3
    e_half = (-(pi_ball(prec) * s3) / 2).exp()
    base = 2 * A / (1 - A)
    r0 = 4 * A.rpow(Fraction(1, 12)) * (base - pi_ball(prec) * s3 / 12 + 2 * e / (1 - e)).exp()
    r1 = 2 * A.rpow(Fraction(1, 12) - Fraction(1, 48)) * (base + 2 * e_half / (1 - e)).exp()
    return r0, r1


def _larger(x: RealBall, y: RealBall) -> RealBall:
    return x if x.upper() >= y.upper() else y


def certify_case_i(d: int, prec: int = DEFAULT_PREC) -> BoundCertificate:
    d = require_fundamental(d)
    if d > CASE_I_EDGE:
        raise ValueError(f"d = {d} is above {CASE_I_EDGE}")
    if kronecker_symbol(d, 2) == -1:
        raise ValueError(f"2 is inert for d = {d}")
    return BoundCertificate.from_bound(d, "not_inert_2", case_i_bound(A_of(d, prec), d % 4 == 0))


def certify_case_ii(d: int, prec: int = DEFAULT_PREC) -> BoundCertificate:
    d = require_fundamental(d)
    if d > CASE_II_EDGE:
        raise ValueError(f"d = {d} is above {CASE_II_EDGE}")
    if d % 24 != 21:
        raise ValueError(f"d = {d} is not 21 mod 24")
    return BoundCertificate.from_bound(d, "inert2_ram3", case_ii_bound(A_of(d, prec)))


def certify_cn2_split(d: int, prec: int = DEFAULT_PREC) -> BoundCertificate:
    d = require_fundamental(d)
    if d > CASE_I_EDGE or d % 8 != 1:
        raise ValueError(f"d = {d} is not a split discriminant below {CASE_I_EDGE}")
    if class_number(d) != 2:
        raise ValueError(f"h({d}) = {class_number(d)}, not 2")
    return BoundCertificate.from_bound(d, "cn2_split2", _larger(*cn2_split_bounds(A_of(d, prec))))


def cn2_tail_certificate(prec: int = DEFAULT_PREC) -> BoundCertificate:
    """The class-number-two bound at ``A = e^(-pi sqrt 31)``.

    Every factor increases with ``A``, so this one ball bounds every
    ``d <= -31``; no class-number hypothesis is needed to evaluate it.
    """
    return BoundCertificate.from_bound(CASE_I_EDGE, "cn2_split2", _larger(*cn2_split_bounds(A_of(CASE_I_EDGE, prec))))


# ---- searches --------------------------------------------------------------------


@dataclass
class SearchResult:
    found: dict
    certificates: list[BoundCertificate] = field(default_factory=list)
    spurious: list[int] = field(default_factory=list)
    hits: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(c.passes for c in self.certificates)

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "certificates": [c.to_json() for c in self.certificates],
            "spurious": sorted(self.spurious),
        }


def _window(lo: int, hi: int) -> list[int]:
    """Fundamental discriminants in ``(lo, hi]`` without the two unit-rich fields."""
    return [d for d in fundamental_discriminants(lo + 1, hi) if d not in (-3, -4)]


def class_number_one_search(
    heegner_bound: int = 1000, tail_span: int = 300, prec: int = DEFAULT_PREC
) -> SearchResult:
    """Fields of class number one other than ``d = -3, -4``, split into the
    three cases by the behaviour of 2 and 3.

    Below the window edges the bounds are certified for each eligible ``d``
    in the next ``tail_span`` integers. Each bound increases with ``A``, so
    the certificate at the largest eligible ``d`` of each residue class
    covers every smaller ``d`` of that class as well.
    """
    case_i = [
        d for d in _window(CASE_I_EDGE, -7) if kronecker_symbol(d, 2) != -1 and class_number(d) == 1
    ]
    case_ii = [d for d in _window(CASE_II_EDGE, -7) if d % 24 == 21 and class_number(d) == 1]

    certs = []
    for d in fundamental_discriminants(CASE_I_EDGE - tail_span, CASE_I_EDGE):
        if kronecker_symbol(d, 2) != -1:
            certs.append(certify_case_i(d, prec))
    for d in fundamental_discriminants(CASE_II_EDGE - tail_span, CASE_II_EDGE):
        if d % 24 == 21:
            certs.append(certify_case_ii(d, prec))

    hits = heegner_solutions(heegner_bound)
    case_iii, spurious = set(), []
    for gamma in sorted({h.gamma for h in hits}, reverse=True):
        d = match_discriminant(gamma)
        if d is None:
            spurious.append(gamma)
        elif d not in (-3, -4) and d % 8 == 5 and d % 3 and class_number(d) == 1:
            case_iii.add(d)
    found = {"i": case_i, "ii": case_ii, "iii": sorted(case_iii, reverse=True)}
    return SearchResult(found, certs, spurious, hits)


def class_number_two_split_search(prec: int = DEFAULT_PREC) -> SearchResult:
    """Class number two with 2 split: exact search above ``-31``, bound below."""
    found = [d for d in _window(CASE_I_EDGE, -1) if d % 8 == 1 and class_number(d) == 2]
    return SearchResult({"cn2_split": found}, [cn2_tail_certificate(prec)])


def class_number_two_list(lo: int = -500) -> list[int]:
    return [d for d in fundamental_discriminants(lo) if class_number(d) == 2]


# ---- Heegner's diophantine step --------------------------------------------------


@dataclass(frozen=True)
class HeegnerHit:
    """A cubic ``X^3 + aX^2 + bX + c`` whose roots' fourth powers satisfy
    ``X^3 - gamma X - 16``.
    """

    a: int
    b: int
    c: int
    gamma: int


def heegner_solutions(search_bound_a: int) -> list[HeegnerHit]:
    """Integer cubics with vanishing fourth power sum and ``c^4 = 16``.

    ``p4 = a^4 - 4a^2 b + 2b^2 + 4ac = 0`` is a quadratic in ``b`` with
    discriminant ``8 a (a^3 - 4c)``, so ``b = a^2 +- k/2`` where
    ``k^2 = 2a(a^3 - 4c)``.
    """
    if search_bound_a < 20:
        raise ValueError("search bound must be at least 20")
    hits = []
    for c in (-2, 2):
        for a in range(-search_bound_a, search_bound_a + 1):
            disc = 2 * a * (a**3 - 4 * c)
            if disc < 0:
                continue
            k = isqrt(disc)
            if k * k != disc or k % 2:
                continue
            for b in sorted({a * a + k // 2, a * a - k // 2}):
                A, B, C = fourth_power_cubic(a, b, c)
                if A == 0 and C == -16:
                    hits.append(HeegnerHit(a, b, c, -B))
    return hits


def heegner_search(search_bound_a: int) -> set[int]:
    return {h.gamma for h in heegner_solutions(search_bound_a)}


def resultant_oracle(a: int, b: int, c: int) -> list[int]:
    """Coefficients of ``Res_Y(Y^3 + aY^2 + bY + c, X - Y^4)``, leading first."""
    X, Y = sympy.symbols("X Y")
    res = sympy.resultant(Y**3 + a * Y**2 + b * Y + c, X - Y**4, Y)
    return [int(v) for v in sympy.Poly(sympy.expand(res), X).all_coeffs()]


def match_discriminant(gamma: int, prec: int | None = None) -> int | None:
    """The ``d = 5 mod 8`` whose ``gamma_2(theta_K)`` encloses ``gamma``, if any.

    Candidates satisfy ``|d| <= (log(|gamma|^3 + 2000)/pi)^2 + 2``, from
    ``|j| ~ e^(pi sqrt|d|)``.
    """
    gamma = int(gamma)
    dmax = int((log(abs(gamma) ** 3 + 2000) / pi) ** 2 + 2)
    if prec is None:
        prec = 64 + 2 * abs(gamma).bit_length()
    for d in range(-3, -dmax - 1, -8):
        if not is_fundamental(d):
            continue
        g2 = eval_gamma2(theta_K(d), prec)
        if g2.contains(gamma):
            return d
    return None
