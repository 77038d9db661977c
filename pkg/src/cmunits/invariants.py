"""Siegel-Ramachandra invariants at CM points, their conjugates and recognition."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import factorint

from .modlevel import ExponentFamily, GL2ModN, act_family, evaluate_family, gl2_action
from .numerics import ComplexBall, PrecisionError, RealBall, root_of_unity
from .quadforms import kronecker_symbol, reduced_forms, theta_Q
from .reciprocity import UNITS, FieldData, gal_over_HK, u_Q
from .siegel import SiegelIndex, eval_siegel

__all__ = [
    "RecognitionError",
    "AmbiguousRounding",
    "NoInteger",
    "RecognizedPoly",
    "default_power",
    "sr_invariant_principal",
    "conjugates_over_HK",
    "norm_family",
    "norm_over_HK",
    "hilbert_conjugates",
    "expand_poly",
    "recognize_integer_poly",
    "recognize_with_retry",
    "ray_class_degree",
    "ideal_ray_class_degree",
    "schertz_sufficient",
    "schertz_condition",
    "generation_bound",
    "theorem31_bound",
    "singular_j_from_x",
    "fourth_power_cubic",
    "real_generator_conjugates",
    "START_PREC",
    "MAX_PREC",
]

START_PREC = 128
MAX_PREC = 8192


class RecognitionError(ArithmeticError):
    pass


class AmbiguousRounding(RecognitionError, PrecisionError):
    """A coefficient enclosure is too wide to pin down one integer."""


class NoInteger(RecognitionError):
    """A coefficient enclosure contains no integer at all."""


def _field(F) -> FieldData:
    return F if isinstance(F, FieldData) else FieldData.from_discriminant(F)


def default_power(n: int) -> int:
    return 12 * n // gcd(6, n)


def _base_index(n: int) -> SiegelIndex:
    return SiegelIndex(0, 1, n)


def sr_invariant_principal(n: int, F, prec: int) -> ComplexBall:
    """``g_(0,1/n)(theta_K)^(12n)``, the invariant of the trivial ray class."""
    if n < 2:
        raise ValueError("n must be at least 2")
    F = _field(F)
    g = eval_siegel(_base_index(n), F.theta, prec + 16)
    return (g ** (12 * n)).with_prec(prec)


def conjugates_over_HK(n: int, F, prec: int, power: int | None = None) -> list[ComplexBall]:
    """Conjugates of ``g_(0,1/n)(theta_K)^power`` over the Hilbert class field.

    ``power`` defaults to ``12n/gcd(6, n)``, the smallest power on which the
    matrix group acts through the index alone.
    """
    F = _field(F)
    power = default_power(n) if power is None else power
    if power % default_power(n):
        raise ValueError(f"power {power} is not a multiple of {default_power(n)}")
    base = _base_index(n)
    out = []
    for alpha in gal_over_HK(n, F):
        g = eval_siegel(gl2_action(base, alpha), F.theta, prec + 16)
        out.append((g**power).with_prec(prec))
    return out


def norm_family(n: int, F, power: int | None = None) -> ExponentFamily:
    """The norm to ``H_K`` as a product of Siegel functions."""
    F = _field(F)
    power = default_power(n) if power is None else power
    base = _base_index(n)
    entries: dict[SiegelIndex, int] = {}
    for alpha in gal_over_HK(n, F):
        idx = gl2_action(base, alpha)
        entries[idx] = entries.get(idx, 0) + power
    return ExponentFamily(n, entries)


def norm_over_HK(n: int, F, prec: int) -> ComplexBall:
    F = _field(F)
    val = ComplexBall(1, prec=prec + 16)
    for c in conjugates_over_HK(n, F, prec + 16):
        val = val * c
    return val.with_prec(prec)


def hilbert_conjugates(n: int, F, prec: int, family: ExponentFamily | None = None) -> list[ComplexBall]:
    """Values ``h^(u_Q)(theta_Q)`` over the reduced forms ``Q``.

    ``h`` is ``family`` (default: the norm to ``H_K``), a function of prime
    level ``n`` whose value at ``theta_K`` lies in ``H_K``.
    """
    F = _field(F)
    if family is None:
        family = norm_family(n, F)
    if family.n != n:
        raise ValueError("family level differs from n")
    out = []
    for Q in reduced_forms(F.d):
        fam_q = act_family(family, u_Q(Q, n, F))
        out.append(evaluate_family(fam_q, theta_Q(Q), prec))
    return out


@dataclass
class RecognizedPoly:
    """Monic integer polynomial, leading coefficient first."""

    coeffs: list[int]
    conjugates: list[ComplexBall] = field(repr=False)
    residual: RealBall
    precision_used: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = 0
        for c in self.coeffs:
            acc = acc * z + c
        return acc

    def to_json(self, d: int, n: int) -> dict:
        return {
            "d": d,
            "n": n,
            "coeffs": list(self.coeffs),
            "precision_bits": self.precision_used,
            "residual": self.residual.decimal(10),
        }


def expand_poly(roots: list[ComplexBall]) -> list[ComplexBall]:
    """Coefficients of ``prod (X - r)``, leading first."""
    prec = max((r.prec for r in roots), default=START_PREC)
    coeffs = [ComplexBall(1, prec=prec)]
    for r in roots:
        nxt = coeffs + [ComplexBall(0, prec=prec)]
        for i in range(1, len(nxt)):
            nxt[i] = nxt[i] - r * coeffs[i - 1]
        coeffs = nxt
    return coeffs


def _round(c: ComplexBall, k: int) -> int:
    if not c.is_real():
        raise NoInteger(f"coefficient {k} has nonzero imaginary part: {c}")
    re = c.re
    inside = re.integers_in()
    if len(inside) == 0:
        raise NoInteger(f"coefficient {k} encloses no integer: {re}")
    # the recognised integer must stay isolated at four times the radius
    wide = RealBall.from_mid_rad(re.midpoint, 4 * re.radius, prec=re.prec)
    if len(inside) > 1 or len(wide.integers_in()) > 1:
        raise AmbiguousRounding(f"coefficient {k} is not isolated: {re}")
    return inside[0]


def recognize_integer_poly(conjugates: list[ComplexBall]) -> RecognizedPoly:
    if not conjugates:
        raise ValueError("no conjugates given")
    prec = min(c.prec for c in conjugates)
    coeffs = [_round(c, k) for k, c in enumerate(expand_poly(conjugates))]
    poly = RecognizedPoly(coeffs, list(conjugates), RealBall(0, prec=prec), prec)
    residual = max((abs(poly(c)) for c in conjugates), key=lambda b: b.upper())
    poly.residual = residual
    if residual.midpoint >= Fraction(1, 2 ** (prec // 4)):
        raise AmbiguousRounding(f"residual {residual} too large at {prec} bits")
    return poly


def recognize_with_retry(conjugates_at, start: int = START_PREC, max_prec: int = MAX_PREC) -> RecognizedPoly:
    """Recognize ``conjugates_at(prec)``, doubling ``prec`` on ambiguity."""
    prec = start
    while True:
        try:
            return recognize_integer_poly(conjugates_at(prec))
        except PrecisionError:
            if prec >= max_prec:
                raise
            prec *= 2


# ---- degrees of ray class fields -------------------------------------------------


def _prime_ideals(n: int, d: int) -> list[tuple[tuple[int, int], int, int]]:
    """Prime ideals over ``(n)``: ``((p, tag), exponent, norm)``."""
    out = []
    for p, e in factorint(n).items():
        kind = kronecker_symbol(d, p)
        if kind == 1:
            out += [((p, 0), e, p), ((p, 1), e, p)]
        elif kind == -1:
            out.append(((p, 0), e, p * p))
        else:
            out.append(((p, 0), 2 * e, p))
    return out


def _phi(ideal) -> int:
    val = 1
    for _, e, norm in ideal:
        if e > 0:
            val *= (norm - 1) * norm ** (e - 1)
    return val


def _all_units(F: FieldData) -> list[tuple[int, int]]:
    half = UNITS.get(F.d, [(1, 0)])
    return half + [(-t, -s) for t, s in half]


def _omega_n(n: int, F: FieldData) -> int:
    # u = t + s theta is 1 mod n iff both coordinates of u - 1 vanish mod n
    return sum(1 for t, s in _all_units(F) if (t - 1) % n == 0 and s % n == 0)


def _norm(F: FieldData, t: int, s: int) -> int:
    return t * t - F.B * t * s + F.C * s * s


def _valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _omega_ideal(ideal, F: FieldData) -> int:
    """Roots of unity congruent to 1 modulo the ideal, via valuations of ``u - 1``."""
    count = 0
    for t, s in _all_units(F):
        if (t, s) == (1, 0):
            count += 1
            continue
        ok = True
        for (p, _tag), e, _ in ideal:
            if e == 0:
                continue
            kind = kronecker_symbol(F.d, p)
            ram = 2 if kind == 0 else 1
            if s == 0:
                v = _valuation(t - 1, p) * ram
            else:
                # u - 1 = t - 1 + s theta has norm 1, 2, 3 or 4; those primes never split
                norm = _norm(F, t - 1, s)
                assert norm % p or kind != 1
                v = _valuation(norm, p) // (2 if kind == -1 else 1)
            if v < e:
                ok = False
                break
        count += ok
    return count


def ray_class_degree(n: int, F) -> int:
    """``[K_(n) : K]`` for the conductor ``(n)``."""
    F = _field(F)
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return F.h
    deg = Fraction(F.h * _phi(_prime_ideals(n, F.d)) * _omega_n(n, F), F.omega)
    assert deg.denominator == 1
    return int(deg)


def ideal_ray_class_degree(ideal, F) -> int:
    """Degree for an ideal given as ``[((p, tag), exponent, norm), ...]``."""
    F = _field(F)
    deg = Fraction(F.h * _phi(ideal) * _omega_ideal(ideal, F), F.omega)
    assert deg.denominator == 1
    return int(deg)


def schertz_sufficient(n: int, F) -> bool:
    """Fast inequality implying the generation hypothesis for ``(n)``."""
    F = _field(F)
    total = Fraction(0)
    for p, e in factorint(n).items():
        kind = kronecker_symbol(F.d, p)
        if kind == 1:
            total += Fraction(4, (p - 1) * p ** (e - 1))
        elif kind == -1:
            total += Fraction(2, (p * p - 1) * p ** (2 * (e - 1)))
        else:
            total += Fraction(2, (p - 1) * p ** (2 * e - 1))
    return total < Fraction(_omega_n(n, F), F.omega)


def schertz_condition(n: int, F) -> bool:
    """``[K_f : K] > 2 sum_k [K_(f p_k^-e_k) : K]`` for ``f = (n)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    F = _field(F)
    if schertz_sufficient(n, F):
        return True
    ideal = _prime_ideals(n, F.d)
    rhs = 0
    for k in range(len(ideal)):
        smaller = [(P, 0 if i == k else e, norm) for i, (P, e, norm) in enumerate(ideal)]
        rhs += ideal_ray_class_degree(smaller, F)
    return ray_class_degree(n, F) > 2 * rhs


def generation_bound(n: int) -> int:
    """Counting bound for the level-``n`` generation result."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2:
        return 12
    val = Fraction((n + 1) * (n // 2) - 1) * Fraction(n**5, 4)
    for p in factorint(n):
        val *= (1 - Fraction(1, p)) * (1 - Fraction(1, p * p))
    assert val.denominator == 1
    return int(val)


# name used by the public interface
theorem31_bound = generation_bound


def singular_j_from_x(x, d: int, prec: int = START_PREC) -> ComplexBall:
    """``j(theta_K)`` from the norm ``x``, by the residue of ``d`` mod 8."""
    if not isinstance(x, ComplexBall):
        x = ComplexBall(x, prec=prec)
    if not x.excludes_zero():
        raise PrecisionError("x ball contains zero")
    if d % 4 == 0:
        return (256 - x) ** 3 / x**2
    if d % 8 == 1:
        return (x + 16) ** 3 / x
    raise ValueError(f"2 is inert for d = {d}")


# ---- the real generator for d = 5 mod 8 ------------------------------------------


def fourth_power_cubic(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Coefficients ``(A, B, C)`` of the monic cubic whose roots are the
    fourth powers of the roots of ``X^3 + aX^2 + bX + c``.
    """
    e1, e2, e3 = -a, b, -c
    p = [3, e1]
    # Newton's identities for a cubic
    p.append(e1 * p[1] - 2 * e2)
    for k in range(3, 13):
        p.append(e1 * p[k - 1] - e2 * p[k - 2] + e3 * p[k - 3])
    q1, q2, q3 = p[4], p[8], p[12]
    f1 = q1
    f2 = Fraction(f1 * q1 - q2, 2)
    f3 = Fraction(f2 * q1 - f1 * q2 + q3, 3)
    assert f2.denominator == 1 and f3.denominator == 1
    return -f1, int(f2), -int(f3)
_HALF_IDX = SiegelIndex(0, 1, 2)
_G10 = SiegelIndex(1, 0, 2)
_G11 = SiegelIndex(1, 1, 2)


def real_generator_conjugates(F, prec: int) -> list[ComplexBall]:
    """Conjugates of ``zeta_8 g_(0,1/2)(theta_K)`` for a class-number-one field
    with ``d = 5 mod 8``.

    The other two conjugates are eighth-root-of-unity multiples of
    ``g_(1/2,0)`` and ``g_(1/2,1/2)``; the twists are the unique ones giving a
    real cubic with integer coefficients.
    """
    F = _field(F)
    if F.d % 8 != 5 or F.h != 1:
        raise ValueError("needs a class-number-one field with d = 5 mod 8")
    p = prec + 16
    tau = F.theta
    x0 = root_of_unity(8, 1, p) * eval_siegel(_HALF_IDX, tau, p)
    g1, g2 = eval_siegel(_G10, tau, p), eval_siegel(_G11, tau, p)
    twists = [root_of_unity(8, k, p) for k in (1, 3, 5, 7)]
    found = []
    for e1, e2 in itertools.product(twists, repeat=2):
        roots = [x0, e1 * g1, e2 * g2]
        try:
            recognize_integer_poly([r.with_prec(prec) for r in roots])
        except RecognitionError:
            continue
        found.append([r.with_prec(prec) for r in roots])
    if len(found) != 1:
        raise AmbiguousRounding(f"{len(found)} twist choices survive at {prec} bits")
    return found[0]
