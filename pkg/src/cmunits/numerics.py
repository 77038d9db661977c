"""Certified midpoint-radius arithmetic and exact CM points.

Balls are thin immutable wrappers around Arb (``python-flint``) values that
carry their own working precision.  Every binary operation runs at the larger
of the two operand precisions, so callers thread precision through values
instead of mutating a global setting.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational

from flint import acb, arb, ctx, fmpq

__all__ = [
    "PrecisionError",
    "BallDivisionError",
    "RealBall",
    "ComplexBall",
    "QuadSurd",
    "working_precision",
    "to_ball",
    "exp_2pi_i",
    "root_of_unity",
    "exp_2pi_i_rational",
    "pi_ball",
    "MIN_PREC",
]

MIN_PREC = 32

# Arb reads its precision from a process-wide context; serialize access so
# concurrent callers never see each other's setting.
_PREC_LOCK = threading.RLock()


class PrecisionError(ArithmeticError):
    """An enclosure is too wide to decide the requested property."""


class BallDivisionError(PrecisionError, ZeroDivisionError):
    """Division by a ball that contains zero."""


@contextmanager
def working_precision(prec: int):
    """Run Arb operations inside the block at ``prec`` bits."""
    with _PREC_LOCK:
        with ctx.workprec(int(prec)):
            yield


def _arb_to_fraction(x: arb) -> Fraction:
    man, exp = x.mid().man_exp()
    man = int(man)
    exp = int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _rad_to_fraction(x: arb) -> Fraction:
    man, exp = x.rad().man_exp()
    man = int(man)
    exp = int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _as_arb(x) -> arb:
    if isinstance(x, RealBall):
        return x.arb
    if isinstance(x, arb):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a real number here")
    if isinstance(x, int):
        # exact: enough bits for the integer itself
        with working_precision(max(64, x.bit_length() + 8)):
            return arb(x)
    if isinstance(x, Rational):
        return arb(fmpq(int(x.numerator), int(x.denominator)))
    if isinstance(x, float):
        return arb(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a real ball")


def _as_acb(x) -> acb:
    if isinstance(x, ComplexBall):
        return x.acb
    if isinstance(x, RealBall):
        return acb(x.arb)
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if isinstance(x, complex):
        return acb(x.real, x.imag)
    return acb(_as_arb(x))


def _prec_of(*xs) -> int:
    precs = [x.prec for x in xs if isinstance(x, (RealBall, ComplexBall))]
    return max(precs) if precs else ctx.prec


def _fmt(x: arb, digits: int | None, prec: int = 53) -> str:
    if digits is None:
        # exact balls report an enormous accuracy; cap at the working precision
        bits = min(x.rel_accuracy_bits(), prec) if x.is_finite() else 0
        digits = max(15, int(bits * 0.30103) + 2)
    return x.str(digits, radius=True)


class RealBall:
    """Enclosure ``[midpoint - radius, midpoint + radius]`` of a real number."""

    __slots__ = ("_v", "prec")

    def __init__(self, value=0, prec: int = 128):
        if isinstance(value, RealBall):
            value = value.arb
        with working_precision(prec):
            v = _as_arb(value)
            # force rounding of exact inputs at the requested precision
            v = +v
        if not v.is_finite():
            raise PrecisionError("non-finite enclosure")
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "prec", int(prec))

    @classmethod
    def _wrap(cls, v: arb, prec: int) -> RealBall:
        if not v.is_finite():
            raise PrecisionError("non-finite enclosure")
        b = object.__new__(cls)
        object.__setattr__(b, "_v", v)
        object.__setattr__(b, "prec", int(prec))
        return b

    @classmethod
    def from_mid_rad(cls, mid, rad, prec: int = 128) -> RealBall:
        if rad < 0:
            raise ValueError("radius must be nonnegative")
        with working_precision(prec):
            v = arb(_as_arb(mid)) + arb(0, _as_arb(rad))
        return cls._wrap(v, prec)

    def __setattr__(self, *_):
        raise AttributeError("RealBall is immutable")

    @property
    def arb(self) -> arb:
        return self._v

    @property
    def midpoint(self) -> Fraction:
        return _arb_to_fraction(self._v)

    @property
    def radius(self) -> Fraction:
        return _rad_to_fraction(self._v)

    def lower(self) -> Fraction:
        return self.midpoint - self.radius

    def upper(self) -> Fraction:
        return self.midpoint + self.radius

    def with_prec(self, prec: int) -> RealBall:
        return RealBall._wrap(self._v, prec)

    # arithmetic -----------------------------------------------------------

    def _binop(self, other, op):
        prec = _prec_of(self, other)
        with working_precision(prec):
            try:
                o = _as_arb(other)
            except TypeError:
                return NotImplemented
            return RealBall._wrap(op(self._v, o), prec)

    def __add__(self, other):
        return self._binop(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binop(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binop(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (RealBall, arb)) and _as_arb(other).contains(0):
            raise BallDivisionError("divisor ball contains zero")
        if not isinstance(other, (RealBall, arb)) and other == 0:
            raise BallDivisionError("division by zero")
        return self._binop(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        if self._v.contains(0):
            raise BallDivisionError("divisor ball contains zero")
        return self._binop(other, lambda x, y: y / x)

    def __neg__(self):
        # python-flint rounds negation to the context precision
        with working_precision(self.prec):
            return RealBall._wrap(-self._v, self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        with working_precision(self.prec):
            return RealBall._wrap(abs(self._v), self.prec)

    def __pow__(self, k):
        if isinstance(k, int):
            if k < 0 and self._v.contains(0):
                raise BallDivisionError("negative power of a ball containing zero")
            with working_precision(self.prec):
                return RealBall._wrap(self._v**k, self.prec)
        if isinstance(k, Rational):
            return self.rpow(k)
        return NotImplemented

    def rpow(self, t) -> RealBall:
        """``self ** t`` for a rational exponent; requires a positive base."""
        if not self.is_positive():
            raise PrecisionError("rational power needs a certified positive base")
        t = Fraction(t)
        with working_precision(self.prec):
            e = arb(fmpq(t.numerator, t.denominator))
            return RealBall._wrap((self._v.log() * e).exp(), self.prec)

    def sqrt(self) -> RealBall:
        if self._v < 0:
            raise PrecisionError("square root of a negative ball")
        with working_precision(self.prec):
            return RealBall._wrap(self._v.sqrt(), self.prec)

    def exp(self) -> RealBall:
        with working_precision(self.prec):
            return RealBall._wrap(self._v.exp(), self.prec)

    def log(self) -> RealBall:
        if not self.is_positive():
            raise PrecisionError("logarithm needs a certified positive argument")
        with working_precision(self.prec):
            return RealBall._wrap(self._v.log(), self.prec)

    # predicates -----------------------------------------------------------

    def contains(self, x) -> bool:
        if isinstance(x, RealBall):
            return bool(self._v.contains(x.arb))
        if isinstance(x, Rational) and not isinstance(x, bool):
            return self.lower() <= x <= self.upper()
        with working_precision(self.prec):
            return bool(self._v.contains(_as_arb(x)))

    def overlaps(self, other) -> bool:
        with working_precision(self.prec):
            return bool(self._v.overlaps(_as_arb(other)))

    def is_positive(self) -> bool:
        return bool(self._v > 0)

    def is_negative(self) -> bool:
        return bool(self._v < 0)

    def excludes_zero(self) -> bool:
        return not self._v.contains(0)

    def is_below(self, x) -> bool:
        """Certified ``self < x``: the whole ball lies strictly below ``x``."""
        return self.upper() < Fraction(x)

    def integers_in(self) -> range:
        """The integers contained in the ball, as a range."""
        lo, hi = self.lower(), self.upper()
        first = -((-lo.numerator) // lo.denominator)  # ceil
        last = hi.numerator // hi.denominator  # floor
        return range(first, last + 1)

    def __float__(self):
        return float(self._v.mid())

    def __repr__(self):
        return f"RealBall({_fmt(self._v, None, self.prec)}, prec={self.prec})"

    def __str__(self):
        return _fmt(self._v, None, self.prec)

    def decimal(self, digits: int | None = None) -> str:
        """Decimal ``mid +/- rad`` string."""
        return _fmt(self._v, digits, self.prec)


class ComplexBall:
    """Rectangular enclosure of a complex number, componentwise real balls."""

    __slots__ = ("_v", "prec")

    def __init__(self, re=0, im=0, prec: int = 128):
        with working_precision(prec):
            if isinstance(re, (ComplexBall, acb, complex)) and im == 0:
                v = +_as_acb(re)
            else:
                v = acb(_as_arb(re), _as_arb(im))
                v = +v
        if not v.is_finite():
            raise PrecisionError("non-finite enclosure")
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "prec", int(prec))

    @classmethod
    def _wrap(cls, v: acb, prec: int) -> ComplexBall:
        if not v.is_finite():
            raise PrecisionError("non-finite enclosure")
        b = object.__new__(cls)
        object.__setattr__(b, "_v", v)
        object.__setattr__(b, "prec", int(prec))
        return b

    def __setattr__(self, *_):
        raise AttributeError("ComplexBall is immutable")

    @property
    def acb(self) -> acb:
        return self._v

    @property
    def re(self) -> RealBall:
        return RealBall._wrap(self._v.real, self.prec)

    @property
    def im(self) -> RealBall:
        return RealBall._wrap(self._v.imag, self.prec)

    @property
    def radius(self) -> Fraction:
        """Largest of the two component radii."""
        return max(_rad_to_fraction(self._v.real), _rad_to_fraction(self._v.imag))

    def with_prec(self, prec: int) -> ComplexBall:
        return ComplexBall._wrap(self._v, prec)

    def _binop(self, other, op):
        prec = _prec_of(self, other)
        with working_precision(prec):
            try:
                o = _as_acb(other)
            except TypeError:
                return NotImplemented
            return ComplexBall._wrap(op(self._v, o), prec)

    def __add__(self, other):
        return self._binop(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binop(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binop(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            with working_precision(_prec_of(self, other)):
                o = _as_acb(other)
        except TypeError:
            return NotImplemented
        if o.contains(0):
            raise BallDivisionError("divisor ball contains zero")
        return self._binop(o, lambda x, y: x / y)

    def __rtruediv__(self, other):
        if self._v.contains(0):
            raise BallDivisionError("divisor ball contains zero")
        return self._binop(other, lambda x, y: y / x)

    def __neg__(self):
        with working_precision(self.prec):
            return ComplexBall._wrap(-self._v, self.prec)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0 and self._v.contains(0):
            raise BallDivisionError("negative power of a ball containing zero")
        with working_precision(self.prec):
            return ComplexBall._wrap(self._v**k, self.prec)

    def __abs__(self) -> RealBall:
        with working_precision(self.prec):
            return RealBall._wrap(abs(self._v), self.prec)

    def conjugate(self) -> ComplexBall:
        with working_precision(self.prec):
            return ComplexBall._wrap(self._v.conjugate(), self.prec)

    def exp(self) -> ComplexBall:
        with working_precision(self.prec):
            return ComplexBall._wrap(self._v.exp(), self.prec)

    def contains(self, z) -> bool:
        if isinstance(z, Rational) and not isinstance(z, bool):
            return self.is_real() and self.re.contains(z)
        with working_precision(self.prec):
            return bool(self._v.contains(_as_acb(z)))

    def overlaps(self, other) -> bool:
        with working_precision(self.prec):
            return bool(self._v.overlaps(_as_acb(other)))

    def excludes_zero(self) -> bool:
        return not self._v.contains(0)

    def is_real(self) -> bool:
        """The imaginary part encloses zero."""
        return bool(self._v.imag.contains(0))

    def __complex__(self):
        return complex(float(self._v.real.mid()), float(self._v.imag.mid()))

    def __repr__(self):
        return f"ComplexBall({self.decimal()}, prec={self.prec})"

    def __str__(self):
        return self.decimal()

    def decimal(self, digits: int | None = None) -> str:
        re = _fmt(self._v.real, digits, self.prec)
        im = _fmt(self._v.imag, digits, self.prec)
        return f"{re} + {im}*I"


def pi_ball(prec: int) -> RealBall:
    with working_precision(prec):
        return RealBall._wrap(arb.pi(), prec)


# ---------------------------------------------------------------------------
# exact CM points


@dataclass(frozen=True)
class QuadSurd:
    """Exact point ``(p + q*sqrt(d)) / r`` of an imaginary quadratic field.

    The representation is normalized (``gcd(p, q, r) == 1``, ``r > 0``) and
    always lies in the upper half-plane.
    """

    p: int
    q: int
    r: int
    d: int

    def __post_init__(self):
        p, q, r, d = (int(v) for v in (self.p, self.q, self.r, self.d))
        if d >= 0:
            raise ValueError("radicand must be negative")
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if r < 0:
            p, q, r = -p, -q, -r
        if q <= 0:
            raise ValueError("point is not in the upper half-plane")
        g = gcd(gcd(p, q), r)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "r", r // g)
        object.__setattr__(self, "d", d)

    @property
    def real(self) -> Fraction:
        return Fraction(self.p, self.r)

    def imag_squared(self) -> Fraction:
        return Fraction(self.q * self.q * -self.d, self.r * self.r)

    def __add__(self, k):
        k = Fraction(k)
        return QuadSurd(
            self.p * k.denominator + k.numerator * self.r,
            self.q * k.denominator,
            self.r * k.denominator,
            self.d,
        )

    __radd__ = __add__

    def __sub__(self, k):
        return self + (-Fraction(k))

    def __mul__(self, k):
        k = Fraction(k)
        if k <= 0:
            raise ValueError("only positive rational scalings keep the point in H")
        return QuadSurd(
            self.p * k.numerator, self.q * k.numerator, self.r * k.denominator, self.d
        )

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def mobius(self, gamma) -> QuadSurd:
        """Image under ``tau -> (a*tau + b) / (c*tau + d)`` for det = 1."""
        (a, b), (c, d) = _as_matrix(gamma)
        if a * d - b * c != 1:
            raise ValueError("matrix must have determinant 1")
        p, q, r, rad = self.p, self.q, self.r, self.d
        A, B = a * p + b * r, a * q
        C, D = c * p + d * r, c * q
        return QuadSurd(A * C - B * D * rad, B * C - A * D, C * C - D * D * rad, rad)

    def __complex__(self):
        return complex(self.p / self.r, self.q * (-self.d) ** 0.5 / self.r)

    def __str__(self):
        return f"({self.p} + {self.q}*sqrt({self.d}))/{self.r}"


def _as_matrix(gamma):
    if len(gamma) == 4:
        a, b, c, d = gamma
        return (int(a), int(b)), (int(c), int(d))
    (a, b), (c, d) = gamma
    return (int(a), int(b)), (int(c), int(d))


_GUARD = 10


def to_ball(x: QuadSurd, prec: int) -> ComplexBall:
    """Enclosure of an exact surd with relative error about ``2**-prec``."""
    if prec < MIN_PREC:
        raise ValueError(f"precision must be at least {MIN_PREC} bits")
    with working_precision(prec + _GUARD):
        re = arb(fmpq(x.p, x.r))
        im = arb(-x.d).sqrt() * x.q / x.r
        v = acb(re, im)
    return ComplexBall._wrap(v, prec)


def _point(tau, prec: int) -> ComplexBall:
    if isinstance(tau, QuadSurd):
        return to_ball(tau, prec)
    if isinstance(tau, ComplexBall):
        return tau
    return ComplexBall(tau, prec=prec)


def exp_2pi_i(tau, prec: int | None = None) -> ComplexBall:
    """Enclosure of ``q = exp(2*pi*i*tau)``, certifying ``|q| < 1``."""
    if prec is None:
        prec = tau.prec if isinstance(tau, ComplexBall) else 128
    t = _point(tau, prec)
    if not t.acb.imag > 0:
        raise PrecisionError("tau is not certified to lie in the upper half-plane")
    with working_precision(prec + _GUARD):
        q = (2 * t.acb).exp_pi_i()
    return ComplexBall._wrap(q, prec)


def exp_2pi_i_rational(t, prec: int) -> ComplexBall:
    """``exp(2*pi*i*t)`` for rational ``t``; exact when ``4t`` is an integer."""
    t = Fraction(t) % 1
    if (4 * t).denominator == 1:
        k = int(4 * t)
        val = {0: acb(1), 1: acb(0, 1), 2: acb(-1), 3: acb(0, -1)}[k]
        return ComplexBall._wrap(val, prec)
    with working_precision(prec + _GUARD):
        s, c = arb.sin_cos_pi_fmpq(fmpq(2 * t.numerator, t.denominator))
        v = acb(c, s)
    return ComplexBall._wrap(v, prec)


def root_of_unity(n: int, k: int, prec: int = 128) -> ComplexBall:
    """``exp(2*pi*i*k/n)``; zero radius whenever the value is one of 1, i, -1, -i."""
    if n < 1:
        raise ValueError("n must be positive")
    return exp_2pi_i_rational(Fraction(k, n), prec)
