"""Siegel functions, eta quotients and the j-function at points of H.

All values come from the defining q-products,

    g_(r1,r2)(tau) = -q^(B2(r1)/2) e^(pi i r2 (r1-1)) (1 - q_z)
                     * prod_{n>=1} (1 - q^n q_z)(1 - q^n / q_z),

with ``q = e^(2 pi i tau)``, ``q_z = e^(2 pi i (r1 tau + r2))`` and
``B2(x) = x^2 - x + 1/6``.  Products are truncated once the geometric tail
is below the target precision and the tail is absorbed into the radius.

Roots of unity are tracked as exact rational phases ``t`` standing for the
factor ``e^(2 pi i t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, log2

from flint import acb, arb, fmpq

from .numerics import (
    ComplexBall,
    PrecisionError,
    QuadSurd,
    _as_matrix,
    _point,
    exp_2pi_i_rational,
    working_precision,
)

__all__ = [
    "SiegelIndex",
    "PhasedIndex",
    "bernoulli2",
    "order_q",
    "eval_siegel",
    "eval_siegel_pair",
    "reduce_pair",
    "sl2_phase",
    "transform_sl2",
    "dedekind_sum",
    "eval_eta_reduced",
    "eval_weber",
    "eval_gamma2",
    "eval_j",
    "MAX_TERMS",
]

MAX_TERMS = 10**6


def bernoulli2(x) -> Fraction:
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)


@dataclass(frozen=True, order=True)
class SiegelIndex:
    """The pair ``(a/n, b/n)``, reduced into ``[0, 1)^2``."""

    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("denominator must be positive")
        a, b = self.a % self.n, self.b % self.n
        if a == 0 and b == 0:
            raise ValueError("index lies in Z^2")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_pair(cls, r1, r2, n: int | None = None) -> SiegelIndex:
        r1, r2 = Fraction(r1), Fraction(r2)
        if n is None:
            l1, l2 = r1.denominator, r2.denominator
            n = l1 * l2 // gcd(l1, l2)
        if (r1 * n).denominator != 1 or (r2 * n).denominator != 1:
            raise ValueError(f"denominators of ({r1}, {r2}) do not divide {n}")
        return cls(int(r1 * n), int(r2 * n), n)

    @property
    def r1(self) -> Fraction:
        return Fraction(self.a, self.n)

    @property
    def r2(self) -> Fraction:
        return Fraction(self.b, self.n)

    @property
    def pair(self) -> tuple[Fraction, Fraction]:
        return self.r1, self.r2

    def with_level(self, n: int) -> SiegelIndex:
        """Same pair written over denominator ``n``."""
        return SiegelIndex.from_pair(self.r1, self.r2, n)

    def __str__(self):
        return f"({self.a}/{self.n}, {self.b}/{self.n})"


@dataclass(frozen=True)
class PhasedIndex:
    """``e^(2 pi i phase) * g_index``."""

    index: SiegelIndex
    phase: Fraction

    def __post_init__(self):
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)


def order_q(idx: SiegelIndex) -> Fraction:
    """Order of ``g_idx`` at the cusp, in powers of ``q``."""
    return bernoulli2(idx.r1) / 2


# ---------------------------------------------------------------------------
# numerical evaluation


def _terms_needed(x_upper: float, offset: float, prec: int) -> int:
    # smallest M with 4 x^(M + 1 - offset) / (1 - x) < 2^(-prec - 4)
    if x_upper <= 0.0:
        return 1
    if x_upper >= 1.0:
        raise PrecisionError("|q| is not certified below 1")
    target = prec + 4 + 2 - log2(1.0 - x_upper)
    m = ceil(target / -log2(x_upper) + offset)
    m = max(m, ceil(offset) + 1, 1)
    if m > MAX_TERMS:
        raise PrecisionError(f"q-product needs {m} terms (cap {MAX_TERMS})")
    return m


def _tail_factor(x: arb, exponent: arb, coeff: int) -> acb:
    """Disk ``1 + [+/- e]`` covering ``exp(w)`` for ``|w| <= coeff x^exponent/(1-x)``."""
    eps = coeff * (x.log() * exponent).exp() / (1 - x)
    if not eps < 0.5:
        raise PrecisionError("tail bound too large")
    # |e^w - 1| <= e^|w| - 1 <= 2|w| for |w| <= 1
    r = 2 * eps.upper()
    return acb(arb(1) + arb(0, r), arb(0, r))


def _abs_q_upper(t: acb) -> arb:
    # |q| = exp(-2 pi Im tau); bound with the lower end of Im tau
    return (-2 * arb.pi() * t.imag.lower()).exp().upper()


def _siegel_raw(r1: Fraction, r2: Fraction, t: acb, prec: int) -> acb:
    """Truncated product for an arbitrary rational pair; caller sets precision."""
    x = _abs_q_upper(t)
    a1 = abs(r1)
    m = _terms_needed(float(x.mid()) * (1 + 1e-12), float(a1), prec)
    q = (2 * t).exp_pi_i()
    # e^(2 pi i s tau) for rational s
    qpow = lambda s: (2 * fmpq(s.numerator, s.denominator) * t).exp_pi_i()
    # leading constant -e^(pi i r2 (r1 - 1)) times e^(2 pi i r2) inside q_z
    lead = Fraction(1, 2) + r2 * (r1 - 1) / 2
    qz = _phase(r2) * qpow(r1)
    qz_inv = 1 / qz
    prod = _phase(lead) * qpow(bernoulli2(r1) / 2) * (1 - qz)
    qn = acb(1)
    for _ in range(m):
        qn = qn * q
        prod = prod * (1 - qn * qz) * (1 - qn * qz_inv)
    # terms n > m: |q^n q_z^(+-1)| <= x^(n - |r1|), two per n
    exponent = arb(m + 1) - arb(fmpq(a1.numerator, a1.denominator))
    return prod * _tail_factor(x, exponent, 4)


def _phase(t: Fraction) -> acb:
    """``e^(2 pi i t)`` at the ambient working precision."""
    t = Fraction(t) % 1
    if (4 * t).denominator == 1:
        return (acb(1), acb(0, 1), acb(-1), acb(0, -1))[int(4 * t)]
    s, c = arb.sin_cos_pi_fmpq(fmpq(2 * t.numerator, t.denominator))
    return acb(c, s)


def _guard(prec: int) -> int:
    return prec + 24 + prec.bit_length()


def eval_siegel_pair(r1, r2, tau, prec: int) -> ComplexBall:
    """``g_(r1,r2)(tau)`` straight from the product, for any rational pair."""
    r1, r2 = Fraction(r1), Fraction(r2)
    if r1.denominator == 1 and r2.denominator == 1:
        raise ValueError("index lies in Z^2")
    t = _point(tau, _guard(prec))
    with working_precision(_guard(prec)):
        v = _siegel_raw(r1, r2, t.acb, prec)
    return ComplexBall._wrap(v, prec)


def eval_siegel(idx: SiegelIndex, tau, prec: int) -> ComplexBall:
    """Enclosure of the Siegel function ``g_idx(tau)``."""
    return eval_siegel_pair(idx.r1, idx.r2, tau, prec)


def eval_eta_reduced(tau, prec: int) -> ComplexBall:
    """``q^(1/24) prod (1 - q^n)``, the eta function without its constant."""
    t = _point(tau, _guard(prec))
    with working_precision(_guard(prec)):
        tt = t.acb
        x = _abs_q_upper(tt)
        m = _terms_needed(float(x.mid()) * (1 + 1e-12), 0.0, prec)
        q = (2 * tt).exp_pi_i()
        prod = (tt / 12).exp_pi_i()
        qn = acb(1)
        for _ in range(m):
            qn = qn * q
            prod = prod * (1 - qn)
        v = prod * _tail_factor(x, arb(m + 1), 2)
    return ComplexBall._wrap(v, prec)


def eval_weber(kind: str, tau, prec: int) -> ComplexBall:
    """Weber's ``f``, ``f1`` or ``f2`` as eta quotients.

    ``tau`` must be an exact :class:`QuadSurd` so the rescaled arguments stay
    exact.
    """
    if not isinstance(tau, QuadSurd):
        raise TypeError("Weber functions take an exact QuadSurd argument")
    den = eval_eta_reduced(tau, prec)
    if kind == "f":
        num = eval_eta_reduced((tau + 1) / 2, prec)
        return exp_2pi_i_rational(Fraction(-1, 48), prec) * num / den
    if kind == "f1":
        return eval_eta_reduced(tau / 2, prec) / den
    if kind == "f2":
        with working_precision(prec + 8):
            sqrt2 = arb(2).sqrt()
        return eval_eta_reduced(tau * 2, prec) * ComplexBall(sqrt2, prec=prec) / den
    raise ValueError(f"unknown Weber function {kind!r}")


_HALF = SiegelIndex(0, 1, 2)


def eval_gamma2(tau, prec: int) -> ComplexBall:
    """Cube root of ``j`` with leading term ``q^(-1/3)``."""
    g = eval_siegel(_HALF, tau, prec + 16)
    if not g.excludes_zero():
        raise PrecisionError("Siegel value not separated from zero")
    g4 = g**4
    return ((g4**3 + 16) / g4).with_prec(prec)


def eval_j(tau, prec: int) -> ComplexBall:
    return eval_gamma2(tau, prec + 8).__pow__(3).with_prec(prec)


# ---------------------------------------------------------------------------
# exact transformation calculus


def dedekind_sum(d: int, c: int) -> Fraction:
    """``sum_{k=1}^{c-1} (k/c - 1/2)(<kd/c> - 1/2)`` for ``c > 0``."""
    if c <= 0:
        raise ValueError("c must be positive")
    s = Fraction(0)
    for k in range(1, c):
        s += (Fraction(k, c) - Fraction(1, 2)) * (Fraction(k * d % c, c) - Fraction(1, 2))
    return s


def sl2_phase(gamma) -> Fraction:
    """Phase ``t`` with ``g_r(gamma tau) = e^(2 pi i t) g_(r gamma)(tau)``.

    The right-hand index ``r gamma`` is the raw, unreduced pair.  The value
    does not depend on ``r``.
    """
    (a, b), (c, d) = _as_matrix(gamma)
    if a * d - b * c != 1:
        raise ValueError("matrix must lie in SL2(Z)")
    if c > 0:
        return (Fraction(-1, 4) + Fraction(a + d, 12 * c) - dedekind_sum(d, c)) % 1
    if c < 0 or (c == 0 and a == -1):
        # same Moebius map as -gamma; g_(-r) = -g_r
        return (sl2_phase(((-a, -b), (-c, -d))) + Fraction(1, 2)) % 1
    # translation tau -> tau + b
    return Fraction(b, 12) % 1


def reduce_pair(r1, r2) -> PhasedIndex:
    """Rewrite ``g_(r1,r2)`` as ``e^(2 pi i t) g_idx`` with canonical ``idx``."""
    r1, r2 = Fraction(r1), Fraction(r2)
    s1, s2 = floor(r1), floor(r2)
    rho1, rho2 = r1 - s1, r2 - s2
    t = Fraction(s1 * s2 + s1 + s2, 2) - (s1 * rho2 - s2 * rho1) / 2
    n = rho1.denominator * rho2.denominator // gcd(rho1.denominator, rho2.denominator)
    return PhasedIndex(SiegelIndex.from_pair(rho1, rho2, n), t)


def transform_sl2(idx: SiegelIndex, gamma) -> PhasedIndex:
    """``g_idx(gamma tau) = e^(2 pi i t) g_idx'(tau)`` with ``idx'`` canonical."""
    (a, b), (c, d) = _as_matrix(gamma)
    r1, r2 = idx.r1, idx.r2
    raw = reduce_pair(r1 * a + r2 * c, r1 * b + r2 * d)
    index = raw.index.with_level(idx.n)
    return PhasedIndex(index, sl2_phase(gamma) + raw.phase)
