from fractions import Fraction
from math import isqrt

import pytest
from sympy import factorint, primerange
from sympy import kronecker_symbol as sympy_kronecker

from cmunits.numerics import QuadSurd
from cmunits.quadforms import (
    BQF,
    InvalidDiscriminant,
    NonFundamentalDiscriminant,
    check_discriminant,
    class_number,
    fundamental_discriminants,
    is_fundamental,
    kronecker_symbol,
    reduced_forms,
    splitting_type,
    theta_K,
    theta_Q,
)

CN2 = [-15, -20, -24, -35, -40, -51, -52, -88, -91, -115, -123, -148, -187, -232, -235, -267, -403, -427]


def dirichlet_class_number(d):
    """Analytic class number formula; an oracle independent of form reduction."""
    w = {-3: 6, -4: 4}.get(d, 2)
    s = sum(sympy_kronecker(d, k) * k for k in range(1, -d))
    h = Fraction(-w * s, 2 * -d)
    assert h.denominator == 1
    return int(h)


def fundamental_oracle(d):
    if d % 4 == 1:
        return all(e == 1 for e in factorint(-d).values())
    if d % 4 == 0:
        m = -d // 4
        return m % 4 in (1, 2) and all(e == 1 for e in factorint(m).values())
    return False


def test_fundamental_discriminants_match_factorization():
    got = fundamental_discriminants(-500)
    want = [d for d in range(-3, -501, -1) if fundamental_oracle(d)]
    assert got == want


def test_class_numbers_match_analytic_formula():
    for d in fundamental_discriminants(-500):
        assert class_number(d) == dirichlet_class_number(d), d


@pytest.mark.parametrize(
    "d,forms",
    [(-163, [(1, 1, 41)]), (-15, [(1, 1, 4), (2, 1, 2)]), (-4, [(1, 0, 1)]), (-23, [(1, 1, 6), (2, -1, 3), (2, 1, 3)])],
)
def test_reduced_form_examples(d, forms):
    assert [tuple(q) for q in reduced_forms(d)] == forms


def test_reduced_form_invariants():
    for d in fundamental_discriminants(-400):
        forms = reduced_forms(d)
        assert tuple(forms[0])[:2] in ((1, 0), (1, 1))
        for q in forms:
            a, b, c = q
            assert b * b - 4 * a * c == d
            assert q.is_reduced()
            assert 3 * a * a <= -d


@pytest.mark.parametrize("d,h", [(-7, 1), (-20, 2), (-23, 3), (-3, 1), (-4, 1), (-47, 5), (-71, 7)])
def test_class_number_examples(d, h):
    assert class_number(d) == h


def test_class_number_two_list():
    assert [d for d in fundamental_discriminants(-500) if class_number(d) == 2] == CN2


def test_discriminant_checks():
    with pytest.raises(InvalidDiscriminant):
        check_discriminant(-5)
    with pytest.raises(InvalidDiscriminant):
        check_discriminant(4)
    with pytest.raises(NonFundamentalDiscriminant):
        theta_K(-12)
    assert not is_fundamental(-75) and is_fundamental(-24)


def test_theta_points():
    assert theta_K(-4) == QuadSurd(0, 1, 2, -4)  # sqrt(-4)/2 = i
    assert complex(theta_K(-4)) == 1j
    assert theta_K(-7) == QuadSurd(3, 1, 2, -7)
    assert theta_K(-8) == QuadSurd(0, 1, 2, -8)
    assert theta_Q(BQF(1, 1, 4)) == QuadSurd(-1, 1, 2, -15)
    assert theta_Q(BQF(2, 1, 2)) == QuadSurd(-1, 1, 4, -15)
    assert complex(theta_Q(BQF(1, 0, 1))) == 1j
    with pytest.raises(ValueError):
        theta_Q(BQF(2, 3, 2))


def test_kronecker_against_sympy():
    for d in fundamental_discriminants(-300):
        for p in primerange(2, 40):
            assert kronecker_symbol(d, p) == sympy_kronecker(d, p), (d, p)


def test_kronecker_examples():
    assert kronecker_symbol(-7, 2) == 1
    assert kronecker_symbol(-11, 2) == -1
    assert kronecker_symbol(-8, 2) == 0
    assert splitting_type(-11, 3) == "split"
    with pytest.raises(ValueError):
        kronecker_symbol(-7, 9)
