from fractions import Fraction

import pytest

from cmunits.modlevel import (
    ExponentFamily,
    FamilyParseError,
    GL2ModN,
    act_family,
    canonical_pm,
    check_level,
    decompose,
    enumerate_gl2,
    evaluate_family,
    field_degree,
    gl2_action,
    level_conditions,
    parse_family,
)
from cmunits.quadforms import theta_K
from cmunits.siegel import SiegelIndex

from conftest import random_sl2


def random_gl2(rng, n):
    while True:
        try:
            return GL2ModN(n, *(rng.randrange(n) for _ in range(4)))
        except ValueError:
            continue


# ---- the level criterion -----------------------------------------------------------


@pytest.mark.parametrize(
    "text,n,expected",
    [
        ("0/2,1/2:12", None, True),
        ("0/6,3/6:4", None, True),
        ("0/3,1/3:12", None, True),
        ("0/2,1/2:1", None, False),
    ],
)
def test_worked_families(text, n, expected):
    assert check_level(parse_family(text, n)) is expected


def test_failing_congruences_are_named():
    cond = level_conditions(parse_family("0/2,1/2:1"))
    assert cond == {"r1_squares": True, "r2_squares": False, "r1_r2": True, "exponent_sum": False}


def test_level_from_written_denominators():
    assert parse_family("0/6,3/6:4").n == 6
    assert parse_family("0/2,1/2:4").n == 2
    assert parse_family("0/2,1/3:1").n == 6


def test_parse_rejects_bad_input():
    for bad in ("", "0/2,0/2:3", "1/2;", "1/2,1/2", "a/2,1/2:1", "1/0,1/2:1"):
        with pytest.raises(FamilyParseError):
            parse_family(bad)
    assert issubclass(FamilyParseError, ValueError)


def test_family_merges_and_prints():
    fam = parse_family("0/2,1/2:3;0/2,3/2:-3;1/2,0/2:12")
    assert len(fam) == 1
    assert str(fam) == "1/2,0/2:12"
    assert parse_family(str(fam)) == fam


@pytest.mark.parametrize("n,deg", [(2, 6), (3, 24), (4, 48), (5, 240), (6, 144), (12, 2304)])
def test_field_degree(n, deg):
    assert field_degree(n) == deg


def test_field_degree_rejects_level_one():
    with pytest.raises(ValueError):
        field_degree(1)


# ---- GL2(Z/n)/{+-1} -----------------------------------------------------------------


def test_canonical_sign():
    m = GL2ModN(8, 5, 4, 4, 1)
    assert m.entries == (3, 4, 4, 7)
    assert GL2ModN(8, 3, 4, 4, 7) == m
    with pytest.raises(ValueError):
        GL2ModN(4, 2, 0, 0, 1)


def test_enumerate_n2_matches_the_six_matrices():
    six = {
        GL2ModN.from_matrix(m, 2)
        for m in ([[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 1]], [[1, 1], [1, 0]])
    }
    assert set(enumerate_gl2(2)) == six


@pytest.mark.parametrize("n", range(2, 8))
def test_enumeration_is_a_group_of_the_right_size(n):
    group = enumerate_gl2(n)
    assert len(group) == field_degree(n)
    s = set(group)
    ident = GL2ModN.identity(n)
    for g in group[:: max(1, len(group) // 12)]:
        assert g.inverse() in s and g @ g.inverse() == ident
        for h in group[:: max(1, len(group) // 12)]:
            assert g @ h in s


def test_enumeration_cap():
    with pytest.raises(ValueError):
        enumerate_gl2(25)


def test_action_examples():
    idx = SiegelIndex(0, 1, 2)
    assert gl2_action(idx, GL2ModN(2, 1, 0, 1, 1)) == SiegelIndex(1, 1, 2)
    assert gl2_action(idx, GL2ModN(2, 0, 1, 1, 0)) == SiegelIndex(1, 0, 2)
    assert gl2_action(SiegelIndex(2, 5, 7), GL2ModN.identity(7)) == canonical_pm(SiegelIndex(2, 5, 7))
    with pytest.raises(ValueError):
        gl2_action(idx, GL2ModN.identity(3))


def test_right_action_law(rng):
    for _ in range(200):
        n = rng.randint(2, 12)
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b == 0:
            a = 1
        idx = SiegelIndex(a, b, n)
        alpha, beta = random_gl2(rng, n), random_gl2(rng, n)
        assert gl2_action(idx, alpha @ beta) == gl2_action(gl2_action(idx, alpha), beta)


# ---- decomposition ---------------------------------------------------------------


def _check_decomposition(alpha):
    ((p, q), (r, s)), dval = decompose(alpha)
    assert p * s - q * r == 1
    n = alpha.n
    rebuilt = GL2ModN(n, p, q * dval, r, s * dval)
    assert rebuilt == alpha
    assert dval == alpha.det


def test_decompose_examples():
    a = GL2ModN(8, 5, 4, 4, 1)
    _check_decomposition(a)
    assert decompose(a)[1] == 5
    # the lift printed for this matrix is another valid choice
    assert GL2ModN(8, 5, 12 * 5, 12, 29 * 5) == a
    b = GL2ModN(8, 7, 6, 2, 1)
    _check_decomposition(b)
    assert decompose(b)[1] == 3
    assert GL2ModN(8, 7, 2 * 3, 10, 3 * 3) == b
    assert decompose(GL2ModN.identity(5)) == (((1, 0), (0, 1)), 1)


def test_decompose_round_trip(rng):
    for _ in range(100):
        _check_decomposition(random_gl2(rng, rng.randint(2, 12)))


def test_decompose_exhaustive_small():
    for n in (2, 3, 4, 6):
        for alpha in enumerate_gl2(n):
            _check_decomposition(alpha)


# ---- numerical consistency of the action -----------------------------------------


@pytest.mark.parametrize("text", ["0/2,1/2:12", "1/2,0/2:12;1/2,1/2:-12", "0/3,1/3:12", "1/3,1/3:12;0/3,1/3:-12"])
def test_orbit_consistency(text, rng):
    fam = parse_family(text)
    assert check_level(fam)
    tau = theta_K(-7)
    seen = 0
    while seen < 8:
        gamma = random_sl2(rng, 4)
        image = tau.mobius(gamma)
        if image.imag_squared() < Fraction(1, 10):
            continue
        alpha = GL2ModN.from_matrix(gamma, fam.n)
        lhs = evaluate_family(fam, image, 96)
        rhs = evaluate_family(act_family(fam, alpha), tau, 96)
        assert lhs.overlaps(rhs), gamma
        seen += 1


def test_orbit_values_form_a_finite_set_n2():
    fam = parse_family("0/2,1/2:12")
    tau = theta_K(-11)
    orbit = {act_family(fam, g) for g in enumerate_gl2(2)}
    assert len(orbit) == 3
    # closed under the group
    for g in enumerate_gl2(2):
        assert {act_family(f, g) for f in orbit} == orbit
    vals = [evaluate_family(f, tau, 96) for f in orbit]
    assert all(not vals[i].overlaps(vals[j]) for i in range(3) for j in range(i))


def test_exponent_family_validation():
    with pytest.raises(ValueError):
        ExponentFamily(0, {})
    fam = ExponentFamily(4, {SiegelIndex(0, 1, 2): 3})
    assert list(fam.entries) == [SiegelIndex(0, 2, 4)]
