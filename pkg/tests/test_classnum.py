from fractions import Fraction

import pytest

from cmunits.classnum import (
    A_of,
    BoundCertificate,
    CASE_I_EDGE,
    case_i_bound,
    certify_case_i,
    certify_case_ii,
    certify_cn2_split,
    class_number_one_search,
    class_number_two_list,
    class_number_two_split_search,
    cn2_split_bounds,
    cn2_tail_certificate,
    heegner_search,
    heegner_solutions,
    match_discriminant,
    resultant_oracle,
    siegel_bound_0b,
    siegel_bound_a,
)
from cmunits.numerics import PrecisionError, QuadSurd, RealBall, pi_ball
from cmunits.quadforms import NonFundamentalDiscriminant, class_number, fundamental_discriminants, kronecker_symbol
from cmunits.siegel import SiegelIndex, eval_siegel

KNOWN_GAMMAS = {0, -32, -96, -960, -5280, -640320}


def abs_q(tau, prec=128):
    im = RealBall(-tau.d, prec).sqrt() * tau.q / tau.r
    return (-(2 * pi_ball(prec) * im)).exp()


# ---- Siegel-function bounds---------------------------------------------------------


def test_bounds_are_sound(rng):
    checked = 0
    while checked < 50:
        n = rng.randint(2, 12)
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b == 0:
            continue
        if 2 * a > n:
            a = n - a  # g_(-r) = -g_r, so |g| only depends on +-r
            b = (n - b) % n
        tau = QuadSurd(rng.randint(-5, 5), rng.randint(1, 4), rng.randint(1, 6), -rng.randint(1, 30))
        if tau.imag_squared() < Fraction(1, 9):
            continue
        A = abs_q(tau)
        value = abs(eval_siegel(SiegelIndex(a, b, n), tau, 128))
        bound = siegel_bound_a(Fraction(a, n), A) if a else siegel_bound_0b(Fraction(b, n), A)
        assert value.upper() <= bound.upper(), (a, b, n, tau)
        checked += 1


def test_bound_examples():
    A = RealBall(Fraction(1, 2), 128)
    v = siegel_bound_a(Fraction(1, 2), A)
    assert abs(float(v) - 0.5 ** (-1 / 24) * 2.718281828459045 ** (2 * 0.5**0.5 / 0.5)) < 1e-12
    A = A_of(-163)
    two = siegel_bound_0b(Fraction(1, 2), A)
    assert abs(float(two) / float(A.rpow(Fraction(1, 12))) - 2) < 1e-9
    three = siegel_bound_0b(Fraction(1, 3), A)
    assert abs(float(three) / float(A.rpow(Fraction(1, 12))) - 3**0.5) < 1e-9
    # g_(1/2,0) at theta_-163 is large; the bound must still dominate it
    from cmunits.quadforms import theta_K

    assert abs(eval_siegel(SiegelIndex(1, 0, 2), theta_K(-163), 128)).upper() <= siegel_bound_a(Fraction(1, 2), A).upper()


def test_bound_argument_checks():
    A = A_of(-31)
    with pytest.raises(ValueError):
        siegel_bound_a(Fraction(2, 3), A)
    with pytest.raises(ValueError):
        siegel_bound_0b(1, A)
    with pytest.raises(PrecisionError):
        siegel_bound_a(Fraction(1, 2), RealBall(2, 64))


def test_bounds_increase_with_A():
    prev = None
    for k in range(1, 40):
        A = RealBall(Fraction(k, 400), 128)
        vals = [case_i_bound(A, True), case_i_bound(A, False), *cn2_split_bounds(A)]
        if prev is not None:
            assert all(v.lower() > p.upper() for v, p in zip(vals, prev))
        prev = vals


# ---- certificates ----------------------------------------------------------------


def test_case_i_certificates():
    for d in (-31, -39, -40, -47, -56, -68):
        cert = certify_case_i(d)
        assert cert.passes and cert.case_tag == "not_inert_2"
    with pytest.raises(ValueError):
        certify_case_i(-24)
    with pytest.raises(ValueError):
        certify_case_i(-35)  # 2 inert


def test_case_ii_certificates():
    assert certify_case_ii(-51).passes
    assert [d for d in fundamental_discriminants(-50, -7) if d % 24 == 21] == []
    with pytest.raises(NonFundamentalDiscriminant):
        certify_case_ii(-75)
    with pytest.raises(ValueError):
        certify_case_ii(-43)


def test_certificate_monotonicity():
    ds = [d for d in fundamental_discriminants(-400, -31) if kronecker_symbol(d, 2) != -1]
    pairs = [(x, y) for x in ds for y in ds if y < x and (x % 4 == 0) == (y % 4 == 0)][:: 37][:10]
    assert len(pairs) == 10
    for hi, lo in pairs:
        a, b = certify_case_i(hi), certify_case_i(lo)
        assert a.passes and b.passes
        assert b.bound_value.upper() < a.bound_value.lower()


def test_certificate_json_and_threshold():
    cert = certify_case_i(-31)
    out = cert.to_json()
    assert set(out) == {"d", "case", "bound", "passes", "precision_bits"}
    assert isinstance(out["bound"], str) and out["passes"] is True
    near = BoundCertificate.from_bound(-31, "not_inert_2", RealBall.from_mid_rad(Fraction(99, 100), Fraction(2, 100), 64))
    assert near.passes is False


def test_cn2_preconditions():
    for d in (-39, -47, -95):
        with pytest.raises(ValueError):
            certify_cn2_split(d)
    # no class-number-two field with 2 split lies below -31
    assert [d for d in class_number_two_list() if d % 8 == 1] == [-15]
    cert = cn2_tail_certificate()
    assert cert.passes and cert.d == CASE_I_EDGE


# ---- searches --------------------------------------------------------------------


def test_class_number_one_search():
    res = class_number_one_search()
    assert res.found == {"i": [-7, -8], "ii": [], "iii": [-11, -19, -43, -67, -163]}
    assert res.certificates and res.all_pass
    assert res.spurious == []
    table1 = {-3, -4, -7, -8, -11, -19, -43, -67, -163}
    assert {d for v in res.found.values() for d in v} | {-3, -4} == table1


def test_class_number_two_search_and_list():
    res = class_number_two_split_search()
    assert res.found == {"cn2_split": [-15]} and res.all_pass
    assert class_number(-23) == 3
    assert class_number_two_list() == [
        -15, -20, -24, -35, -40, -51, -52, -88, -91, -115, -123, -148, -187, -232, -235, -267, -403, -427,
    ]


def test_heegner_search_contains_the_six():
    assert KNOWN_GAMMAS <= heegner_search(1000)
    with pytest.raises(ValueError):
        heegner_search(10)


def test_heegner_fast_path_matches_resultant():
    hits = heegner_solutions(1000)
    assert hits
    for h in hits:
        assert resultant_oracle(h.a, h.b, h.c) == [1, 0, -h.gamma, -16]
    assert any((h.a, h.b, h.c) == (0, 0, -2) and h.gamma == 0 for h in hits)


def test_heegner_cubic_has_real_root():
    for g in heegner_search(1000):
        # discriminant of X^3 - gX - 16 is 4g^3 - 27*256; negative means one real root
        disc = 4 * g**3 - 27 * 256
        assert disc != 0


def test_heegner_stable_at_one_million():
    assert heegner_search(10**6) == heegner_search(1000)


@pytest.mark.parametrize(
    "gamma,d", [(-640320, -163), (-5280, -67), (-960, -43), (-96, -19), (-32, -11), (0, -3)]
)
def test_match_discriminant(gamma, d):
    assert match_discriminant(gamma) == d


def test_match_discriminant_rejects_non_cm_values():
    assert match_discriminant(-33) is None
    assert match_discriminant(12) is None  # -4 is not 5 mod 8
