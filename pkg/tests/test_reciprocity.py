import pytest

from cmunits.invariants import ray_class_degree
from cmunits.modlevel import GL2ModN
from cmunits.quadforms import BQF, fundamental_discriminants, reduced_forms
from cmunits.reciprocity import (
    FieldData,
    gal_over_HK,
    generated_subgroup,
    kernel,
    relative_galois,
    u_Q,
    w_group,
)


def M(n, *entries):
    return GL2ModN(n, *entries)


I2 = GL2ModN.identity(2)


def test_field_data():
    F = FieldData.from_discriminant(-7)
    assert (F.B, F.C, F.omega, F.h) == (-3, 4, 2, 1)
    F = FieldData.from_discriminant(-20)
    assert (F.B, F.C, F.omega, F.h) == (0, 5, 2, 2)
    assert FieldData.from_discriminant(-3).omega == 6
    assert FieldData.from_discriminant(-4).omega == 4


def test_theta_is_a_root_of_its_min_poly():
    for d in (-3, -4, -7, -8, -11, -15, -20, -163):
        F = FieldData.from_discriminant(d)
        t = F.theta
        # (p + q sqrt d)/r satisfies X^2 + BX + C
        p, q, r = t.p, t.q, t.r
        real = p * p + q * q * t.d + F.B * p * r + F.C * r * r
        imag = 2 * p * q + F.B * q * r
        assert real == 0 and imag == 0


@pytest.mark.parametrize(
    "d,expected",
    [
        (-11, {I2, M(2, 1, 1, 1, 0), M(2, 0, 1, 1, 1)}),
        (-8, {I2, M(2, 1, 0, 1, 1)}),
        (-7, {I2}),
    ],
)
def test_w_group_n2(d, expected):
    assert set(w_group(2, d)) == expected


def test_w_group_size():
    for d in (-3, -4, -7, -8, -11, -15):
        F = FieldData.from_discriminant(d)
        for n in range(3, 13):
            count = sum(1 for t in range(n) for s in range(n) if _is_unit(F, t, s, n))
            assert len(w_group(n, F)) == count // 2
        # at n = 2 the sign is trivial and the map is one-to-one
        count = sum(1 for t in range(2) for s in range(2) if _is_unit(F, t, s, 2))
        assert len(w_group(2, F)) == count


def _is_unit(F, t, s, n):
    from math import gcd

    return gcd((t * t - F.B * t * s + F.C * s * s) % n, n) == 1


def test_kernel_examples():
    assert set(kernel(4, -4)) == {GL2ModN.identity(4), M(4, 0, -1, 1, 0)}
    # units 1, theta - 2 and 1 - theta of Z[(3 + sqrt(-3))/2]
    ker3 = set(kernel(3, -3))
    assert ker3 == {GL2ModN.identity(3), M(3, 1, -3, 1, -2), M(3, -2, 3, -1, 1)}
    assert len(ker3) == 3
    # [[-1,-3],[1,-2]] has determinant 5 and is not the image of a unit
    assert M(3, -1, -3, 1, -2) not in ker3
    for n in range(2, 13):
        assert kernel(n, -7) == [GL2ModN.identity(n)]


def test_kernel_units_have_determinant_one():
    for d in (-3, -4):
        for m in kernel(12, d):
            assert m.det == 1


def test_kernel_inside_w():
    for d in (-3, -4, -7, -8, -11):
        for n in range(2, 13):
            assert set(kernel(n, d)) <= set(w_group(n, d))


@pytest.mark.parametrize("d,size", [(-7, 1), (-8, 2), (-11, 3)])
def test_gal_over_HK_n2(d, size):
    reps = gal_over_HK(2, d)
    assert len(reps) == size
    assert reps[0] == I2


def test_gal_size_matches_ray_class_degree():
    fields = [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, -35, -40]
    for d in fields:
        F = FieldData.from_discriminant(d)
        for n in (2, 3, 4, 6, 8):
            assert len(gal_over_HK(n, F)) * F.h == ray_class_degree(n, F), (d, n)


def test_u_Q_examples():
    F = FieldData.from_discriminant(-15)
    assert u_Q(BQF(1, 1, 4), 2, F) == I2
    bottom = u_Q(BQF(2, 1, 2), 2, F)
    assert (bottom.c, bottom.d) in {(0, 1), (1, 0), (1, 1)}
    assert u_Q(BQF(1, 0, 1), 2, -4) == I2


def test_u_Q_is_invertible_for_all_forms():
    for d in fundamental_discriminants(-200):
        for Q in reduced_forms(d):
            for p in (2, 3, 5, 7):
                assert u_Q(Q, p, d).det != 0


def test_u_Q_rejects_bad_arguments():
    with pytest.raises(ValueError):
        u_Q(BQF(1, 1, 4), 4, -15)
    with pytest.raises(ValueError):
        u_Q(BQF(1, 1, 6), 2, -15)


def test_relative_galois_8_2_minus11():
    rel = relative_galois(8, 2, -11)
    assert len(rel) == 8
    assert M(8, 5, 4, 4, 1) in rel and M(8, 7, 6, 2, 1) in rel
    group = generated_subgroup([M(8, 5, 4, 4, 1), M(8, 7, 6, 2, 1)], 8)
    assert group == set(rel)
    # Z/2 x Z/4: an element of order 4 but none of order 8
    orders = sorted(_order(g) for g in group)
    assert max(orders) == 4
    assert orders.count(2) == 3


def _order(g):
    k, x = 1, g
    while x != GL2ModN.identity(g.n):
        x, k = x @ g, k + 1
    return k


def test_relative_galois_8_2_minus19():
    assert M(8, 7, 2, 2, 1) in relative_galois(8, 2, -19)


def test_relative_galois_trivial_and_errors():
    assert relative_galois(2, 2, -11) == [I2]
    with pytest.raises(ValueError):
        relative_galois(8, 3, -11)


def test_relative_galois_size_is_degree_ratio():
    for d in (-7, -8, -11, -19, -20):
        F = FieldData.from_discriminant(d)
        for m, n in ((4, 2), (6, 2), (6, 3), (8, 4)):
            assert len(relative_galois(m, n, F)) == ray_class_degree(m, F) // ray_class_degree(n, F)


def test_generated_subgroup():
    g = generated_subgroup([M(2, 1, 1, 1, 0)], 2)
    assert len(g) == 3
