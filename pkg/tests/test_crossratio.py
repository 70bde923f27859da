import random
from fractions import Fraction

import pytest

from rigid_deform.crossratio import (DegenerateError, FixedPointData, cross_ratio, dihedral_tate_check,
                                     prop_four_product, tate_fixed_points)
from rigid_deform.fields import QQ
from rigid_deform.moebius import P1Point, ProjMatrix, apply_moebius, tate_dihedral_spec
from rigid_deform.poly import RationalFunction


def pt(x):
    return P1Point.finite(Fraction(x), QQ, "s")


def test_normalisation():
    lam = P1Point(RationalFunction.gen(QQ, "s"))
    assert cross_ratio(lam, pt(1), pt(0), P1Point.infinity()) == RationalFunction.gen(QQ, "s")


def test_swap_symmetry():
    a, b, c, d = pt(2), pt(5), pt(-1), pt(7)
    assert cross_ratio(a, b, c, d) * cross_ratio(a, b, d, c) == RationalFunction.constant(QQ, 1, "s")


def test_moebius_invariance_random():
    rng = random.Random(1)
    for _ in range(30):
        zs = [pt(x) for x in rng.sample(range(-20, 20), 4)]
        while True:
            a, b, c, d = (rng.randint(-5, 5) for _ in range(4))
            if a * d != b * c:
                break
        g = ProjMatrix.from_entries(QQ, [a, b, c, d], "s")
        gz = [apply_moebius(g, z) for z in zs]
        assert cross_ratio(*gz) == cross_ratio(*zs)


def test_degenerate():
    with pytest.raises(DegenerateError):
        cross_ratio(pt(1), pt(1), pt(2), pt(3))
    with pytest.raises(DegenerateError):
        FixedPointData(pt(1), pt(1), pt(2), pt(3))


def test_identity_factor():
    pts = tate_fixed_points()
    parts = prop_four_product(tate_dihedral_spec(), pts, 0, 6)
    expected = cross_ratio(pts.elam, pts.e1, pts.e0, pts.einf)
    from rigid_deform.series import laurent_from_rational
    assert parts.products[0] == laurent_from_rational(expected, 6)


def test_dihedral_convergence():
    rep = dihedral_tate_check(12, 20)
    assert rep.nondecreasing
    assert rep.agreement[0] >= 1
    assert rep.first_length_reaching(10) is not None and rep.first_length_reaching(10) <= 20
