from fractions import Fraction

import pytest

from rigid_deform.fields import QQ
from rigid_deform.series import LaurentSeries, parse_series
from rigid_deform.tate import (divisible_by, j_check, j_tate_oracle, legendre_j, negative_index_identity,
                               reordering_check, sigma3, tate_inversion_check, tate_lambda)


def test_first_coefficients():
    assert tate_lambda(4) == parse_series("1 + 16*s + 128*s^2 + 704*s^3 + O(s^4)", QQ, "s")


def test_constant_term_and_integrality():
    lam = tate_lambda(40)
    assert lam.coefficient(0) == 1
    assert all(Fraction(c).denominator == 1 for _, c in lam.terms())
    assert divisible_by(lam - 1, 16)


@pytest.mark.parametrize("prec", [1, 20, 40])
def test_inversion(prec):
    assert tate_inversion_check(prec)


def test_inversion_negative_control():
    lam = tate_lambda(20) + LaurentSeries.monomial(QQ, 5, 1, var="s")
    assert not tate_inversion_check(20, lam)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_negative_index_identity(j):
    assert negative_index_identity(j)


@pytest.mark.parametrize("prec", [1, 20])
def test_reordering(prec):
    assert reordering_check(prec)


def test_legendre_values():
    assert legendre_j(-1) == 1728 and legendre_j(2) == 1728 and legendre_j(Fraction(1, 2)) == 1728
    with pytest.raises(ZeroDivisionError):
        legendre_j(1)


def test_legendre_orbit_symmetry_as_series():
    lam = tate_lambda(20)
    j = legendre_j(lam)
    assert legendre_j(lam.inverse()) == j
    assert legendre_j(LaurentSeries.one(QQ, var="s") - lam) == j
    assert j.val == -2


def test_j_oracle():
    j = j_tate_oracle(4)
    assert j.val == -1
    assert [j.coefficient(k) for k in (-1, 0, 1, 2)] == [1, 744, 196884, 21493760]
    assert sigma3(6) == 1 + 8 + 27 + 216


def test_j_check_full():
    rep = j_check(40)
    assert rep.match and rep.constant_term == 744
    assert rep.message == "exact match to O(s^40)"
