import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rigid_deform.fields import QQ, fq_make
from rigid_deform.poly import RationalFunction, parse_rational_function
from rigid_deform.series import (EXACT, LaurentSeries, SupportError, laurent_from_rational, parse_series,
                                 power_product_series, product_accumulate)

F2, F3, F4 = fq_make(2), fq_make(3), fq_make(2, 2)


def series(F, prec=12):
    return st.tuples(st.integers(-3, 3), st.lists(st.integers(0, F.q - 1), min_size=1, max_size=8)).map(
        lambda vc: LaurentSeries(F, vc[0], F.array(vc[1]), prec))


def test_text_round_trip():
    s = parse_series("t^-2 + 2*t + O(t^5)", F3)
    assert s.val == -2 and s.prec == 5
    assert parse_series(s.to_text(), F3) == s
    assert s.to_text() == "t^(-2) * (1 + 2*t^3) + O(t^5)"


def test_generator_name_in_extension_field():
    s = parse_series("1 + x*t + O(t^4)", F4)
    assert s.coefficient(1) == F4.parse("x")


def test_json_round_trip():
    s = parse_series("1 + x*t + O(t^4)", F4)
    back = LaurentSeries.from_json(s.to_json())
    assert back == s and back.prec == 4


def test_precision_rules():
    a = LaurentSeries(F3, 1, F3.array([1, 1]), 6)
    b = LaurentSeries(F3, -1, F3.array([1, 2]), 4)
    assert (a + b).prec == 4
    assert (a * b).prec == min(6 - 1, 4 + 1)
    assert a.inverse().prec == 6 - 2
    assert a.frobenius(3).prec == 18


def test_zero_to_precision():
    z = LaurentSeries.zero(F3, 5)
    assert z.is_zero() and z.val == 5
    with pytest.raises(ZeroDivisionError):
        z.inverse()


def test_expansion_of_rational_function():
    f = parse_rational_function("1/(1 - t)", QQ)
    s = laurent_from_rational(f, 6)
    assert all(s.coefficient(k) == 1 for k in range(6))


def test_descend_and_support_error():
    s = parse_series("t + t^3 + O(t^9)", F3)
    with pytest.raises(SupportError):
        s.descend(2)
    even = parse_series("t^2 + 2*t^6 + O(t^10)", F3)
    d = even.descend(2)
    assert d.val == 1 and d.prec == 5 and d.ascend(2) == even


def test_power_product_matches_rational_expansion():
    t = parse_rational_function("t", F2).num
    f = t * t + t + 1
    g = t + 1
    pieces = [(f, 3), (g, -5), (t * t * t + t + 1, 1)]
    s = power_product_series(F2, pieces, 10)
    exact = RationalFunction(f ** 3 * (t * t * t + t + 1), g ** 5)
    assert s == laurent_from_rational(exact, 10)


def test_certificate_stops_and_reports():
    factors = [LaurentSeries.one(F3, 20) + LaurentSeries.monomial(F3, 4 * n, 1, 20) for n in range(1, 9)]
    prod, cert = product_accumulate(factors, 10, window=2)
    assert cert.certified and cert.e_values == [4, 8, 12, 16]
    assert cert.achieved_precision == 10 and prod.prec == 10


def test_uncertified_precision_is_the_tail_estimate():
    factors = [LaurentSeries.one(F3, 20) + LaurentSeries.monomial(F3, n, 1, 20) for n in (1, 2, 3)]
    prod, cert = product_accumulate(factors, 10, window=2)
    assert not cert.certified
    assert cert.achieved_precision == 2 and prod.prec == 2


@settings(max_examples=80)
@given(series(F3), series(F3), series(F3))
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


@settings(max_examples=80)
@given(series(F4))
def test_inverse(a):
    if a.is_zero():
        return
    one = a * a.inverse()
    assert one == LaurentSeries.one(F4, one.prec)


@settings(max_examples=60)
@given(series(F2), st.integers(1, 3))
def test_frobenius_equals_power(a, r):
    k = 2 ** r
    assert a.frobenius(k) == a ** k


@settings(max_examples=60)
@given(series(F3), series(F3), st.sampled_from([1, 2]))
def test_scale_variable_multiplicative(a, b, z):
    assert (a * b).scale_variable(z) == a.scale_variable(z) * b.scale_variable(z)


def test_qq_series():
    s = parse_series("1 + (1/2)*s + O(s^3)", QQ, "s")
    assert s.coefficient(1) == Fraction(1, 2)
    assert (s * s.inverse()) == LaurentSeries.one(QQ, 3, "s")
    assert LaurentSeries.one(QQ).prec == EXACT == math.inf
