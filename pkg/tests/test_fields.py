from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigid_deform.fields import QQ, FieldError, FqElement, fq_arith, fq_make, subfield_embedding
from rigid_deform.parsing import ParseError, parse_field_element, parse_rational

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 4)]


def test_moduli_are_smallest_irreducibles():
    assert fq_make(2, 2).modulus == (1, 1, 1)
    assert fq_make(3, 2).modulus == (1, 0, 1)
    assert fq_make(2, 4).modulus == (1, 0, 0, 1, 1)


def test_f4_generator_arithmetic():
    F = fq_make(2, 2)
    x = F.element(F.parse("x"))
    assert x * x == x + 1
    assert x ** 3 == F.element(1)
    assert (x + 1) / x == x
    assert fq_arith(x, x, "mul") == x + 1


def test_field_errors():
    with pytest.raises(FieldError):
        fq_make(4, 1)
    with pytest.raises(ZeroDivisionError):
        fq_make(3).inv(0)
    with pytest.raises(ValueError):
        fq_make(3).element(1) + fq_make(5).element(1)


@pytest.mark.parametrize("p,m", FIELDS)
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p, m):
    F = fq_make(p, m)
    for a in F.units():
        assert F.spow(a, F.q - 1) == F.one
        assert F.smul(a, F.inv(a)) == F.one
    assert len(F.units()) == F.q - 1


@pytest.mark.parametrize("p,m", FIELDS)
def test_frobenius_is_additive(p, m):
    F = fq_make(p, m)
    els = np.array(F.elements())
    for b in F.elements():
        lhs = F.frobenius(F.add(els, np.full_like(els, b)))
        rhs = F.add(F.frobenius(els), np.full_like(els, F.frobenius(np.array([b]))[0]))
        assert np.array_equal(lhs, rhs)


@given(st.sampled_from(FIELDS), st.data())
def test_ring_axioms(pm, data):
    F = fq_make(*pm)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.smul(a, F.sadd(b, c)) == F.sadd(F.smul(a, b), F.smul(a, c))
    assert F.smul(a, b) == F.smul(b, a)
    assert F.sadd(a, F.sneg(a)) == F.zero


def test_subfield_embedding_is_a_homomorphism():
    small, big = fq_make(3), fq_make(3, 2)
    emb = subfield_embedding(small, big)
    for a in small.elements():
        for b in small.elements():
            assert emb[small.smul(a, b)] == big.smul(emb[a], emb[b])
            assert emb[small.sadd(a, b)] == big.sadd(emb[a], emb[b])
        assert big.in_subfield(emb[a], 3)


def test_parsing_field_elements_and_rationals():
    F = fq_make(2, 2)
    assert parse_field_element("x^2", F) == parse_field_element("x+1", F)
    assert parse_rational("3/4") == Fraction(3, 4)
    with pytest.raises(ParseError):
        parse_field_element("x +", F)


def test_rationals():
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert QQ.json_coeff(Fraction(5)) == 5
    assert QQ.json_coeff(Fraction(1, 2)) == "1/2"


def test_fq_element_hash_and_int():
    F = fq_make(5)
    assert int(FqElement(F, 3)) == 3
    assert len({FqElement(F, 3), FqElement(F, 3)}) == 1
