import random

import pytest
from hypothesis import given, settings, strategies as st

from rigid_deform.acceptance import random_rational
from rigid_deform.deciders import commutator_invariant, curves_isomorphic, generator_witness, groups_conjugate
from rigid_deform.fields import fq_make
from rigid_deform.poly import Polynomial, RationalFunction, parse_rational_function
from rigid_deform.series import parse_series

F3, F4 = fq_make(3), fq_make(2, 2)


def rf(text, F=F3, var="t"):
    return parse_rational_function(text, F, var)


def test_isomorphic_to_itself():
    lam = rf("t + t^3")
    d = curves_isomorphic(lam, lam)
    assert d.verdict and d.witness == 1


def test_isomorphic_by_unit():
    lam = rf("t + t^3")
    d = curves_isomorphic(rf("2*t + 2*t^3"), lam)
    assert d.verdict and d.witness == 2
    assert d.diagnostics["isomorphism"] == "x -> 2*x, y -> y"


def test_not_isomorphic_for_nonconstant_ratio():
    lam = rf("t + t^3")
    assert not curves_isomorphic(lam * rf("1 + t"), lam).verdict


def test_series_inputs_and_errors():
    a = parse_series("t + t^3 + O(t^9)", F3)
    assert curves_isomorphic(a.scale(2), a).witness == 2
    with pytest.raises(ValueError):
        curves_isomorphic(rf("0"), rf("t"))
    with pytest.raises(TypeError):
        curves_isomorphic(a, rf("t"))


def test_conjugate_examples():
    s = lambda x: rf(x, F3, "s")
    d = groups_conjugate(s("s"), s("2*s"))
    assert d.verdict and d.witness == 2 and d.diagnostics["generator_witness"]
    assert groups_conjugate(s("s"), s("s")).witness == 1
    d = groups_conjugate(s("s"), s("s^2"))
    assert not d.verdict and d.diagnostics["reason"] == "ratio 1/s not in F_q*"


def test_conjugacy_needs_positive_valuation():
    with pytest.raises(ValueError):
        groups_conjugate(rf("1 + s", F3, "s"), rf("s", F3, "s"))


def test_commutator_invariant():
    assert commutator_invariant(rf("s", fq_make(2), "s")) == rf("1/s^2", fq_make(2), "s")
    assert commutator_invariant(rf("s", F3, "s")) == rf("(2 + 1/s)^2", F3, "s")


@pytest.mark.parametrize("F", [F3, F4])
def test_generator_witness_every_unit(F):
    assert all(generator_witness(F, z) for z in F.units())


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([F3, F4]))
def test_random_positive_and_negative(seed, F):
    rng = random.Random(seed)
    lam = random_rational(F, rng)
    zeta = rng.choice(F.units())
    c = RationalFunction(Polynomial(F, [zeta]))
    assert curves_isomorphic(lam * c, lam).witness == zeta
    r = random_rational(F, rng, nonconstant=True)
    assert not curves_isomorphic(lam * r, lam).verdict
