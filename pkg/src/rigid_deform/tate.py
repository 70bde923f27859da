"""The characteristic-0 guiding example: the Tate-curve lambda product and its j-invariant.

All series live at s = 1/t = 0 with rational (in practice integral) coefficients.
The cross ratio of the 2-torsion points of the Tate curve with parameter
q = s^2 is

    lambda(s) = prod_{i >= 0} ((1 + s^(2i+1)) / (1 - s^(2i+1)))^8,

and j = 2^8 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda - 1)^2) must agree
with the classical expansion E4^3 / Delta in q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fields import QQ
from .poly import Polynomial, RationalFunction
from .series import LaurentSeries

VAR = "s"
# legendre_j loses val((lambda - 1)^2) + val(lambda^2) + ... = 3 digits of precision
J_GUARD = 3


def _poly(coeffs, var=VAR):
    return Polynomial(QQ, coeffs, var)


def tate_factor(k: int, prec: int) -> LaurentSeries:
    """(1 + s^k) / (1 - s^k) to O(s^prec)."""
    one = LaurentSeries.one(QQ, var=VAR)
    sk = LaurentSeries.monomial(QQ, k, var=VAR)
    return (one + sk) * (one - sk).inverse(prec)


def tate_lambda(prec: int) -> LaurentSeries:
    """The one-sided eighth-power product to O(s^prec)."""
    if prec < 1:
        raise ValueError("precision must be at least 1")
    acc = LaurentSeries.one(QQ, prec, VAR)
    for k in range(1, prec, 2):
        acc = acc * tate_factor(k, prec)
    return (acc ** 8).truncate(prec)


def divisible_by(series: LaurentSeries, n: int) -> bool:
    return all(Fraction(c).denominator == 1 and Fraction(c).numerator % n == 0 for _, c in series.terms())


def tate_inversion_check(prec: int, series: LaurentSeries | None = None) -> bool:
    """lambda(-s) lambda(s) == 1 + O(s^prec)."""
    lam = tate_lambda(prec) if series is None else series
    prod = lam * lam.scale_variable(Fraction(-1))
    return prod == LaurentSeries.one(QQ, prec, VAR)


def negative_index_factor(j: int) -> RationalFunction:
    """The t-form factor (t^k + 1)/(t^k - 1) at index i = -(j + 1), k = 2i + 1, rewritten in s = 1/t."""
    k = 2 * j + 1
    # t^(-k) = s^k, so the factor is (s^k + 1)/(s^k - 1)
    sk = [0] * k + [1]
    return RationalFunction(_poly([1] + sk[1:]), _poly([-1] + sk[1:]))


def positive_index_factor(j: int) -> RationalFunction:
    """The t-form factor at index i = j >= 0 in s: (s^-k + 1)/(s^-k - 1) = (1 + s^k)/(1 - s^k)."""
    k = 2 * j + 1
    one_plus = _poly([1] + [0] * (k - 1) + [1])
    one_minus = _poly([1] + [0] * (k - 1) + [-1])
    return RationalFunction(one_plus, one_minus)


def negative_index_identity(j: int) -> bool:
    """The index -(j+1) factor is minus the index j factor, so the fourth powers agree."""
    return negative_index_factor(j) == -positive_index_factor(j)


def reordering_check(prec: int) -> bool:
    """prod_{i in Z} (t-form factor)^4 equals the one-sided eighth-power product to O(s^prec)."""
    from .series import laurent_from_rational
    acc = LaurentSeries.one(QQ, prec, VAR)
    for j in range((prec + 1) // 2):
        pos = laurent_from_rational(positive_index_factor(j), prec)
        neg = laurent_from_rational(negative_index_factor(j), prec)
        acc = acc * pos ** 4 * neg ** 4
    return acc.truncate(prec) == tate_lambda(prec)


def legendre_j(lam):
    """2^8 (lam^2 - lam + 1)^3 / (lam^2 (lam - 1)^2) for exact numbers or series."""
    if isinstance(lam, LaurentSeries):
        one = LaurentSeries.one(lam.ring, var=lam.var)
        if lam.is_zero() or (lam - one).is_zero():
            raise ZeroDivisionError("lambda must differ from 0 and 1")
        num = (lam * lam - lam + one) ** 3
        den = lam * lam * (lam - one) ** 2
        return (num * den.inverse()).scale(Fraction(256))
    lam = Fraction(lam)
    if lam in (0, 1):
        raise ZeroDivisionError("lambda must differ from 0 and 1")
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def j_tate_oracle(prec: int) -> LaurentSeries:
    """j = E4^3 / Delta in the variable q to O(q^prec), from divisor sums and the Delta product."""
    if prec < 1:
        raise ValueError("precision must be at least 1")
    n = prec + 1  # Delta = q * unit, so the unit is needed to O(q^(prec + 1))
    e4 = np.array([Fraction(1)] + [Fraction(240 * sigma3(k)) for k in range(1, n)], dtype=object)
    E4 = LaurentSeries(QQ, 0, e4, n, "q")
    unit = LaurentSeries.one(QQ, n, "q")
    for k in range(1, n):
        unit = unit * (LaurentSeries.one(QQ, var="q") - LaurentSeries.monomial(QQ, k, var="q"))
    unit = unit ** 24
    return (E4 ** 3 * unit.inverse(n)).shift(-1).truncate(prec)


@dataclass
class JCheckReport:
    prec: int
    match: bool
    compared_to: int
    first_difference: int | None
    constant_term: int | None

    @property
    def message(self) -> str:
        if self.match:
            return f"exact match to O(s^{self.compared_to})"
        return f"mismatch at s^{self.first_difference}"

    def to_json(self) -> dict:
        return {"prec": self.prec, "match": self.match, "compared_to": self.compared_to,
                "first_difference": self.first_difference, "constant_term": self.constant_term,
                "message": self.message}


def j_check(prec: int = 40) -> JCheckReport:
    """legendre_j(lambda(s)) against E4^3/Delta with q = s^2, to O(s^prec)."""
    lam = tate_lambda(prec + J_GUARD)
    j_lam = legendre_j(lam).truncate(prec)
    oracle = j_tate_oracle((prec + 1) // 2).ascend(2, VAR).truncate(prec)
    diff = j_lam.first_difference(oracle)
    common = int(min(j_lam.prec, oracle.prec))
    const = oracle.coefficient(0)
    return JCheckReport(prec, diff is None and common >= prec, common, diff,
                        None if const is None else int(const))


__all__ = ["tate_lambda", "tate_factor", "tate_inversion_check", "reordering_check", "legendre_j",
           "j_tate_oracle", "j_check", "JCheckReport", "divisible_by", "negative_index_identity", "sigma3"]
