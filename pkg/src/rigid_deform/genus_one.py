"""Independent oracle for q = 2, where the ASM curve has genus 1.

Gamma(t) is generated by delta(1, 1) alone, so the curve is the Tate curve
with parameter q_T, the multiplier of delta: q_T + 1/q_T = tr^2 / det.  The
model (x^2 + x)(y^2 + y) = lambda becomes, after x = 1/u, w = y x (x + 1),
v = w u^2 and (u, v) = (X, Y) / lambda,

    Y^2 + X Y + lambda Y = X^3 + lambda X^2,

whose discriminant is lambda^4 in characteristic 2 (a1 = 1, so j = 1/Delta).
Hence lambda^4 = 1 / j(q_T) with j(q) = E4^3 / Delta reduced mod 2, and
lambda is recovered by descending exponents by 4.
"""
from __future__ import annotations

from .fields import fq_make
from .moebius import make_generator
from .poly import RationalFunction
from .series import LaurentSeries, laurent_from_rational
from .tate import j_tate_oracle


def tate_multiplier(prec: int) -> LaurentSeries:
    """q_T(t) with q_T + 1/q_T = tr^2/det of delta(1, 1), to O(t^prec)."""
    F = fq_make(2)
    d = make_generator("delta", F, (1, 1))
    c = laurent_from_rational(RationalFunction(d.trace() ** 2, d.det()), prec)
    x = c.inverse(prec)
    # x = 1 / (c + x) contracts: each pass fixes at least val(c^-2) more digits
    for _ in range(prec):
        nxt = (c + x).inverse(prec)
        if nxt == x and nxt.prec == x.prec:
            break
        x = nxt
    return x


def j_mod2_at(qt: LaurentSeries, prec: int) -> LaurentSeries:
    """j(q) = q^-1 + 744 + ... reduced mod 2 and evaluated at q = q_T(t)."""
    F = qt.ring
    v = int(qt.val)
    acc = LaurentSeries.zero(F, prec)
    # the q^k term contributes from t^(k v) on, so k < prec / v + 1 suffices
    jq = j_tate_oracle(prec // v + 2)
    for k, c in jq.terms():
        if int(c) % 2:
            acc = acc + qt ** k
    return acc


def genus_one_lambda(prec: int) -> LaurentSeries:
    """lambda(t) for q = 2 from the j-invariant, to O(t^prec)."""
    target = 4 * prec
    qt = tate_multiplier(target + 8)
    lam4 = j_mod2_at(qt, target + 8).inverse()
    if int(lam4.val) % 4 or any(k % 4 for k, _ in lam4.terms()):
        raise ArithmeticError("1/j is not a fourth power")
    return lam4.descend(4).truncate(prec)


__all__ = ["tate_multiplier", "genus_one_lambda", "j_mod2_at"]
