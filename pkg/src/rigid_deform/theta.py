"""Independent oracle: lambda = (x^q - x)(y^q - y) from theta products for x(z), y(z).

The coordinate functions are evaluated at a point c of F_{q^2} outside F_q
(an ordinary point for small t), as Laurent series in t with coefficients
in F_{q^2}.  With gamma = [[a, b], [c, d]], Nu = a t u + b, Du = c t u + d,
Mu = a u + b, Eu = c u + d the normalized products are

    x(c) = c^q (1 - t^Q) / (c^Q - t^Q) * prod_gamma hx(gamma)
    y(c) = (t^q - t) / (c^q - c) * prod_gamma hy(gamma)

where, normalizing by x(1) = 1 and y(t) = 1 directly,

    hx = (c d - b)(c - a) / ((c c - a)(d - b)) * prod_{u != 0} (c d - b)(Du - Nu) / ((c Du - Nu)(d - b))
    hy = (c c - a)(t d - b) / ((c d - b)(t c - a)) * prod_{u != 0} (c c - a)(t Eu - Mu) / ((c Eu - Mu)(t c - a))

and the regrouped constants use the normalizer identity prod gamma(tu) = prod u gamma(t)
per word length.  Every coefficient of the result must lie in F_q.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asm import AsmParams, gamma_group
from .fields import fq_make, subfield_embedding
from .moebius import enumerate_word_matrices
from .poly import Polynomial, as_element
from .series import LaurentSeries, power_product_series, product_accumulate


class DescentError(ArithmeticError):
    """A coefficient expected in F_q lies outside it."""


@dataclass
class ThetaEvalContext:
    params: AsmParams
    point: int | None = None  # code in F_{q^2}; default: the generator x
    max_len: int | None = None
    prec: int | None = None

    def __post_init__(self):
        F = self.params.field
        self.big = fq_make(F.p, 2 * F.m)
        self.embed = subfield_embedding(F, self.big)
        if self.point is None:
            self.point = self.big.from_vector([0, 1])
        self.point = as_element(self.big, self.point)
        if self.max_len is None:
            self.max_len = self.params.max_len
        if self.prec is None:
            self.prec = self.params.prec

    @property
    def ordinary(self) -> bool:
        return not bool(self.big.in_subfield(self.point, self.params.q))

    def lift(self, poly: Polynomial) -> Polynomial:
        return Polynomial(self.big, self.embed[poly.coeffs], poly.var, _trusted=True)

    def lift_scalar(self, code: int) -> int:
        return int(self.embed[int(code)])


def _consts(E, var):
    def const(code):
        return Polynomial(E, np.array([code], dtype=np.int64), var, _trusted=True)
    return const


def _x_pieces(ctx: ThetaEvalContext, mat, z: int, mode: str):
    E = ctx.big
    a, b, c, d = (ctx.lift(e) for e in mat.entries)
    const = _consts(E, a.var)
    t = Polynomial.gen(E, a.var)
    q = ctx.params.q
    Q = q - 1
    Z = const(z)
    zd_b = Z * d - b
    zc_a = Z * c - a
    units = [ctx.lift_scalar(u) for u in ctx.params.field.units()]
    if mode == "direct":
        pieces = [(zd_b, q), (c - a, 1), (zc_a, -1), (d - b, -q)]
        for u in units:
            U = const(u)
            nu, du = a * t * U + b, c * t * U + d
            pieces += [(du - nu, 1), (Z * du - nu, -1)]
        return pieces
    nt, dt = a * t + b, c * t + d
    pieces = [(zd_b, q), (zc_a, -1), (c - a, 1), (dt ** Q - nt ** Q, 1), (dt, -Q), (d - b, -q)]
    for u in units:
        U = const(u)
        nu, du = a * t * U + b, c * t * U + d
        pieces += [(du, 1), (Z * du - nu, -1)]
    return pieces


def _y_pieces(ctx: ThetaEvalContext, mat, z: int, mode: str):
    E = ctx.big
    a, b, c, d = (ctx.lift(e) for e in mat.entries)
    const = _consts(E, a.var)
    t = Polynomial.gen(E, a.var)
    q = ctx.params.q
    Q = q - 1
    Z = const(z)
    zd_b = Z * d - b
    zc_a = Z * c - a
    units = [ctx.lift_scalar(u) for u in ctx.params.field.units()]
    if mode == "direct":
        pieces = [(zc_a, q), (t * d - b, 1), (zd_b, -1), (t * c - a, -q)]
        for u in units:
            U = const(u)
            mu, eu = a * U + b, c * U + d
            pieces += [(t * eu - mu, 1), (Z * eu - mu, -1)]
        return pieces
    n1, d1 = a + b, c + d
    tQ = Polynomial.monomial(E, Q, 1, a.var)
    pieces = [(zc_a, q), (zd_b, -1), (t * d - b, 1), (tQ * d1 ** Q - n1 ** Q, 1), (d1, -Q), (t * c - a, -q)]
    for u in units:
        U = const(u)
        mu, eu = a * U + b, c * U + d
        pieces += [(eu, 1), (Z * eu - mu, -1)]
    return pieces


def _y_shifted_pieces(ctx: ThetaEvalContext, mat, z: int, v: int):
    """Factor of the product for y(z) - 1/v (v != 0)."""
    E = ctx.big
    a, b, c, d = (ctx.lift(e) for e in mat.entries)
    const = _consts(E, a.var)
    t = Polynomial.gen(E, a.var)
    q = ctx.params.q
    Z = const(z)
    V = const(v)
    nv, dv = a * t * V + b, c * t * V + d
    pieces = [(Z * dv - nv, q), (dv, -q), (Z * d - b, -1), (d, 1)]
    for u in (ctx.lift_scalar(u) for u in ctx.params.field.units()):
        U = const(u)
        mu, eu = a * U + b, c * U + d
        pieces += [(eu, 1), (Z * eu - mu, -1)]
    return pieces


def _theta_product(ctx: ThetaEvalContext, piece_fn, guard: int | None = None):
    """Product over gamma != 1 by word length, with its convergence certificate."""
    E = ctx.big
    spec = gamma_group(ctx.params)
    g = ctx.params.guard_digits if guard is None else guard
    prec = ctx.prec + g

    def stream():
        for n in range(1, ctx.max_len + 1):
            acc = None
            for _, mat in enumerate_word_matrices(spec, n):
                s = power_product_series(E, piece_fn(mat), prec)
                acc = s if acc is None else acc * s
            yield n, acc

    return product_accumulate(stream(), ctx.prec, ctx.params.window, max_index=ctx.max_len,
                              stop_when_certified=False)


def _prefactor_x(ctx, z):
    E = ctx.big
    Q = ctx.params.Q
    q = ctx.params.q
    prec = ctx.prec + ctx.params.guard_digits
    one = LaurentSeries.one(E)
    tQ = LaurentSeries.monomial(E, Q)
    zQ = LaurentSeries(E, 0, np.array([E.spow(z, Q)], dtype=np.int64))
    return ((one - tQ) * (zQ - tQ).inverse(prec)).scale(E.spow(z, q))


def _prefactor_y(ctx, z):
    E = ctx.big
    q = ctx.params.q
    denom = E.sub(E.spow(z, q), z)
    if E.is_zero(denom):
        raise ZeroDivisionError("y prefactor has a pole at this point (z in F_q)")
    return (LaurentSeries.monomial(E, q) - LaurentSeries.monomial(E, 1)).scale(E.inv(denom))


def theta_x(ctx: ThetaEvalContext, z: int | None = None, mode: str = "simplified"):
    z = ctx.point if z is None else z
    prod, cert = _theta_product(ctx, lambda mat: _x_pieces(ctx, mat, z, mode))
    return _prefactor_x(ctx, z) * prod, cert


def theta_y(ctx: ThetaEvalContext, z: int | None = None, mode: str = "simplified"):
    z = ctx.point if z is None else z
    prod, cert = _theta_product(ctx, lambda mat: _y_pieces(ctx, mat, z, mode))
    return _prefactor_y(ctx, z) * prod, cert


def descend_to_base(series: LaurentSeries, ctx: ThetaEvalContext) -> LaurentSeries:
    """Re-express an F_{q^2}-series with all coefficients in F_q over F_q."""
    E = ctx.big
    inv = {int(c): i for i, c in enumerate(ctx.embed)}
    bad = [k for k, c in series.terms() if not E.in_subfield(c, ctx.params.q)]
    if bad:
        raise DescentError(f"coefficient of t^{bad[0]} is not in F_{ctx.params.q}")
    table = np.zeros(E.q, dtype=np.int64)
    for big_code, small in inv.items():
        table[big_code] = small
    return series.map_coefficients(ctx.params.field, table=table)


@dataclass
class OracleResult:
    series: LaurentSeries
    x: LaurentSeries
    y: LaurentSeries
    certificates: dict
    point: str

    def to_json(self) -> dict:
        return {"series": self.series.to_json(), "point": self.point,
                "certificates": {k: v.to_json() for k, v in self.certificates.items()}}


def theta_oracle_lambda(ctx: ThetaEvalContext, params: AsmParams | None = None,
                        mode: str = "simplified") -> OracleResult:
    """(x(c)^q - x(c)) (y(c)^q - y(c)), descended to F_q and truncated to the certified precision."""
    if params is not None and params != ctx.params:
        ctx = ThetaEvalContext(params, ctx.point, ctx.max_len, ctx.prec)
    if not ctx.ordinary:
        raise ValueError("the evaluation point must lie outside F_q")
    q = ctx.params.q
    x, cx = theta_x(ctx, mode=mode)
    y, cy = theta_y(ctx, mode=mode)
    lam = (x.frobenius(q) - x) * (y.frobenius(q) - y)
    lam = lam.truncate(min(ctx.prec, lam.prec))
    return OracleResult(descend_to_base(lam, ctx), x, y, {"x": cx, "y": cy}, ctx.big.format(ctx.point))


def x_value_check(ctx: ThetaEvalContext, u, mode: str = "simplified"):
    """Evaluate the x-product at z = u in F_q; returns (series, agrees with the constant u)."""
    z = ctx.lift_scalar(as_element(ctx.params.field, u))
    val, cert = theta_x(ctx, z, mode)
    val = val.truncate(min(val.prec, ctx.prec))
    const = LaurentSeries.monomial(ctx.big, 0, 1).scale(z) if z else LaurentSeries.zero(ctx.big)
    return val, val == const


def kappa_prime_check(ctx: ThetaEvalContext, v, mode: str = "simplified"):
    """Measure kappa'_v for v != 0 as (y(c) - v) / (normalized product) and compare with -v."""
    F = ctx.params.field
    v = as_element(F, v)
    if F.is_zero(v):
        raise ValueError("v must be nonzero")
    E = ctx.big
    w = ctx.lift_scalar(F.inv(v))  # y - v uses the product attached to 1/v
    z = ctx.point
    q = ctx.params.q
    y, _ = theta_y(ctx, z, mode)
    prod, _ = _theta_product(ctx, lambda mat: _y_shifted_pieces(ctx, mat, z, w))
    prec = ctx.prec + ctx.params.guard_digits
    zq = E.spow(z, q)
    pre = LaurentSeries(E, 0, np.array([zq], dtype=np.int64)) - LaurentSeries.monomial(E, q).scale(w)
    pre = pre.scale(E.inv(E.sub(zq, z)))
    shifted = y - LaurentSeries.one(E).scale(ctx.lift_scalar(v))
    kappa = shifted * (pre * prod).inverse(prec)
    kappa = kappa.truncate(min(kappa.prec, ctx.prec))
    expected = LaurentSeries.one(E).scale(E.sneg(ctx.lift_scalar(v)))
    return kappa, kappa == expected


__all__ = ["ThetaEvalContext", "OracleResult", "DescentError", "theta_oracle_lambda", "theta_x", "theta_y",
           "x_value_check", "kappa_prime_check", "descend_to_base"]
