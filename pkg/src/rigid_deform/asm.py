"""The Artin-Schreier-Mumford deformation map t -> lambda(t) as a certified Laurent series.

For gamma = [[a, b], [c, d]] in the Schottky group Gamma(t) put
Nt = a t + b, Dt = c t + d, N1 = a + b, D1 = c + d and Q = q - 1.  The
per-word factor

    -(1 - g(inf)) (1 - g(t)^Q) / (1 - g(0)^q)
     * (t - g(0)) (t^Q - g(1)^Q) / (t^q - g(inf)^q)
     * g(inf)^Q g(t)^(Q^2) / g(1)^(qQ)

clears to the homogeneous form

    -(c - a)(Dt^Q - Nt^Q) d^Q (t d - b)(t^Q D1^Q - N1^Q) a^Q Nt^(Q^2) D1^(Q^2)
    / [Dt^(qQ) (d - b)^q (t c - a)^q N1^(qQ)]

(degree 0 in the entries, so independent of the matrix representative).
lambda(t) = t^(Q^2+1) (1 - t^Q)^2 prod_n g_n(t), with g_n the product of
the factors over reduced words of length n.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .fields import FiniteField, fq_make
from .moebius import GroupSpec, ProjMatrix, ReducedWord, enumerate_word_matrices, gamma_spec, word_to_matrix
from .poly import Polynomial, as_element
from .series import (ConvergenceCertificate, LaurentSeries, SupportError, power_product_series,
                     product_accumulate)

log = logging.getLogger(__name__)


class ValuationError(ArithmeticError):
    def __init__(self, valuation, expected=1):
        super().__init__(f"valuation {valuation}, expected {expected}")
        self.valuation = valuation
        self.expected = expected


@dataclass(frozen=True)
class AsmParams:
    p: int
    m: int = 1
    prec: int = 20
    max_len: int = 6
    window: int = 2
    guard: int | None = None

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError("the deformation map lives in positive characteristic")
        fq_make(self.p, self.m)  # FieldError (a ValueError) for a non-prime p
        if self.max_len < 1:
            raise ValueError("max_len must be at least 1")
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.prec < self.Q ** 2 + 2:
            raise ValueError(f"precision must be at least Q^2 + 2 = {self.Q ** 2 + 2}")

    @property
    def field(self) -> FiniteField:
        return fq_make(self.p, self.m)

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def Q(self) -> int:
        return self.q - 1

    @property
    def genus(self) -> int:
        return self.Q ** 2

    @property
    def guard_digits(self) -> int:
        return 2 * self.Q ** 2 if self.guard is None else self.guard

    @property
    def factor_prec(self) -> int:
        return self.prec + self.guard_digits


@lru_cache(maxsize=None)
def _gamma(p: int, m: int, var: str = "t") -> GroupSpec:
    return gamma_spec(fq_make(p, m), var)


def gamma_group(params: AsmParams) -> GroupSpec:
    return _gamma(params.p, params.m)


def _entries(gamma):
    if isinstance(gamma, ProjMatrix):
        return gamma.entries
    raise TypeError("expected a ProjMatrix")


def factor_pieces(gamma: ProjMatrix, q: int):
    """(polynomial, exponent) pairs of the homogeneous per-word factor, without the sign."""
    a, b, c, d = gamma.entries
    F = a.ring
    Q = q - 1
    t = Polynomial.gen(F, a.var)
    nt, dt = a * t + b, c * t + d
    n1, d1 = a + b, c + d
    tq = Polynomial.monomial(F, Q, 1, a.var)
    checks = {"c (gamma(inf) finite)": c, "d (gamma(0) finite)": d, "c+d (gamma(1) finite)": d1,
              "a+b (gamma(1) nonzero)": n1}
    for what, poly in checks.items():
        assert not poly.is_zero(), f"degenerate word: {what} vanishes"
    pieces = [
        (c - a, 1), (dt ** Q - nt ** Q, 1), (d, Q), (t * d - b, 1), (tq * d1 ** Q - n1 ** Q, 1),
        (a, Q), (nt, Q * Q), (d1, Q * Q),
        (dt, -q * Q), (d - b, -q), (t * c - a, -q), (n1, -q * Q),
    ]
    for poly, k in pieces:
        assert not poly.is_zero(), f"degenerate word: a {'numerator' if k > 0 else 'denominator'} vanishes"
    return pieces


def per_word_factor(gamma, params: AsmParams, spec: GroupSpec | None = None, prec: int | None = None):
    """Laurent expansion of the factor of one group element, to precision P + guard."""
    F = params.field
    if isinstance(gamma, ReducedWord):
        if not gamma.letters:
            raise ValueError("the identity has no factor")
        gamma = word_to_matrix(gamma, spec or gamma_group(params))
    prec = params.factor_prec if prec is None else prec
    s = power_product_series(F, factor_pieces(gamma, params.q), prec)
    return s.scale(F.sneg(F.one))


def per_word_rational(gamma: ProjMatrix, q: int):
    """The factor as an exact rational function (for small checks)."""
    from .poly import RationalFunction
    F = gamma.ring
    num = Polynomial.constant(F, -1, gamma.var)
    den = Polynomial.constant(F, 1, gamma.var)
    for poly, k in factor_pieces(gamma, q):
        if k > 0:
            num = num * poly ** k
        else:
            den = den * poly ** (-k)
    return RationalFunction(num, den)


def _word_product(p, m, n, prec, first_letters, pieces_fn="lambda"):
    params_q = p ** m
    F = fq_make(p, m)
    spec = _gamma(p, m)
    total = None
    count = 0
    for _, mat in enumerate_word_matrices(spec, n, first_letters):
        if pieces_fn == "lambda":
            s = power_product_series(F, factor_pieces(mat, params_q), prec).scale(F.sneg(F.one))
        else:
            s = pieces_fn(mat, params_q, prec)
        total = s if total is None else total * s
        count += 1
    return total, count


def _partition_task(args):
    p, m, n, prec, letters = args
    return _word_product(p, m, n, prec, letters)[0]


def g_n(n: int, params: AsmParams, cache=None, workers: int = 1):
    """Product of the per-word factors over all reduced words of length n; returns (g_n, e_n)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    prec = params.factor_prec
    if cache is not None:
        hit = cache.load("g", params.p, params.m, n, prec)
        if hit is not None:
            series = hit[0]
            return series, int((series - 1).val)
    spec = gamma_group(params)
    if workers > 1:
        parts = [(params.p, params.m, n, prec, [x]) for x in spec.alphabet]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_partition_task, parts))
        series = results[0]
        for r in results[1:]:
            series = series * r
    else:
        series, _ = _word_product(params.p, params.m, n, prec, None)
    if cache is not None:
        cache.store("g", params.p, params.m, n, prec, series, {"e_n": int((series - 1).val)})
    return series, int((series - 1).val)


@dataclass
class LambdaResult:
    series: LaurentSeries
    certificate: ConvergenceCertificate
    params: AsmParams
    product: LaurentSeries
    factor_valuations: list = dc_field(default_factory=list)
    valuation_report: dict = dc_field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.certificate.certified

    @property
    def precision(self):
        return self.series.prec

    def prefactor(self) -> LaurentSeries:
        return asm_prefactor(self.params.field, self.params.Q)

    def to_json(self) -> dict:
        return {
            "field": self.params.field.describe(),
            "params": {"prec": self.params.prec, "max_len": self.params.max_len,
                       "window": self.params.window, "guard": self.params.guard_digits},
            "prefactor": {"t_exponent": self.params.Q ** 2 + 1, "one_minus_t_Q_squared": True},
            "series": self.series.to_json(),
            "certificate": self.certificate.to_json(),
            "g_n_valuations": [{"n": n, "valuation": v} for n, v in self.factor_valuations],
            "valuation_report": self.valuation_report,
        }


def asm_prefactor(F, Q: int) -> LaurentSeries:
    one_minus = LaurentSeries.one(F) - LaurentSeries.monomial(F, Q)
    return LaurentSeries.monomial(F, Q * Q + 1) * one_minus * one_minus


def asm_lambda(params: AsmParams, cache=None, workers: int = 1, factors=None) -> LambdaResult:
    """lambda(t) to precision P with the e_n certificate over word lengths 1..L."""
    F = params.field
    vals = []
    if factors is None:
        factors = {}

    def stream():
        for n in range(1, params.max_len + 1):
            if n not in factors:
                factors[n] = g_n(n, params, cache, workers)[0]
            vals.append((n, int(factors[n].val)))
            yield n, factors[n]

    prod, cert = product_accumulate(stream(), params.prec, params.window,
                                    max_index=params.max_len, stop_when_certified=False)
    lam = asm_prefactor(F, params.Q) * prod
    lam = lam.truncate(min(params.prec, lam.prec))
    report = {"valuation": None if lam.is_zero() else int(lam.val),
              "expected": 1, "leading_coefficient": None, "ok": False}
    if not lam.is_zero():
        lead = lam.leading_coefficient()
        report["leading_coefficient"] = F.json_coeff(lead)
        report["ok"] = lam.val == 1 and not F.is_zero(lead)
        if not report["ok"]:
            log.warning("lambda has valuation %s (expected 1)", lam.val)
    return LambdaResult(lam, cert, params, prod, vals, report)


def equivariance_check(result_or_series, zeta) -> bool:
    """lambda(zeta t) == zeta lambda(t) on the known coefficients."""
    lam = result_or_series.series if isinstance(result_or_series, LambdaResult) else result_or_series
    z = as_element(lam.ring, zeta)
    if lam.ring.is_zero(z):
        raise ValueError("zeta must be nonzero")
    return lam.scale_variable(z) == lam.scale(z)


def support_check(lam: LaurentSeries, Q: int) -> int | None:
    """First exponent with nonzero coefficient not congruent to 1 mod Q, or None."""
    for k, _ in lam.terms():
        if (k - 1) % Q:
            return k
    return None


def capital_lambda(result) -> LaurentSeries:
    """Lambda(T) = lambda(T^(1/Q))^Q as a series in T; must have valuation 1."""
    lam = result.series if isinstance(result, LambdaResult) else result
    F = lam.ring
    Q = F.q - 1
    bad = support_check(lam, Q)
    if bad is not None:
        raise SupportError(bad, Q)
    cap = (lam ** Q).descend(Q).rename("T")
    if cap.is_zero() or cap.val != 1:
        raise ValuationError(None if cap.is_zero() else cap.val)
    return cap


# -- the three-way split used for the equivariance argument ----------------------

def p123_pieces(gamma: ProjMatrix, q: int):
    a, b, c, d = gamma.entries
    F = a.ring
    Q = q - 1
    t = Polynomial.gen(F, a.var)
    nt, dt = a * t + b, c * t + d
    n1, d1 = a + b, c + d
    tQ = Polynomial.monomial(F, Q, 1, a.var)
    tq = Polynomial.monomial(F, q, 1, a.var)
    p1 = [(c - a, 1), (c, -q), (a, Q), (tQ * d1 ** Q - n1 ** Q, 1), (d1, Q * Q), (d - b, -1), (d, 1),
          (n1, -q * Q)]
    p2 = [(dt ** Q - nt ** Q, 1), (nt, Q * Q), (dt, -q * Q)]
    p3 = [(t * d - b, 1), (d, -1), (tq * c - a, -1), (c, 1)]
    return p1, p2, p3


@dataclass
class P123Report:
    n: int
    p: int
    m: int
    p1: LaurentSeries
    p2: LaurentSeries
    p3: LaurentSeries
    g: LaurentSeries
    matches: bool
    first_difference: int | None
    compared_to: int
    invariance: dict

    def to_json(self) -> dict:
        return {
            "n": self.n, "field": {"p": self.p, "m": self.m},
            "p1": self.p1.to_json(), "p2": self.p2.to_json(), "p3": self.p3.to_json(),
            "p1p2p3_valuation": int((self.p1 * self.p2 * self.p3).val),
            "g_n_valuation": int(self.g.val),
            "matches_g_n": self.matches,
            "first_differing_exponent": self.first_difference,
            "compared_to_precision": self.compared_to,
            "zeta_invariance": self.invariance,
        }


def p123_factors(n: int, params: AsmParams) -> P123Report:
    """The per-length products p1, p2, p3, their t -> zeta t invariance, and a comparison with g_n."""
    F = params.field
    prec = params.factor_prec
    spec = gamma_group(params)
    acc = [None, None, None]
    minus = F.sneg(F.one)
    for _, mat in enumerate_word_matrices(spec, n):
        parts = p123_pieces(mat, params.q)
        for i, pieces in enumerate(parts):
            s = power_product_series(F, pieces, prec)
            if i == 0:
                s = s.scale(minus)
            acc[i] = s if acc[i] is None else acc[i] * s
    g, _ = g_n(n, params)
    prod = acc[0] * acc[1] * acc[2]
    common = min(prod.prec, g.prec)
    diff = prod.first_difference(g)
    invariance = {}
    for i, s in enumerate(acc, start=1):
        invariance[f"p{i}"] = {F.format(z): bool(s.scale_variable(z) == s) for z in F.units()}
    return P123Report(n, params.p, params.m, acc[0], acc[1], acc[2], g, diff is None, diff, int(common),
                      invariance)


__all__ = ["AsmParams", "LambdaResult", "ValuationError", "per_word_factor", "per_word_rational", "g_n",
           "asm_lambda", "asm_prefactor", "equivariance_check", "support_check", "capital_lambda",
           "p123_factors", "P123Report", "gamma_group", "factor_pieces"]
