"""Truncated Laurent series with absolute precision tracking.

A series ``t^v * (c_0 + c_1 t + ...) + O(t^P)`` is stored as its valuation
``v``, the coefficient array starting at ``t^v`` and the absolute precision
``P``.  For finite ``P`` the array always has length ``P - v``.  ``P`` may be
``EXACT`` (``math.inf``) for series known exactly (polynomials in ``t`` and
``t^-1``).  The zero series to precision ``P`` has valuation ``P`` and no
coefficients.

Precision propagation:

* ``f + g`` is known to ``min(P_f, P_g)``;
* ``f * g`` is known to ``min(P_f + v_g, P_g + v_f)``;
* ``1/f`` for ``f = t^v u`` is known to ``P_f - 2 v``;
* ``f^r`` for ``r`` a power of the characteristic is known to ``r P_f``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable

import numpy as np

from .fields import QQ, fq_make
from .poly import Polynomial, RationalFunction, as_element, coerce_scalar, format_coeff, parse_rational_function

EXACT = math.inf


class SupportError(ValueError):
    """A series has a nonzero coefficient at an exponent not divisible by the step."""

    def __init__(self, exponent: int, step: int):
        super().__init__(f"nonzero coefficient at exponent {exponent}, not divisible by {step}")
        self.exponent = exponent
        self.step = step


class PrecisionError(ArithmeticError):
    pass


# -- raw truncated arithmetic on coefficient arrays ---------------------------

def trunc_mul(ring, a, b, n: int):
    """First ``n`` coefficients of a*b."""
    if n <= 0:
        return ring.zeros(0)
    out = ring.conv(a[:n], b[:n])[:n]
    if len(out) < n:
        out = np.concatenate([out, ring.zeros(n - len(out))])
    return out


def unit_inverse(ring, a, n: int):
    """First ``n`` coefficients of 1/a, for a[0] invertible (Newton iteration)."""
    if n <= 0:
        return ring.zeros(0)
    inv0 = ring.inv(a[0])
    v = ring.zeros(1)
    v[0] = inv0
    k = 1
    while k < n:
        k = min(2 * k, n)
        av = trunc_mul(ring, a, v, k)
        err = ring.neg(av)
        err[0] = ring.sadd(err[0], ring.one)  # 1 - a v
        corr = trunc_mul(ring, v, err, k)
        vv = ring.zeros(k)
        vv[: len(v)] = v
        v = ring.add(vv, corr)
    return v


def spread(ring, a, r: int, n: int):
    """First ``n`` coefficients of a(t)^r for r a power of the characteristic."""
    out = ring.zeros(n)
    m = min(len(a), (n + r - 1) // r)
    out[: (m - 1) * r + 1: r] = ring.power(a[:m], r)
    return out


def trunc_pow(ring, a, k: int, n: int):
    """First ``n`` coefficients of a^k (k >= 0), using Frobenius in char p."""
    if k == 0:
        out = ring.zeros(n)
        if n:
            out[0] = ring.one
        return out
    p = ring.p
    r = 1
    if p:
        while k % p == 0:
            k //= p
            r *= p
    base = a[:n]
    if r > 1:
        base = base[: (n + r - 1) // r]
        m = len(base)
    else:
        m = n
    result = None
    while k:
        if k & 1:
            result = base if result is None else trunc_mul(ring, result, base, m)
        k >>= 1
        if k:
            base = trunc_mul(ring, base, base, m)
    if len(result) < m:
        result = np.concatenate([result, ring.zeros(m - len(result))])
    return spread(ring, result, r, n) if r > 1 else result


# -- the series type ----------------------------------------------------------

class LaurentSeries:
    __slots__ = ("ring", "val", "coeffs", "prec", "var")

    def __init__(self, ring, val, coeffs, prec=EXACT, var: str = "t", _normal: bool = False):
        self.ring = ring
        self.var = var
        if _normal:
            self.val, self.coeffs, self.prec = val, coeffs, prec
            return
        if not isinstance(coeffs, np.ndarray) or coeffs.dtype != np.dtype(ring.dtype):
            coeffs = ring.array(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs.astype(ring.dtype)
        if prec != EXACT:
            prec = int(prec)
            n = prec - val
            if n <= 0:
                self.val, self.coeffs, self.prec = prec, ring.zeros(0), prec
                return
            if len(coeffs) > n:
                coeffs = coeffs[:n]
        nz = np.flatnonzero(~ring.is_zero(coeffs))
        if len(nz) == 0:
            self.val = prec if prec != EXACT else EXACT
            self.coeffs = ring.zeros(0)
            self.prec = prec
            return
        val = int(val) + int(nz[0])
        coeffs = coeffs[nz[0]:]
        if prec == EXACT:
            coeffs = coeffs[: nz[-1] - nz[0] + 1]
        elif len(coeffs) < prec - val:
            coeffs = np.concatenate([coeffs, ring.zeros(prec - val - len(coeffs))])
        self.val, self.coeffs, self.prec = val, coeffs, prec

    # constructors ---------------------------------------------------------

    @classmethod
    def from_polynomial(cls, poly: Polynomial, prec=EXACT, shift: int = 0):
        return cls(poly.ring, shift, poly.coeffs, prec, poly.var)

    @classmethod
    def monomial(cls, ring, k: int, c=1, prec=EXACT, var="t"):
        return cls(ring, k, ring.array([coerce_scalar(ring, c)]) if ring is not QQ
                   else np.array([coerce_scalar(ring, c)], dtype=object), prec, var)

    @classmethod
    def one(cls, ring, prec=EXACT, var="t"):
        return cls.monomial(ring, 0, 1, prec, var)

    @classmethod
    def zero(cls, ring, prec=EXACT, var="t"):
        return cls(ring, 0, ring.zeros(0), prec, var)

    def _like(self, val, coeffs, prec):
        return LaurentSeries(self.ring, val, coeffs, prec, self.var)

    # properties -----------------------------------------------------------

    @property
    def valuation(self):
        return self.val

    @property
    def precision(self):
        return self.prec

    def is_exact(self) -> bool:
        return self.prec == EXACT

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, k: int):
        if self.prec != EXACT and k >= self.prec:
            raise PrecisionError(f"coefficient of {self.var}^{k} unknown (precision {self.prec})")
        i = k - self.val if not self.is_zero() else -1
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    def leading_coefficient(self):
        if self.is_zero():
            raise ValueError("zero series has no leading coefficient")
        return self.coeffs[0]

    def terms(self):
        """(exponent, coefficient) pairs for the nonzero known coefficients."""
        out = []
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                out.append((self.val + i, c))
        return out

    # arithmetic ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"expected a LaurentSeries, got {type(other).__name__}")
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
        if other.ring != self.ring:
            raise ValueError(f"coefficient ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other):
        if isinstance(other, LaurentSeries):
            self._check(other)
            return other
        if isinstance(other, Polynomial):
            return LaurentSeries.from_polynomial(other)
        return LaurentSeries.monomial(self.ring, 0, other, EXACT, self.var)

    def __add__(self, other):
        other = self._lift(other)
        if self.is_zero() and self.val == EXACT:
            return other
        if other.is_zero() and other.val == EXACT:
            return self
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val)
        if prec != EXACT:
            if lo >= prec:
                return LaurentSeries.zero(self.ring, prec, self.var)
            n = prec - lo
        else:
            n = max(self.val + len(self.coeffs), other.val + len(other.coeffs)) - lo
        out = self.ring.zeros(n)
        for s in (self, other):
            if s.is_zero():
                continue
            i = s.val - lo
            if i >= n:
                continue
            seg = s.coeffs[: n - i]
            out[i:i + len(seg)] = self.ring.add(out[i:i + len(seg)], seg)
        return self._like(lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.ring, self.val, self.ring.neg(self.coeffs), self.prec, self.var, _normal=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (LaurentSeries, Polynomial)):
            c = coerce_scalar(self.ring, other)
            if self.ring.is_zero(c):
                return LaurentSeries.zero(self.ring, self.prec, self.var)
            return LaurentSeries(self.ring, self.val, self.ring.scale(c, self.coeffs),
                                 self.prec, self.var, _normal=True)
        other = self._lift(other)
        if self.is_zero() and self.val == EXACT or other.is_zero() and other.val == EXACT:
            return LaurentSeries.zero(self.ring, EXACT, self.var)
        prec = min(self.prec + other.val, other.prec + self.val)
        val = self.val + other.val
        if prec == EXACT:
            return self._like(val, self.ring.conv(self.coeffs, other.coeffs), EXACT)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.ring, prec, self.var)
        n = prec - val
        return LaurentSeries(self.ring, val, trunc_mul(self.ring, self.coeffs, other.coeffs, n),
                             prec, self.var)

    __rmul__ = __mul__

    def scale(self, code):
        """Multiply by a scalar given in the ring's internal representation."""
        if self.ring.is_zero(code):
            return LaurentSeries.zero(self.ring, self.prec, self.var)
        return LaurentSeries(self.ring, self.val, self.ring.scale(code, self.coeffs),
                             self.prec, self.var, _normal=True)

    def inverse(self, prec=None):
        """1/f.  Exact non-monomial input needs an explicit result precision."""
        if self.is_zero():
            raise ZeroDivisionError("inverting a series that is zero to its precision")
        v = self.val
        if self.prec == EXACT:
            if len(self.coeffs) == 1:
                return self._like(-v, np.array([self.ring.inv(self.coeffs[0])], dtype=self.ring.dtype), EXACT)
            if prec is None:
                raise PrecisionError("inverse of an exact series needs a target precision")
            n = prec + v
        else:
            n = self.prec - v
            if prec is not None:
                n = min(n, prec + v)
        return LaurentSeries(self.ring, -v, unit_inverse(self.ring, self.coeffs, n), -v + n, self.var)

    def __truediv__(self, other):
        if isinstance(other, (LaurentSeries, Polynomial)):
            return self * self._lift(other).inverse(prec=None if self.prec == EXACT else self.prec)
        return self.scale(self.ring.inv(coerce_scalar(self.ring, other)))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return LaurentSeries.one(self.ring, EXACT, self.var)
        if self.is_zero():
            if self.val == EXACT:
                return self
            return LaurentSeries.zero(self.ring, self.prec + (k - 1) * self.val, self.var)
        if self.prec == EXACT:
            result = LaurentSeries.one(self.ring, EXACT, self.var)
            base = self
            while k:
                if k & 1:
                    result = result * base
                k >>= 1
                if k:
                    base = base * base
            return result
        # f^k = t^{kv} u^k; u known to relative n, so u^k too.
        n = self.prec - self.val
        p = self.ring.p
        if p and k % p == 0:
            r, j = 1, k
            while j % p == 0:
                j //= p
                r *= p
            # Frobenius multiplies the relative precision by r.
            base = self ** j
            return base.frobenius(r)
        coeffs = trunc_pow(self.ring, self.coeffs, k, n)
        return LaurentSeries(self.ring, k * self.val, coeffs, k * self.val + n, self.var)

    def frobenius(self, r: int | None = None):
        """f(t)^r coefficientwise, r a power of the characteristic (default q of the field)."""
        ring = self.ring
        if not ring.p:
            raise ValueError("Frobenius needs positive characteristic")
        if r is None:
            r = ring.q
        prec = self.prec * r if self.prec != EXACT else EXACT
        if self.is_zero():
            return LaurentSeries.zero(ring, prec, self.var)
        n = len(self.coeffs)
        out = ring.zeros((n - 1) * r + 1 if prec == EXACT else prec - r * self.val)
        out[: (n - 1) * r + 1: r] = ring.power(self.coeffs, r)
        return LaurentSeries(ring, r * self.val, out, prec, self.var)

    def shift(self, k: int):
        """Multiply by t^k."""
        if self.is_zero():
            return LaurentSeries.zero(self.ring, self.prec + k, self.var)
        return LaurentSeries(self.ring, self.val + k, self.coeffs, self.prec + k, self.var, _normal=True)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return self._like(self.val if not self.is_zero() else prec, self.coeffs, prec)

    def scale_variable(self, zeta):
        """f(zeta t): coefficient of t^k multiplied by zeta^k."""
        z = as_element(self.ring, zeta)
        if self.ring.is_zero(z):
            raise ValueError("zeta must be nonzero")
        if self.is_zero():
            return self
        exps = np.arange(self.val, self.val + len(self.coeffs))
        if self.ring is QQ:
            factors = np.array([z ** int(e) for e in exps], dtype=object)
        else:
            factors = np.array([self.ring.spow(z, int(e)) for e in exps], dtype=np.int64)
        return LaurentSeries(self.ring, self.val, self.ring.mul(self.coeffs, factors),
                             self.prec, self.var, _normal=True)

    def descend(self, d: int):
        """g with g(t^d) = f(t); precision floor(P/d)."""
        if d < 1:
            raise ValueError("descent step must be positive")
        if d == 1:
            return self
        for k, _ in self.terms():
            if k % d:
                raise SupportError(k, d)
        prec = self.prec // d if self.prec != EXACT else EXACT
        if self.is_zero():
            return LaurentSeries.zero(self.ring, prec, self.var)
        start = (-self.val) % d
        return LaurentSeries(self.ring, (self.val + start) // d, self.coeffs[start::d], prec, self.var)

    def ascend(self, d: int, var: str | None = None):
        """f(t^d)."""
        var = var or self.var
        prec = self.prec * d if self.prec != EXACT else EXACT
        if self.is_zero():
            return LaurentSeries.zero(self.ring, prec, var)
        n = len(self.coeffs)
        size = (n - 1) * d + 1 if prec == EXACT else prec - d * self.val
        out = self.ring.zeros(size)
        out[: (n - 1) * d + 1: d] = self.coeffs
        return LaurentSeries(self.ring, d * self.val, out, prec, var)

    def rename(self, var: str):
        return LaurentSeries(self.ring, self.val, self.coeffs, self.prec, var, _normal=True)

    def map_coefficients(self, ring, table=None, fn=None):
        """Re-express coefficients in another ring, via a code table or a function."""
        if table is not None:
            coeffs = table[self.coeffs]
        else:
            coeffs = ring.array([fn(c) for c in self.coeffs])
        val = self.val if not self.is_zero() else 0
        return LaurentSeries(ring, val, coeffs, self.prec, self.var)

    # comparison -----------------------------------------------------------

    def first_difference(self, other):
        """Smallest exponent below the common precision where f and g differ, or None."""
        diff = self - other
        if diff.is_zero():
            return None
        return diff.val

    def agreement(self, other):
        """Precision to which f and g agree (their common precision if they agree throughout)."""
        d = self.first_difference(other)
        return min(self.prec, other.prec) if d is None else d

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        if other.var != self.var or other.ring != self.ring:
            return False
        return self.first_difference(other) is None

    __hash__ = None

    # display / serialization ---------------------------------------------

    def __repr__(self):
        return f"LaurentSeries({self.to_text()})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        var = self.var
        big_o = "" if self.prec == EXACT else f"O({var}^{self.prec})" if self.prec != 1 else f"O({var})"
        if self.prec != EXACT and self.prec < 0:
            big_o = f"O({var}^({self.prec}))"
        if self.is_zero():
            return big_o or "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            neg = self.ring is QQ and c < 0
            cs = format_coeff(self.ring, -c if neg else c)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            body = cs if not mono else (mono if cs == "1" else f"{cs}*{mono}")
            parts.append(("-" if neg else "+", body))
        inner = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            inner += f" {sign} {body}"
        if self.val == 0:
            text = f"({inner})" if len(parts) > 1 else inner
        else:
            head = f"{var}^{self.val}" if self.val > 0 else f"{var}^({self.val})"
            text = f"{head} * ({inner})"
        return f"{text} + {big_o}" if big_o else text

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "valuation": None if self.val == EXACT else int(self.val),
            "precision": None if self.prec == EXACT else int(self.prec),
            "coeffs": [self.ring.json_coeff(c) for c in self.coeffs],
            "field": self.ring.describe(),
        }

    @classmethod
    def from_json(cls, data: dict):
        fd = data["field"]
        ring = QQ if fd["p"] == 0 else fq_make(fd["p"], fd["m"])
        if ring is not QQ and fd.get("modulus") is not None and tuple(fd["modulus"]) != ring.modulus:
            raise ValueError("modulus in JSON does not match the canonical field")
        prec = EXACT if data["precision"] is None else data["precision"]
        coeffs = [ring.parse(str(c)) if isinstance(c, str) else c for c in data["coeffs"]]
        val = data["valuation"] if data["valuation"] is not None else 0
        return cls(ring, val, ring.array(coeffs), prec, data["var"])


_BIG_O = re.compile(r"\+?\s*O\(\s*([A-Za-z_]\w*)\s*(?:\^\s*\(?\s*(-?\d+)\s*\)?)?\s*\)\s*$")


def parse_series(text: str, ring, var: str = "t") -> LaurentSeries:
    """Read the canonical text form ``t^v * (c0 + c1*t + ...) + O(t^P)``."""
    text = text.strip()
    m = _BIG_O.search(text)
    prec = EXACT
    if m:
        if m.group(1) != var:
            raise ValueError(f"O-term variable {m.group(1)!r} does not match {var!r}")
        prec = int(m.group(2)) if m.group(2) is not None else 1
        text = text[: m.start()].strip()
    if not text:
        return LaurentSeries.zero(ring, prec, var)
    rf = parse_rational_function(text, ring, var)
    if rf.den.valuation() != rf.den.degree:
        raise ValueError("series text must be a Laurent polynomial")
    shift = -rf.den.degree
    num = rf.num.scale(ring.inv(rf.den.lead))
    return LaurentSeries.from_polynomial(num, prec, shift)


# -- named operations -----------------------------------------------------------

def laurent_from_rational(f: RationalFunction, prec: int) -> LaurentSeries:
    """Expansion of f at t = 0, known modulo t^prec."""
    ring = f.ring
    if f.is_zero():
        return LaurentSeries.zero(ring, prec, f.var)
    a = f.num.valuation()
    b = f.den.valuation()
    v = a - b
    n = prec - v
    if n <= 0:
        return LaurentSeries.zero(ring, prec, f.var)
    num = f.num.coeffs[a:a + n]
    den = f.den.coeffs[b:b + n]
    coeffs = trunc_mul(ring, num, unit_inverse(ring, den, n), n)
    return LaurentSeries(ring, v, coeffs, prec, f.var)


def laurent_arith(f: LaurentSeries, g=None, op: str = "mul", k: int | None = None) -> LaurentSeries:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "inv":
        return f.inverse()
    if op == "pow":
        return f ** k
    if op == "frobenius":
        return f.frobenius(k)
    raise ValueError(f"unknown operation {op!r}")


def series_scale_variable(f: LaurentSeries, zeta) -> LaurentSeries:
    return f.scale_variable(zeta)


def series_descend(f: LaurentSeries, d: int) -> LaurentSeries:
    return f.descend(d)


def series_ascend(f: LaurentSeries, d: int) -> LaurentSeries:
    return f.ascend(d)


# -- infinite products -----------------------------------------------------------

@dataclass
class ConvergenceCertificate:
    """Evidence for truncating a product of factors a_n at a target precision.

    ``entries`` holds (n, e_n) with e_n = val(a_n - 1); ``exact_flags`` marks
    the n where a_n - 1 vanished to its precision, so e_n is only a lower bound.
    """

    target: int
    window: int
    entries: list = dc_field(default_factory=list)
    exact_flags: list = dc_field(default_factory=list)
    certified: bool = False
    achieved_precision: int | None = None

    @property
    def verdict(self) -> str:
        return "certified" if self.certified else "not-certified"

    @property
    def e_values(self) -> list[int]:
        return [e for _, e in self.entries]

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "window": self.window,
            "verdict": self.verdict,
            "achieved_precision": self.achieved_precision,
            "e_n": [{"n": n, "e_n": e, "lower_bound": lb}
                    for (n, e), lb in zip(self.entries, self.exact_flags)],
        }


def product_accumulate(factors: Iterable, prec: int, window: int = 2, max_index: int | None = None,
                       stop_when_certified: bool = True):
    """Multiply a stream of factors, recording e_n and certifying the truncation.

    Items may be series (indexed 1, 2, ...) or ``(n, series)`` pairs.  The
    product is certified once e_n > prec for every n in the trailing window.
    The achieved precision accounts for the running valuation: the neglected
    tail perturbs the product at ``val(product) + min(window e_n)``, capped at
    ``prec``.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    cert = ConvergenceCertificate(target=prec, window=window)
    running = None
    for i, item in enumerate(factors, start=1):
        n, a = item if isinstance(item, tuple) else (i, item)
        if a.is_zero():
            raise ZeroDivisionError(f"factor {n} is zero to its precision")
        d = a - 1
        cert.entries.append((n, int(d.val)))
        cert.exact_flags.append(d.is_zero())
        running = a if running is None else running * a
        tail = cert.e_values[-window:]
        if len(tail) == window and all(e > prec for e in tail):
            cert.certified = True
            if stop_when_certified:
                break
        else:
            cert.certified = False
        if max_index is not None and n >= max_index:
            break
    if running is None:
        raise ValueError("empty factor stream")
    # The neglected tail is assumed no worse than the trailing window; this is
    # a proof only in the certified case and an estimate otherwise.
    achieved = min(prec, running.prec, running.val + min(cert.e_values[-window:]))
    cert.achieved_precision = int(achieved)
    return running.truncate(achieved), cert


def power_product_series(ring, pieces, prec: int, var: str = "t") -> LaurentSeries:
    """Expand prod f_i^{k_i} (f_i polynomials, k_i nonzero integers) at 0 modulo t^prec.

    Valuations are read off exactly, so only the unit parts are truncated, to
    the relative length the target precision requires.
    """
    arrs = []
    val = 0
    for poly, k in pieces:
        coeffs = poly.coeffs if isinstance(poly, Polynomial) else poly
        nz = np.flatnonzero(~ring.is_zero(coeffs))
        if len(nz) == 0:
            raise ZeroDivisionError("zero polynomial in a power product")
        v = int(nz[0])
        val += k * v
        arrs.append((coeffs[v:], k))
    n = prec - val
    if n <= 0:
        return LaurentSeries.zero(ring, prec, var)
    num = None
    den = None
    for unit, k in arrs:
        term = trunc_pow(ring, unit, abs(k), n)
        if k > 0:
            num = term if num is None else trunc_mul(ring, num, term, n)
        else:
            den = term if den is None else trunc_mul(ring, den, term, n)
    if num is None:
        num = trunc_pow(ring, ring.array([1]), 0, n)
    if den is not None:
        num = trunc_mul(ring, num, unit_inverse(ring, den, n), n)
    return LaurentSeries(ring, val, num, prec, var)
