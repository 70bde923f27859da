"""Dense univariate polynomials and reduced rational functions over a coefficient ring."""
from __future__ import annotations

import numpy as np

from .fields import FqElement, QQ


def coerce_scalar(ring, c):
    """Bring an int / Fraction / FqElement / code into ``ring``'s scalar form."""
    if isinstance(c, FqElement):
        if c.field != ring:
            raise ValueError(f"scalar from {c.field} used with {ring}")
        return c.code
    if ring is QQ:
        return ring.from_int(c) if isinstance(c, int) else c
    if isinstance(c, (int, np.integer)):
        return ring.from_int(int(c))
    raise TypeError(f"cannot use {c!r} as a scalar of {ring}")


def as_element(ring, c):
    """Interpret ``c`` as a field element: FqElement, or an element code (ints are codes)."""
    if isinstance(c, FqElement):
        return coerce_scalar(ring, c)
    if ring is QQ:
        return ring.from_int(c) if isinstance(c, int) else c
    c = int(c)
    if not 0 <= c < ring.q:
        raise ValueError(f"{c} is not an element code of {ring}")
    return c


def _trim(ring, coeffs):
    nz = np.flatnonzero(~ring.is_zero(coeffs)) if len(coeffs) else []
    if len(nz) == 0:
        return coeffs[:0]
    return coeffs[: nz[-1] + 1]


class Polynomial:
    """Polynomial with coefficients low degree first; the zero polynomial is empty."""

    __slots__ = ("ring", "coeffs", "var")

    def __init__(self, ring, coeffs, var: str = "t", _trusted: bool = False):
        self.ring = ring
        self.var = var
        if not _trusted:
            coeffs = (ring.array(coeffs) if not isinstance(coeffs, np.ndarray)
                      else coeffs.astype(ring.dtype, copy=False))
            coeffs = _trim(ring, coeffs)
        self.coeffs = coeffs

    # constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, ring, c, var="t"):
        return cls(ring, [coerce_scalar(ring, c)], var)

    @classmethod
    def monomial(cls, ring, k: int, c=1, var="t"):
        arr = ring.zeros(k + 1)
        arr[k] = coerce_scalar(ring, c)
        return cls(ring, arr, var)

    @classmethod
    def gen(cls, ring, var="t"):
        return cls.monomial(ring, 1, 1, var)

    def _new(self, coeffs):
        return Polynomial(self.ring, coeffs, self.var)

    # basic properties ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.ring.one

    @property
    def lead(self):
        return self.coeffs[-1]

    def valuation(self):
        """Order of vanishing at 0 (``None`` for the zero polynomial)."""
        if self.is_zero():
            return None
        return int(np.flatnonzero(~self.ring.is_zero(self.coeffs))[0])

    def coefficient(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero

    # arithmetic ------------------------------------------------------------

    def _check(self, other):
        if other.ring != self.ring or other.var != self.var:
            raise ValueError(f"polynomial mismatch: {self.ring}[{self.var}] vs {other.ring}[{other.var}]")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.ring, other, self.var)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] = self.ring.add(out[: len(b)], b)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, self.ring.neg(self.coeffs), self.var, _trusted=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return self._new(self.ring.conv(self.coeffs, other.coeffs))
        c = coerce_scalar(self.ring, other)
        return self._new(self.ring.scale(c, self.coeffs))

    __rmul__ = __mul__

    def scale(self, code):
        """Multiply by a scalar given in the ring's internal representation."""
        return self._new(self.ring.scale(code, self.coeffs))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.ring, 1, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ring = self.ring
        db = other.degree
        a = self.coeffs.copy()
        if len(a) - 1 < db:
            return Polynomial(ring, ring.zeros(0), self.var, _trusted=True), self
        inv_lead = ring.inv(other.lead)
        quo = ring.zeros(len(a) - db)
        b = other.coeffs
        for k in range(len(a) - 1 - db, -1, -1):
            c = ring.smul(a[k + db], inv_lead)
            if c != 0:
                quo[k] = c
                a[k:k + db + 1] = ring.sub(a[k:k + db + 1], ring.scale(c, b))
        return self._new(quo), self._new(a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return quo

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.ring.inv(self.lead))

    def gcd(self, other):
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def eval(self, point):
        acc = self.ring.zero
        pt = as_element(self.ring, point)
        for c in reversed(self.coeffs):
            acc = self.ring.sadd(self.ring.smul(acc, pt), c)
        return acc

    def compose(self, value):
        """Substitute a ring-compatible object (polynomial, rational function) for the variable."""
        acc = value * 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def scale_variable(self, zeta):
        """f(t) -> f(zeta * t)."""
        z = as_element(self.ring, zeta)
        n = len(self.coeffs)
        powers = [self.ring.one]
        for _ in range(1, n):
            powers.append(self.ring.smul(powers[-1], z))
        return Polynomial(self.ring, self.ring.mul(self.coeffs, self.ring.array(powers)),
                          self.var, _trusted=True)

    def frobenius_power(self, r: int):
        """f(t)^r for r a power of the characteristic: spread exponents, raise coefficients."""
        ring = self.ring
        if self.is_zero():
            return self
        out = ring.zeros((len(self.coeffs) - 1) * r + 1)
        out[::r] = ring.power(self.coeffs, r)
        return Polynomial(ring, out, self.var, _trusted=True)

    # comparison / display --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.ring == other.ring and self.var == other.var
                    and len(self.coeffs) == len(other.coeffs)
                    and bool(np.all(self.coeffs == other.coeffs)))
        try:
            return self == self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.var, tuple(int(c) if self.ring is not QQ else c
                                                for c in self.coeffs)))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_terms(self.ring, list(enumerate(self.coeffs)), self.var)


def format_coeff(ring, c) -> str:
    s = ring.format(c)
    if ring is not QQ and ring.m > 1 and ("+" in s or "*" in s):
        return f"({s})"
    if ring is QQ and "/" in s:
        return f"({s})"
    return s


def format_terms(ring, terms, var) -> str:
    """Render ``[(exponent, coeff), ...]`` high degree first."""
    parts = []
    for k, c in reversed(terms):
        if ring.is_zero(c):
            continue
        neg = ring is QQ and c < 0
        cs = format_coeff(ring, -c if neg else c)
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}" if k > 0 else f"{var}^({k})"
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        parts.append(("-" if neg else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, _reduced: bool = False):
        if den is None:
            den = Polynomial.constant(num.ring, 1, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num._check(den)
        if not _reduced:
            if num.is_zero():
                den = Polynomial.constant(num.ring, 1, num.var)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                inv = num.ring.inv(den.lead)
                if not (den.lead == num.ring.one):
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, ring, c, var="t"):
        return cls(Polynomial.constant(ring, c, var), _reduced=False)

    @classmethod
    def gen(cls, ring, var="t"):
        return cls(Polynomial.gen(ring, var), _reduced=False)

    @property
    def ring(self):
        return self.num.ring

    @property
    def var(self):
        return self.num.var

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction(Polynomial.constant(self.ring, other, self.var), _reduced=True)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(self.den ** (-e), self.num ** (-e))
        return RationalFunction(self.num ** e, self.den ** e, _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coefficient(0)

    def valuation(self):
        if self.is_zero():
            return None
        return self.num.valuation() - self.den.valuation()

    def eval(self, point):
        d = self.den.eval(point)
        if bool(self.ring.is_zero(d)):
            raise ZeroDivisionError("pole at evaluation point")
        return self.ring.smul(self.num.eval(point), self.ring.inv(d))

    def scale_variable(self, zeta):
        return RationalFunction(self.num.scale_variable(zeta), self.den.scale_variable(zeta))

    def frobenius_power(self, r: int):
        return RationalFunction(self.num.frobenius_power(r), self.den.frobenius_power(r), _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        try:
            return self == self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        n = str(self.num)
        d = str(self.den)
        if len(self.num.coeffs) > 1 or n.startswith("-"):
            n = f"({n})"
        if len(np.flatnonzero(~self.ring.is_zero(self.den.coeffs))) > 1:
            d = f"({d})"
        return f"{n}/{d}"


def rf_reduce(num: Polynomial, den: Polynomial) -> RationalFunction:
    return RationalFunction(num, den)


def parse_rational_function(text: str, ring, var: str = "t") -> RationalFunction:
    from .parsing import parse_expression
    names = {var: RationalFunction.gen(ring, var)}
    if ring is not QQ and ring.m > 1:
        names["x"] = RationalFunction(Polynomial(ring, [ring.from_vector([0, 1])], var))  # a code, not an integer
    return parse_expression(text, names, lambda n: RationalFunction.constant(ring, n, var))
