"""Coefficient rings: finite fields F_q = F_p[x]/(modulus) and the rationals.

Elements of F_q are stored internally as integer codes ``sum c_i p^i`` where
``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` is the residue mod the modulus.  All
vector operations act elementwise on numpy int64 arrays of codes, which is
what the polynomial and series layers use.  ``FqElement`` is the public value
type wrapping a single code.

The rationals are represented by ``QQ`` with coefficient arrays of
``fractions.Fraction`` objects (numpy object dtype).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

DEFAULT_MAX_Q = 2 ** 16


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomial helpers over F_p (lists, low degree first) ---------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _fp_trim([x % p for x in a])
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        _fp_trim(a)
    return a


def is_irreducible_fp(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _fp_mod(list(poly), list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    # candidates ordered lexicographically on (c_0, ..., c_{m-1})
    for low in product(range(p), repeat=m):
        poly = low + (1,)
        if m == 1 or is_irreducible_fp(poly, p):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


class FiniteField:
    """The field F_q, q = p^m, with the deterministic modulus of ``fq_make``."""

    dtype = np.int64
    characteristic_zero = False

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        self.zero = 0
        self.one = 1
        self._build_tables()

    # construction ---------------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        code = 0
        for d in reversed(list(ds)):
            code = code * self.p + int(d)
        return code

    def _mul_slow(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self._digits(a), self._digits(b)
        prod_ = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod_[i + j] = (prod_[i + j] + x * y) % p
        red = _fp_mod(prod_, list(self.modulus), p) if m > 1 else [prod_[0] % p]
        red = red + [0] * (m - len(red))
        return self._undigits(red)

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        q, p, m = self.q, self.p, self.m
        if m == 1:
            # primitive root mod p
            factors = _prime_factors(q - 1)
            g = next(g for g in range(1, q)
                     if all(pow(g, (q - 1) // f, q) != 1 for f in factors)) if q > 2 else 1
        else:
            factors = _prime_factors(q - 1)
            g = next(g for g in range(2, q)
                     if all(self._pow_slow(g, (q - 1) // f) != 1 for f in factors))
        self.primitive = g
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = (x * g) % p if m == 1 else self._mul_slow(x, g)
        exp[q - 1:2 * (q - 1)] = exp[:q - 1]
        self._exp = exp
        self._log = log
        self._pow_p = np.arange(m, dtype=np.int64)
        self._pow_p = p ** self._pow_p
        if m > 1 and p != 2 and q <= 1024:
            ds = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
            s = (ds[:, None, :] + ds[None, :, :]) % p
            self._add_table = (s * self._pow_p).sum(axis=2)
            neg = (-ds) % p
            self._neg_table = (neg * self._pow_p).sum(axis=1)
        else:
            self._add_table = None
            self._neg_table = None

    # identity -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.m == other.m and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (fq_make, (self.p, self.m, max(self.q, DEFAULT_MAX_Q)))

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def describe(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    # digit plumbing for vectors ------------------------------------------

    def _split(self, a):
        return [(a // int(pp)) % self.p for pp in self._pow_p]

    def _join(self, parts):
        out = np.zeros_like(parts[0])
        for pp, part in zip(self._pow_p, parts):
            out = out + int(pp) * part
        return out

    # elementwise vector ops (also accept python ints) ----------------------

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._join([(x + y) % self.p for x, y in zip(self._split(a), self._split(b))])

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        if self._neg_table is not None:
            return self._neg_table[a]
        return self._join([(-x) % self.p for x in self._split(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def scale(self, c: int, a):
        """Multiply vector ``a`` by the scalar code ``c``."""
        if self.m == 1:
            return (c * a) % self.p
        if c == 0:
            return np.zeros_like(a)
        r = self._exp[self._log[a] + int(self._log[c])]
        return np.where(a == 0, 0, r)

    def power(self, a, e: int):
        """Elementwise a**e (e may be negative for nonzero entries)."""
        a = np.asarray(a)
        if e == 0:
            return np.ones_like(a)
        k = (self._log[a] * e) % (self.q - 1)
        return np.where(a == 0, 0, self._exp[k])

    def is_zero(self, a):
        return np.asarray(a) == 0

    def conv(self, a, b):
        """Product of two coefficient vectors as polynomials."""
        if len(a) == 0 or len(b) == 0:
            return np.zeros(0, dtype=np.int64)
        p, m = self.p, self.m
        if m == 1:
            return np.convolve(a, b) % p
        A = self._split(a)
        B = self._split(b)
        C = [None] * (2 * m - 1)
        for i in range(m):
            for j in range(m):
                c = np.convolve(A[i], B[j])
                C[i + j] = c if C[i + j] is None else C[i + j] + c
        mod = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            ck = C[k] % p
            for i in range(m):
                if mod[i]:
                    C[k - m + i] = C[k - m + i] - mod[i] * ck
        return self._join([c % p for c in C[:m]])

    def zeros(self, n: int):
        return np.zeros(n, dtype=np.int64)

    def array(self, values):
        return np.asarray([int(v) for v in values], dtype=np.int64)

    # scalar ops -----------------------------------------------------------

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])

    def smul(self, a: int, b: int) -> int:
        return int(self.mul(int(a), int(b)))

    def sadd(self, a: int, b: int) -> int:
        return int(self.add(int(a), int(b)))

    def sneg(self, a: int) -> int:
        return int(self.neg(int(a)))

    def spow(self, a: int, e: int) -> int:
        a = int(a)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if e == 0 else 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def frobenius(self, a, k: int = 1):
        """a -> a^(p^k), elementwise."""
        return self.power(a, self.p ** k) if self.m > 1 else a

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    def elements(self) -> list[int]:
        return list(range(self.q))

    def units(self) -> list[int]:
        return list(range(1, self.q))

    def in_subfield(self, a, sub_q: int):
        """True where a lies in the subfield of order sub_q."""
        return self.power(a, sub_q) == np.asarray(a)

    def element(self, code) -> "FqElement":
        return FqElement(self, int(code))

    # text -----------------------------------------------------------------

    def format(self, a: int) -> str:
        a = int(a)
        if self.m == 1:
            return str(a)
        terms = []
        for i, d in reversed(list(enumerate(self._digits(a)))):
            if d == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(d))
            elif d == 1:
                terms.append(mono)
            else:
                terms.append(f"{d}*{mono}")
        return "+".join(terms) if terms else "0"

    def json_coeff(self, a: int):
        return int(a) if self.m == 1 else self.format(a)

    def from_vector(self, vec) -> int:
        vec = [int(v) % self.p for v in vec]
        if len(vec) > self.m:
            red = _fp_mod(vec, list(self.modulus), self.p)
            vec = red
        return self._undigits(vec + [0] * (self.m - len(vec)))

    def parse(self, text: str) -> int:
        from .parsing import parse_field_element
        return parse_field_element(text, self)


class RationalField:
    """The rationals, with ``Fraction`` coefficients in object arrays."""

    dtype = object
    characteristic_zero = True
    p = 0
    m = 1
    q = None
    modulus = None

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_qq, ())

    def describe(self) -> dict:
        return {"p": 0, "m": 1, "modulus": None}

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, c, a):
        return a * c

    def power(self, a, e):
        if isinstance(a, np.ndarray):
            return np.array([x ** e for x in a], dtype=object)
        return Fraction(a) ** e

    def is_zero(self, a):
        if isinstance(a, np.ndarray):
            return np.array([x == 0 for x in a], dtype=bool)
        return a == 0

    def conv(self, a, b):
        if len(a) == 0 or len(b) == 0:
            return np.zeros(0, dtype=object)
        return np.convolve(a, b)

    def zeros(self, n: int):
        return np.array([Fraction(0)] * n, dtype=object)

    def array(self, values):
        return np.array([Fraction(v) for v in values], dtype=object)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / Fraction(a)

    def smul(self, a, b):
        return Fraction(a) * b

    def sadd(self, a, b):
        return Fraction(a) + b

    def sneg(self, a):
        return -Fraction(a)

    def spow(self, a, e):
        return Fraction(a) ** e

    def from_int(self, n):
        return Fraction(n)

    def format(self, a) -> str:
        return str(Fraction(a))

    def json_coeff(self, a):
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else str(a)

    def parse(self, text: str):
        from .parsing import parse_rational
        return parse_rational(text)


QQ = RationalField()


def _qq():
    return QQ


@lru_cache(maxsize=None)
def _fq_cached(p: int, m: int) -> FiniteField:
    return FiniteField(p, m, smallest_irreducible(p, m))


def fq_make(p: int, m: int = 1, max_q: int = DEFAULT_MAX_Q) -> FiniteField:
    """Return the finite field of order p**m.

    The modulus is the lexicographically smallest monic irreducible
    polynomial of degree m over F_p (coefficients compared from the constant
    term up), so repeated calls give the identical descriptor.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if not isinstance(m, int) or m < 1:
        raise FieldError(f"extension degree must be a positive integer, got {m!r}")
    if p ** m > max_q:
        raise FieldError(f"q = {p}^{m} exceeds the configured bound {max_q}")
    return _fq_cached(p, m)


class FqElement:
    """An element of a finite field, compared and hashed by value."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        code = int(code)
        if not 0 <= code < field.q:
            raise FieldError(f"code {code} out of range for {field}")
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field._digits(self.code))

    def _coerce(self, other) -> int:
        if isinstance(other, FqElement):
            if other.field != self.field:
                raise FieldError(f"descriptor mismatch: {self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FqElement(self.field, self.field.sadd(self.code, b))

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.field, self.field.sneg(self.code))

    def __sub__(self, other):
        return self + (-FqElement(self.field, self._coerce(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        return FqElement(self.field, self.field.smul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return FqElement(self.field, self.field.smul(self.code, self.field.inv(b)))

    def __rtruediv__(self, other):
        return FqElement(self.field, self._coerce(other)) / self

    def __pow__(self, e: int):
        return FqElement(self.field, self.field.spow(self.code, e))

    def inverse(self):
        return FqElement(self.field, self.field.inv(self.code))

    def frobenius(self, k: int = 1):
        return FqElement(self.field, int(self.field.frobenius(self.code, k)))

    def is_zero(self) -> bool:
        return self.code == 0

    def __eq__(self, other):
        if isinstance(other, FqElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"FqElement({self.field!r}, {self.field.format(self.code)})"

    def __str__(self):
        return self.field.format(self.code)


def fq_arith(a: FqElement, b: FqElement | int | None, op: str) -> FqElement:
    """Dispatch ``add|sub|mul|div|pow|frobenius`` (``b`` is the exponent for pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** int(b)
    if op == "frobenius":
        return a.frobenius(1 if b is None else int(b))
    raise ValueError(f"unknown operation {op!r}")


def subfield_embedding(small: FiniteField, big: FiniteField) -> np.ndarray:
    """Codes in ``big`` of the elements of ``small`` (indexed by small's codes).

    The generator of ``small`` is sent to the smallest root of its modulus
    lying in ``big``.
    """
    if small.p != big.p or big.m % small.m:
        raise FieldError(f"{small} does not embed in {big}")
    if small.m == 1:
        return np.arange(small.q, dtype=np.int64)
    mod = small.modulus
    for r in range(big.q):
        acc = 0
        for c in reversed(mod):
            acc = big.sadd(big.smul(acc, r), big.from_int(c))
        if acc == 0:
            root = r
            break
    else:  # pragma: no cover - impossible for a genuine extension
        raise FieldError("modulus has no root in the extension")
    powers = [1]
    for _ in range(small.m - 1):
        powers.append(big.smul(powers[-1], root))
    table = np.zeros(small.q, dtype=np.int64)
    for code in range(small.q):
        acc = 0
        for d, pw in zip(small._digits(code), powers):
            acc = big.sadd(acc, big.smul(big.from_int(d), pw))
        table[code] = acc
    return table
