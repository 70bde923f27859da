"""Projective 2x2 matrices over F_q[t] (or Q[s]), their Moebius action, and words in them.

Matrices are kept in a canonical form (polynomial content removed, first
nonzero entry of a, b, c, d monic) so equality in PGL(2) is a structural
comparison.  Groups are either free on a list of generators or free products
of finite groups; reduced words of a given length are enumerated
lexicographically in the alphabet order with one matrix product per word.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .fields import QQ, FqElement
from .poly import Polynomial, RationalFunction, as_element


class GroupSpecError(ValueError):
    pass


def _as_poly(ring, e, var):
    if isinstance(e, Polynomial):
        return e
    return Polynomial.constant(ring, e, var)


def _content(entries):
    """Monic gcd of the entries; a monomial determinant forces a power of the variable."""
    a, b, c, d = entries
    det = a * d - b * c
    if det.is_zero():
        raise ValueError("singular matrix")
    nz = [e for e in entries if not e.is_zero()]
    if _is_monomial(det):
        k = min(e.valuation() for e in nz)
        return Polynomial.monomial(a.ring, k, 1, a.var) if k else None
    g = nz[0].monic()
    for e in nz[1:]:
        if g.degree == 0:
            break
        g = g.gcd(e)
    return g if g.degree > 0 else None


def _is_monomial(p: Polynomial) -> bool:
    return int((~p.ring.is_zero(p.coeffs)).sum()) == 1


class ProjMatrix:
    """Element of PGL(2) with polynomial entries, stored canonically."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, canonical: bool = True):
        if canonical:
            entries = [a, b, c, d]
            g = _content(entries)
            if g is not None:
                entries = [e.exact_div(g) if not e.is_zero() else e for e in entries]
            first = next(e for e in entries if not e.is_zero())
            if not first.lead == first.ring.one:
                inv = first.ring.inv(first.lead)
                entries = [e.scale(inv) for e in entries]
            a, b, c, d = entries
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_entries(cls, ring, entries, var: str = "t"):
        a, b, c, d = (_as_poly(ring, e, var) for e in entries)
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, ring, var: str = "t"):
        return cls.from_entries(ring, [1, 0, 0, 1], var)

    @property
    def ring(self):
        return self.a.ring

    @property
    def var(self):
        return self.a.var

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self) -> Polynomial:
        return self.a * self.d - self.b * self.c

    def trace(self) -> Polynomial:
        return self.a + self.d

    def __mul__(self, other: "ProjMatrix") -> "ProjMatrix":
        return proj_mul(self, other)

    def inverse(self) -> "ProjMatrix":
        return proj_inv(self)

    def is_identity(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d

    def scale_variable(self, zeta) -> "ProjMatrix":
        """Substitute t -> zeta t in every entry."""
        return ProjMatrix(*(e.scale_variable(zeta) for e in self.entries))

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_strings(self) -> list[str]:
        return [str(e) for e in self.entries]

    def __repr__(self):
        a, b, c, d = self.to_strings()
        return f"[[{a}, {b}], [{c}, {d}]]"


def proj_mul(m: ProjMatrix, n: ProjMatrix) -> ProjMatrix:
    if m.ring != n.ring or m.var != n.var:
        raise ValueError("matrices over different rings")
    return ProjMatrix(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                      m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d)


def proj_inv(m: ProjMatrix) -> ProjMatrix:
    return ProjMatrix(m.d, -m.b, -m.c, m.a)


def trace_invariant(m: ProjMatrix) -> RationalFunction:
    """trace^2 / det, a conjugacy invariant independent of the scalar representative."""
    tr = m.trace()
    return RationalFunction(tr * tr, m.det())


# -- points of the projective line -------------------------------------------

class P1Point:
    """A point of P^1 over the rational function field: finite value or infinity."""

    __slots__ = ("value",)

    def __init__(self, value: RationalFunction | None):
        self.value = value

    @classmethod
    def infinity(cls):
        return cls(None)

    @classmethod
    def finite(cls, value, ring=None, var="t"):
        if isinstance(value, RationalFunction):
            return cls(value)
        if isinstance(value, Polynomial):
            return cls(RationalFunction(value))
        return cls(RationalFunction.constant(ring, value, var))

    def is_infinity(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if not isinstance(other, P1Point):
            return NotImplemented
        if self.value is None or other.value is None:
            return self.value is None and other.value is None
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "Infinity" if self.value is None else f"Finite({self.value})"


def apply_moebius(m: ProjMatrix, z: P1Point) -> P1Point:
    """(a z + b) / (c z + d) with the usual conventions at infinity."""
    if z.is_infinity():
        if m.c.is_zero():
            return P1Point.infinity()
        return P1Point(RationalFunction(m.a, m.c))
    n, d = z.value.num, z.value.den
    num = m.a * n + m.b * d
    den = m.c * n + m.d * d
    if den.is_zero():
        return P1Point.infinity()
    return P1Point(RationalFunction(num, den))


# -- named generators ----------------------------------------------------------

def make_generator(kind: str, field, param=None, var: str = "t") -> ProjMatrix:
    """eps u, eps_prime u, tau, mu a, delta (u, v) as canonical matrices."""
    t = Polynomial.gen(field, var)

    def sc(x):
        return Polynomial(field, [as_element(field, x)], var)

    if kind == "eps":
        return ProjMatrix.from_entries(field, [1, sc(param), 0, 1], var)
    if kind == "eps_prime":
        return ProjMatrix.from_entries(field, [t, 0, sc(param), t], var)
    if kind == "tau":
        return ProjMatrix.from_entries(field, [0, t, 1, 0], var)
    if kind == "mu":
        a = sc(param)
        if a.is_zero():
            raise ValueError("mu needs a nonzero scalar")
        return ProjMatrix.from_entries(field, [a, 0, 0, 1], var)
    if kind == "delta":
        u, v = (as_element(field, x) for x in param)
        if field.is_zero(u) or field.is_zero(v):
            raise ValueError("delta(u, v) is a free generator only for u, v nonzero")
        return (make_generator("eps", field, u, var) * make_generator("eps_prime", field, v, var)
                * make_generator("eps", field, field.sneg(u), var)
                * make_generator("eps_prime", field, field.sneg(v), var))
    raise ValueError(f"unknown generator kind {kind!r}")


# -- groups and words -----------------------------------------------------------

@dataclass(frozen=True)
class ReducedWord:
    """Letters are (generator, +1/-1) for free groups, (factor, element) for free products."""

    letters: tuple = ()

    def __len__(self):
        return len(self.letters)


class GroupSpec:
    """A free group on matrices, or a free product of finite matrix groups."""

    def __init__(self, kind: str, ring, var: str, names: list, matrices: list,
                 factor_sizes: list | None = None):
        self.kind = kind
        self.ring = ring
        self.var = var
        self.names = names
        self.matrices = matrices
        self.factor_sizes = factor_sizes
        if kind == "free":
            self.alphabet = [(i, 1) for i in range(len(matrices))] + [(i, -1) for i in range(len(matrices))]
            self._letter_mats = {(i, 1): m for i, m in enumerate(matrices)}
            self._letter_mats.update({(i, -1): proj_inv(m) for i, m in enumerate(matrices)})
        elif kind == "free_product":
            self.alphabet = [(f, e) for f, size in enumerate(factor_sizes) for e in range(size)]
            self._letter_mats = {}
            k = 0
            for f, size in enumerate(factor_sizes):
                for e in range(size):
                    self._letter_mats[(f, e)] = matrices[k]
                    k += 1
        else:
            raise GroupSpecError(f"unknown group kind {kind!r}")

    @classmethod
    def free(cls, names, matrices):
        if not matrices:
            raise GroupSpecError("a free group needs at least one generator")
        for nm, m in zip(names, matrices):
            if m.det().is_zero():
                raise GroupSpecError(f"generator {nm} is singular")
        return cls("free", matrices[0].ring, matrices[0].var, list(names), list(matrices))

    @classmethod
    def free_product(cls, factors):
        """``factors``: list of finite groups, each a list of (name, matrix) for its nonidentity elements."""
        names, mats, sizes = [], [], []
        for group in factors:
            elems = [m for _, m in group]
            ident = ProjMatrix.identity(elems[0].ring, elems[0].var)
            allowed = set(elems) | {ident}
            for x in elems:
                for y in elems:
                    if x * y not in allowed:
                        raise GroupSpecError("finite factor is not closed under multiplication")
            names += [n for n, _ in group]
            mats += elems
            sizes.append(len(elems))
        return cls("free_product", mats[0].ring, mats[0].var, names, mats, sizes)

    @property
    def rank(self):
        return len(self.matrices) if self.kind == "free" else None

    def letter_matrix(self, letter) -> ProjMatrix:
        return self._letter_mats[letter]

    def can_follow(self, prev, letter) -> bool:
        if prev is None:
            return True
        if self.kind == "free":
            return not (prev[0] == letter[0] and prev[1] == -letter[1])
        return prev[0] != letter[0]

    def letter_str(self, letter) -> str:
        if self.kind == "free":
            i, s = letter
            return self.names[i] + ("^-1" if s < 0 else "")
        f, e = letter
        return self.names[sum(self.factor_sizes[:f]) + e]

    def word_str(self, word: ReducedWord) -> str:
        return " ".join(self.letter_str(x) for x in word.letters) or "1"

    def parse_word(self, text: str) -> ReducedWord:
        letters = []
        lookup = {self.letter_str(x): x for x in self.alphabet}
        for tok in text.split():
            if tok == "1":
                continue
            if tok not in lookup:
                raise GroupSpecError(f"unknown letter {tok!r}")
            letters.append(lookup[tok])
        word = ReducedWord(tuple(letters))
        self.validate(word)
        return word

    def validate(self, word: ReducedWord):
        prev = None
        for x in word.letters:
            if x not in self._letter_mats:
                raise GroupSpecError(f"letter {x} not in the alphabet")
            if not self.can_follow(prev, x):
                raise GroupSpecError(f"word is not reduced at letter {self.letter_str(x)}")
            prev = x

    def count_words(self, n: int) -> int:
        if n == 0:
            return 1
        if self.kind == "free":
            r = len(self.matrices)
            return 2 * r * (2 * r - 1) ** (n - 1)
        # alternating sequences of factors, each position choosing a nonidentity element
        sizes = self.factor_sizes
        ends = list(sizes)
        for _ in range(n - 1):
            total = sum(ends)
            ends = [s * (total - e) for s, e in zip(sizes, ends)]
        return sum(ends)

    def multiply_words(self, w1: ReducedWord, w2: ReducedWord) -> ReducedWord:
        """Reduced form of the concatenation."""
        out = list(w1.letters)
        for x in w2.letters:
            if not out:
                out.append(x)
                continue
            y = out[-1]
            if self.kind == "free":
                if y[0] == x[0] and y[1] == -x[1]:
                    out.pop()
                else:
                    out.append(x)
            elif y[0] != x[0]:
                out.append(x)
            else:
                prod = self.letter_matrix(y) * self.letter_matrix(x)
                out.pop()
                if not prod.is_identity():
                    f = x[0]
                    idx = next(e for e in range(self.factor_sizes[f]) if self.letter_matrix((f, e)) == prod)
                    if out and out[-1][0] == f:
                        raise GroupSpecError("unexpected adjacent letters from one factor")
                    out.append((f, idx))
        return ReducedWord(tuple(out))

    def inverse_word(self, w: ReducedWord) -> ReducedWord:
        if self.kind == "free":
            return ReducedWord(tuple((i, -s) for i, s in reversed(w.letters)))
        out = []
        for f, e in reversed(w.letters):
            inv = proj_inv(self.letter_matrix((f, e)))
            idx = next(k for k in range(self.factor_sizes[f]) if self.letter_matrix((f, k)) == inv)
            out.append((f, idx))
        return ReducedWord(tuple(out))


def enumerate_words(spec: GroupSpec, n: int, first_letters=None) -> Iterator[ReducedWord]:
    """Reduced words of length exactly n, lexicographic in the alphabet order."""
    for w, _ in enumerate_word_matrices(spec, n, first_letters, with_matrices=False):
        yield w


def enumerate_word_matrices(spec: GroupSpec, n: int, first_letters=None, with_matrices: bool = True):
    """Depth-first enumeration yielding (word, matrix) with shared prefix products."""
    if n < 0:
        raise ValueError("word length must be nonnegative")
    if n == 0:
        yield ReducedWord(), (ProjMatrix.identity(spec.ring, spec.var) if with_matrices else None)
        return
    alphabet = spec.alphabet
    starts = alphabet if first_letters is None else [x for x in alphabet if x in set(first_letters)]
    # stack of (letters, matrix) prefixes; iterate children in reverse to pop in order
    stack = []
    for x in reversed(starts):
        stack.append(((x,), spec.letter_matrix(x) if with_matrices else None))
    while stack:
        letters, mat = stack.pop()
        if len(letters) == n:
            yield ReducedWord(letters), mat
            continue
        last = letters[-1]
        for x in reversed(alphabet):
            if spec.can_follow(last, x):
                m2 = mat * spec.letter_matrix(x) if with_matrices else None
                stack.append((letters + (x,), m2))


def word_to_matrix(word: ReducedWord, spec: GroupSpec, cache: dict | None = None) -> ProjMatrix:
    """Product of the letter matrices; ``cache`` maps letter-tuple prefixes to matrices."""
    letters = word.letters
    if not letters:
        return ProjMatrix.identity(spec.ring, spec.var)
    if cache is None:
        mat = spec.letter_matrix(letters[0])
        for x in letters[1:]:
            mat = mat * spec.letter_matrix(x)
        return mat
    k = len(letters)
    while k > 0 and letters[:k] not in cache:
        k -= 1
    mat = cache[letters[:k]] if k else None
    for i in range(k, len(letters)):
        x = letters[i]
        mat = spec.letter_matrix(x) if mat is None else mat * spec.letter_matrix(x)
        cache[letters[: i + 1]] = mat
    return mat


def lower_left_check(word: ReducedWord, spec: GroupSpec):
    """Constant term of the lower-left entry of the canonical matrix, and whether it is nonzero."""
    if not word.letters:
        raise ValueError("the identity is excluded from the lower-left check")
    c = word_to_matrix(word, spec).c.coefficient(0)
    return c, not bool(spec.ring.is_zero(c))


def gamma_spec(field, var: str = "t") -> GroupSpec:
    """Free generators delta(u, v), u, v in F_q^*, ordered by (u, v) in element order."""
    names, mats = [], []
    for u in field.units():
        for v in field.units():
            names.append(f"d[{field.format(u)},{field.format(v)}]")
            mats.append(make_generator("delta", field, (u, v), var))
    return GroupSpec.free(names, mats)


def delta_params(spec: GroupSpec, field):
    """(u, v) codes for each generator of a gamma_spec, in generator order."""
    return [(u, v) for u in field.units() for v in field.units()]


def tate_dihedral_spec(var: str = "s") -> GroupSpec:
    """Z/2 * Z/2 generated by z -> 1/z and z -> s^2/z (entries over Q[s])."""
    s = Polynomial.gen(QQ, var)
    alpha = ProjMatrix.from_entries(QQ, [0, 1, 1, 0], var)
    beta = ProjMatrix.from_entries(QQ, [0, 1, s * s, 0], var)
    return GroupSpec.free_product([[("a", alpha)], [("b", beta)]])


def scale_variable_matrix(m: ProjMatrix, zeta) -> ProjMatrix:
    if isinstance(zeta, FqElement):
        zeta = zeta.code
    return m.scale_variable(zeta)
