"""Small recursive-descent parser for the textual forms used on the command line.

Accepted syntax: integers, names, ``+ - * / ^`` (``**`` also accepted),
parentheses.  Names are resolved through a mapping supplied by the caller, so
the same parser reads field elements (``x^2+1``), rational functions
(``(s^2+x*s)/(s+1)``) and series (``t^-1 * (1 + 2*t) + O(t^5)``).
"""
from __future__ import annotations

import re
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, names, const):
        self.toks = tokens
        self.i = 0
        self.names = names
        self.const = const

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.unary()
                val = val * rhs if tok[1] == "*" else val / rhs
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                val = val * self.unary()  # implicit multiplication, e.g. "2x"
            else:
                return val

    def unary(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.unary()
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def exponent(self) -> int:
        sign = 1
        while self.peek() in (("op", "-"), ("op", "+")):
            if self.take()[1] == "-":
                sign = -sign
        tok = self.peek()
        if tok == ("op", "("):
            self.take()
            e = self.exponent()
            self.take(")")
            return sign * e
        if tok[0] != "num":
            raise ParseError(f"exponent must be an integer, got {tok[1]!r}")
        self.take()
        return sign * int(tok[1])

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** self.exponent()
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return self.const(int(val))
        if kind == "name":
            self.take()
            if val not in self.names:
                raise ParseError(f"unknown name {val!r}")
            return self.names[val]
        if val == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_expression(text: str, names: dict, const):
    p = _Parser(tokenize(text), names, const)
    val = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input after position {p.i}: {p.toks[p.i][1]!r}")
    return val


def parse_field_element(text: str, field) -> int:
    from .fields import FqElement
    gen = FqElement(field, field.from_vector([0, 1]) if field.m > 1 else 0)
    names = {"x": gen} if field.m > 1 else {}
    val = parse_expression(text, names, lambda n: FqElement(field, field.from_int(n)))
    return val.code


def parse_rational(text: str) -> Fraction:
    return Fraction(parse_expression(text, {}, Fraction))
