"""Cross ratios and the four-point localisation product for lambda.

Convention: cr(z1, z2; z3, z4) = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3)), so
cr(lam, 1; 0, inf) = lam.  For a group N with fixed points e_0, e_1, e_inf,
e_lam the localisation product is

    lambda = prod_{g in N} cr(e_lam, e_1; g(e_0), g(e_inf)),

evaluated here over cumulative word-length balls as Laurent series.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .fields import QQ
from .moebius import GroupSpec, P1Point, apply_moebius, enumerate_word_matrices, tate_dihedral_spec
from .poly import Polynomial, RationalFunction
from .series import LaurentSeries, laurent_from_rational

log = logging.getLogger(__name__)


class DegenerateError(ValueError):
    """Two of the four points coincide."""


def cross_ratio(z1: P1Point, z2: P1Point, z3: P1Point, z4: P1Point) -> RationalFunction:
    pts = [z1, z2, z3, z4]
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i] == pts[j]:
                raise DegenerateError(f"points {i + 1} and {j + 1} coincide")
    # differences involving infinity cancel in pairs between numerator and denominator
    num = [(z1, z3), (z2, z4)]
    den = [(z1, z4), (z2, z3)]

    def prod(pairs):
        acc = None
        for a, b in pairs:
            if a.is_infinity() or b.is_infinity():
                continue
            d = a.value - b.value
            acc = d if acc is None else acc * d
        return acc

    n, d = prod(num), prod(den)
    if n is None and d is None:
        raise DegenerateError("too many points at infinity")
    if n is None:
        return 1 / d
    if d is None:
        return n
    return n / d


@dataclass
class FixedPointData:
    e0: P1Point
    e1: P1Point
    einf: P1Point
    elam: P1Point

    def __post_init__(self):
        pts = [self.e0, self.e1, self.einf, self.elam]
        if len(set(pts)) != 4:
            raise DegenerateError("the four fixed points must be pairwise distinct")


def tate_fixed_points(var: str = "s") -> FixedPointData:
    """Fixed points 1, -1 of z -> 1/z and 1/s, -1/s of z -> 1/(s^2 z)."""
    s = RationalFunction.gen(QQ, var)
    one = RationalFunction.constant(QQ, 1, var)
    return FixedPointData(P1Point(one), P1Point(1 / s), P1Point(-one), P1Point(-1 / s))


@dataclass
class PartialProducts:
    lengths: list
    products: list
    factor_counts: list
    skipped: list = dc_field(default_factory=list)  # (length, word) pairs with a degenerate factor


def prop_four_product(spec: GroupSpec, pts: FixedPointData, max_len: int, prec: int) -> PartialProducts:
    """Partial products over the balls of word length 0..max_len, to O(var^prec)."""
    acc = LaurentSeries.one(spec.ring, prec, spec.var)
    out = PartialProducts([], [], [])
    for n in range(max_len + 1):
        count = 0
        for word, mat in enumerate_word_matrices(spec, n):
            g0 = apply_moebius(mat, pts.e0)
            ginf = apply_moebius(mat, pts.einf)
            try:
                cr = cross_ratio(pts.elam, pts.e1, g0, ginf)
            except DegenerateError:
                log.warning("degenerate factor at word %s skipped", spec.word_str(word))
                out.skipped.append((n, spec.word_str(word)))
                continue
            acc = acc * laurent_from_rational(cr, prec)
            count += 1
        out.lengths.append(n)
        out.products.append(acc.truncate(prec))
        out.factor_counts.append(count)
    return out


@dataclass
class DihedralReport:
    prec: int
    max_len: int
    agreement: list  # per L: exponent of the first disagreement, or prec if none
    skipped: list

    @property
    def nondecreasing(self) -> bool:
        return all(a <= b for a, b in zip(self.agreement, self.agreement[1:]))

    def first_length_reaching(self, target: int) -> int | None:
        return next((L for L, a in enumerate(self.agreement) if a >= target), None)

    def to_json(self) -> dict:
        return {"prec": self.prec, "max_len": self.max_len,
                "agreement": [{"L": L, "agrees_to": a} for L, a in enumerate(self.agreement)],
                "nondecreasing": self.nondecreasing, "skipped_factors": len(self.skipped)}


def dihedral_tate_check(prec: int, max_len: int) -> DihedralReport:
    from .tate import tate_lambda
    spec = tate_dihedral_spec("s")
    parts = prop_four_product(spec, tate_fixed_points("s"), max_len, prec)
    target = tate_lambda(prec)
    agreement = []
    for prod in parts.products:
        diff = prod.first_difference(target)
        agreement.append(int(prec if diff is None else diff))
    return DihedralReport(prec, max_len, agreement, parts.skipped)


__all__ = ["cross_ratio", "DegenerateError", "FixedPointData", "tate_fixed_points", "prop_four_product",
           "PartialProducts", "dihedral_tate_check", "DihedralReport"]
