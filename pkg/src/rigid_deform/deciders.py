"""Exact decision procedures: isomorphism of ASM curves and conjugacy of the groups Gamma(t).

Two curves (x^q - x)(y^q - y) = lambda_i are isomorphic iff lambda_1 / lambda_2
is a constant in F_q^*; the witness zeta gives the isomorphism x -> zeta x,
y -> y.  The groups Gamma(t_1), Gamma(t_2) are conjugate iff t_1 / t_2 is a
constant zeta in F_q^*, and then the generator sets coincide through
delta(u, v)(zeta t) = delta(u, v / zeta)(t).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .fields import FiniteField
from .moebius import make_generator
from .poly import RationalFunction
from .series import LaurentSeries


@dataclass
class Decision:
    verdict: bool
    witness: int | None = None  # element code of zeta when the verdict is true
    diagnostics: dict = dc_field(default_factory=dict)

    def to_json(self, field: FiniteField | None = None) -> dict:
        w = self.witness
        if w is not None and field is not None:
            w = field.format(w)
        return {"verdict": self.verdict, "witness": w, "diagnostics": self.diagnostics}


def _ratio_constant(num, den):
    """(is a constant in F_q^*, code or None, ratio text) for exact rational functions."""
    ratio = num / den
    if ratio.is_constant():
        return True, int(ratio.constant_value()), str(ratio)
    return False, None, str(ratio)


def _series_ratio(l1: LaurentSeries, l2: LaurentSeries):
    ratio = l1 / l2
    if ratio.val == 0 and all(k == 0 for k, _ in ratio.terms()):
        return True, int(ratio.coefficient(0)), ratio.to_text()
    return False, None, ratio.to_text()


def curves_isomorphic(lam1, lam2) -> Decision:
    """Decide X_lam1 ~ X_lam2; series inputs are decided only up to their common precision."""
    if lam1.is_zero() or lam2.is_zero():
        raise ValueError("lambda must be nonzero")
    if isinstance(lam1, LaurentSeries) or isinstance(lam2, LaurentSeries):
        if not (isinstance(lam1, LaurentSeries) and isinstance(lam2, LaurentSeries)):
            raise TypeError("compare two series or two rational functions, not a mix")
        ok, zeta, text = _series_ratio(lam1, lam2)
        diag = {"ratio": text, "exact": False}
    else:
        ok, zeta, text = _ratio_constant(lam1, lam2)
        diag = {"ratio": text, "exact": True}
    if ok:
        z = lam1.ring.format(zeta)
        # the witness may itself be written in the field generator x
        z = z if z.lstrip("-").isdigit() else f"({z})"
        diag["isomorphism"] = f"x -> {z}*x, y -> y"
    else:
        diag["reason"] = f"ratio {text} not in F_q*"
    return Decision(ok, zeta, diag)


def commutator_invariant(t: RationalFunction) -> RationalFunction:
    """trace^2 / det of eps_1 eps'_1 = [[1 + t, t], [1, t]] at the parameter t, i.e. (2 + 1/t)^2."""
    one = RationalFunction.constant(t.ring, 1, t.var)
    trace = one + t + t
    det = t * t
    return trace * trace / det


@lru_cache(maxsize=None)
def generator_witness(field: FiniteField, zeta: int, var: str = "t") -> bool:
    """Check delta(u, v)(zeta t) = delta(u, v / zeta)(t) for every generator (memoized per field and zeta)."""
    zinv = field.inv(zeta)
    for u in field.units():
        for v in field.units():
            lhs = make_generator("delta", field, (u, v), var).scale_variable(zeta)
            rhs = make_generator("delta", field, (u, field.smul(v, zinv)), var)
            if lhs != rhs:
                return False
    return True


def groups_conjugate(t1: RationalFunction, t2: RationalFunction) -> Decision:
    """Decide conjugacy of Gamma(t1) and Gamma(t2) in PGL(2); inputs need positive valuation."""
    for name, t in (("t1", t1), ("t2", t2)):
        if t.is_zero() or t.valuation() <= 0:
            raise ValueError(f"{name} = {t} must have positive valuation")
    ok, zeta, text = _ratio_constant(t1, t2)
    diag = {"ratio": text,
            "invariant_t1": str(commutator_invariant(t1)),
            "invariant_t2": str(commutator_invariant(t2))}
    if ok:
        diag["generator_witness"] = generator_witness(t1.ring, zeta)
        ok = diag["generator_witness"]
    else:
        diag["reason"] = f"ratio {text} not in F_q*"
    return Decision(ok, zeta if ok else None, diag)


__all__ = ["Decision", "curves_isomorphic", "groups_conjugate", "commutator_invariant", "generator_witness"]
