"""Command-line interface.

Exit codes: 0 success, 1 usage or validation error, 2 result not certified
(partial results are still written), 3 a requested check or acceptance
criterion failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass

from .fields import FieldError

EXIT_OK, EXIT_USAGE, EXIT_UNCERTIFIED, EXIT_FAILED = 0, 1, 2, 3

log = logging.getLogger("rigid_deform")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    p: int = 2
    m: int = 1
    prec: int = 20
    max_len: int = 6
    window: int = 2
    guard: int | None = None
    format: str = "text"
    cache_dir: str | None = None
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.prec < 1:
            raise UsageError("--prec must be positive")
        if self.max_len < 0:
            raise UsageError("--max-len must be nonnegative")
        if self.window < 1:
            raise UsageError("--window must be at least 1")
        if self.guard is not None and self.guard < 0:
            raise UsageError("--guard must be nonnegative")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.format not in ("json", "csv", "text"):
            raise UsageError("--format must be json, csv or text")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        return cls(**data)


# -- argument parsing ----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, field=True, prec=20, max_len=6):
    if field:
        p.add_argument("--p", type=int, default=2, help="characteristic")
        p.add_argument("--m", type=int, default=1, help="extension degree, q = p^m")
    p.add_argument("--prec", type=int, default=prec, help="target precision P")
    p.add_argument("--max-len", type=int, default=max_len, help="maximal word length L")
    p.add_argument("--window", type=int, default=2, help="certificate window w")
    p.add_argument("--guard", type=int, default=None, help="guard digits (default 2 Q^2)")
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--cache-dir", default=None, help="directory for per-length series (or $RIGID_DEFORM_CACHE_DIR)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for word enumeration")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rigid-deform", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    asm = top.add_parser("asm", help="Artin-Schreier-Mumford deformation map")
    asub = asm.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(asub.add_parser("lambda", help="lambda(t) with its convergence certificate"))
    p = asub.add_parser("theta-oracle", help="lambda from the theta products for x and y")
    _common(p)
    p.add_argument("--point", default=None, help="evaluation point in F_{q^2}, a polynomial in x")
    p.add_argument("--mode", choices=["simplified", "direct"], default="simplified")
    _common(asub.add_parser("capital-lambda", help="Lambda(T) = lambda(T^(1/Q))^Q"))
    p = asub.add_parser("decide-iso", help="isomorphism of two ASM curves")
    _common(p)
    p.add_argument("--l1", required=True, help="lambda_1, a rational function in t")
    p.add_argument("--l2", required=True, help="lambda_2, a rational function in t")
    p = asub.add_parser("decide-conj", help="conjugacy of Gamma(t1) and Gamma(t2)")
    _common(p)
    p.add_argument("--t1", required=True, help="t_1, a rational function in s")
    p.add_argument("--t2", required=True, help="t_2, a rational function in s")
    p = asub.add_parser("p123", help="the p1 p2 p3 split at one word length")
    _common(p, prec=12)
    p.add_argument("--n", type=int, default=1, help="word length")

    tate = top.add_parser("tate", help="the Tate-curve example")
    tsub = tate.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, hlp in (("lambda", "the lambda product in s = 1/t"), ("j-check", "j(lambda) against E4^3/Delta"),
                      ("inversion", "lambda(s) lambda(-s) = 1")):
        _common(tsub.add_parser(name, help=hlp), field=False, prec=40)

    cr = top.add_parser("crossratio", help="four-point cross-ratio localisation")
    csub = cr.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = csub.add_parser("prop4", help="partial products against the Tate lambda")
    _common(p, field=False, prec=12, max_len=20)
    p.add_argument("--instance", choices=["tate"], default="tate")

    ver = top.add_parser("verify", help="acceptance suite")
    vsub = ver.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = vsub.add_parser("all", help="run every acceptance criterion")
    _common(p, field=False)
    p.add_argument("--reduced", action="store_true", help="smaller scales for a quick run")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.add_argument("--archive-dir", default=None, help="where to archive reconciliation reports")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the output")
    return parser


# -- output ----------------------------------------------------------------------------

def _series_rows(series):
    return [(k, series.ring.format(c)) for k, c in series.terms()]


def emit(payload: dict, fmt: str, out, series=None, text: str | None = None):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        if series is not None:
            w.writerow(["exponent", "coefficient"])
            w.writerows(_series_rows(series))
            w.writerow(["precision", "" if series.prec == float("inf") else int(series.prec)])
        else:
            w.writerow(["key", "value"])
            for k in sorted(payload):
                v = payload[k]
                w.writerow([k, json.dumps(v, sort_keys=True, default=str) if isinstance(v, (dict, list)) else v])
    else:
        out.write((text if text is not None else json.dumps(payload, indent=2, sort_keys=True, default=str)) + "\n")


def _config(args) -> RunConfig:
    return RunConfig(command=f"{args.group} {args.command}", p=getattr(args, "p", 0), m=getattr(args, "m", 1),
                     prec=args.prec, max_len=args.max_len, window=args.window, guard=args.guard,
                     format=args.format, cache_dir=args.cache_dir, threads=args.threads, seed=args.seed)


def _cache(cfg: RunConfig):
    from .cache import SeriesCache, default_cache_dir
    d = cfg.cache_dir or default_cache_dir()
    return SeriesCache(d) if d else None


def _params(cfg: RunConfig):
    from .asm import AsmParams
    try:
        return AsmParams(cfg.p, cfg.m, cfg.prec, cfg.max_len, cfg.window, cfg.guard)
    except (ValueError, FieldError) as exc:
        raise UsageError(str(exc)) from exc


def _field(cfg: RunConfig):
    from .fields import fq_make
    try:
        return fq_make(cfg.p, cfg.m)
    except (ValueError, FieldError) as exc:
        raise UsageError(str(exc)) from exc


def _rational(text, F, var):
    from .parsing import ParseError
    from .poly import parse_rational_function
    try:
        return parse_rational_function(text, F, var)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc


# -- commands ---------------------------------------------------------------------------

def cmd_asm_lambda(args, cfg, out):
    from .asm import asm_lambda
    cache = _cache(cfg)
    res = asm_lambda(_params(cfg), cache, cfg.threads)
    payload = {"config": cfg.to_json(), "result": res.to_json()}
    if cache is not None:
        payload["cache"] = cache.stats()
    text = "\n".join([f"lambda = {res.series.to_text()}",
                      f"verdict: {res.certificate.verdict}",
                      "e_n: " + " ".join(f"{n}:{e}" for n, e in res.certificate.entries),
                      f"valuation: {res.valuation_report['valuation']} (expected 1)"])
    emit(payload, cfg.format, out, res.series, text)
    return EXIT_OK if res.certified else EXIT_UNCERTIFIED


def cmd_asm_theta_oracle(args, cfg, out):
    from .theta import DescentError, ThetaEvalContext, theta_oracle_lambda
    params = _params(cfg)
    point = None
    if args.point is not None:
        from .fields import fq_make
        big = fq_make(cfg.p, 2 * cfg.m)
        try:
            point = big.parse(args.point)
        except ValueError as exc:
            raise UsageError(f"cannot parse point {args.point!r}: {exc}") from exc
    try:
        res = theta_oracle_lambda(ThetaEvalContext(params, point), mode=args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except DescentError as exc:
        print(json.dumps({"error": "descent", "message": str(exc)}), file=sys.stderr)
        return EXIT_FAILED
    certified = all(c.certified for c in res.certificates.values())
    payload = {"config": cfg.to_json(), "result": res.to_json()}
    emit(payload, cfg.format, out, res.series, f"lambda = {res.series.to_text()}\npoint: {res.point}\n"
         f"verdict: {'certified' if certified else 'not-certified'}")
    return EXIT_OK if certified else EXIT_UNCERTIFIED


def cmd_asm_capital_lambda(args, cfg, out):
    from .asm import ValuationError, asm_lambda, capital_lambda
    from .series import SupportError
    res = asm_lambda(_params(cfg), _cache(cfg), cfg.threads)
    try:
        cap = capital_lambda(res)
    except (ValuationError, SupportError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "lambda": res.series.to_text()}), file=sys.stderr)
        return EXIT_FAILED
    emit({"config": cfg.to_json(), "capital_lambda": cap.to_json()}, cfg.format, out, cap,
         f"Lambda = {cap.to_text()}")
    return EXIT_OK if res.certified else EXIT_UNCERTIFIED


def cmd_asm_decide_iso(args, cfg, out):
    from .deciders import curves_isomorphic
    F = _field(cfg)
    l1, l2 = _rational(args.l1, F, "t"), _rational(args.l2, F, "t")
    try:
        d = curves_isomorphic(l1, l2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {"lambda1": str(l1), "lambda2": str(l2), "decision": d.to_json(F)}
    emit(payload, cfg.format, out, text=_decision_text(d, F))
    return EXIT_OK


def cmd_asm_decide_conj(args, cfg, out):
    from .deciders import groups_conjugate
    F = _field(cfg)
    t1, t2 = _rational(args.t1, F, "s"), _rational(args.t2, F, "s")
    try:
        d = groups_conjugate(t1, t2)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {"t1": str(t1), "t2": str(t2), "decision": d.to_json(F)}
    emit(payload, cfg.format, out, text=_decision_text(d, F))
    return EXIT_OK


def _decision_text(d, F):
    lines = [f"verdict: {str(d.verdict).lower()}"]
    if d.witness is not None:
        lines.append(f"witness zeta = {F.format(d.witness)}")
    lines += [f"{k}: {v}" for k, v in d.diagnostics.items()]
    return "\n".join(lines)


def cmd_asm_p123(args, cfg, out):
    from .asm import p123_factors
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    rep = p123_factors(args.n, _params(cfg))
    payload = rep.to_json()
    text = "\n".join([f"p1 = {rep.p1.to_text()}", f"p2 = {rep.p2.to_text()}", f"p3 = {rep.p3.to_text()}",
                      f"g_n = {rep.g.to_text()}", f"p1 p2 p3 matches g_n: {rep.matches}",
                      f"first differing exponent: {rep.first_difference}",
                      f"zeta invariance: {rep.invariance}"])
    emit(payload, cfg.format, out, text=text)
    return EXIT_OK


def cmd_tate_lambda(args, cfg, out):
    from .tate import tate_lambda
    lam = tate_lambda(cfg.prec)
    emit({"config": cfg.to_json(), "series": lam.to_json()}, cfg.format, out, lam, f"lambda = {lam.to_text()}")
    return EXIT_OK


def cmd_tate_j_check(args, cfg, out):
    from .tate import j_check
    rep = j_check(cfg.prec)
    emit(rep.to_json(), cfg.format, out, text=rep.message)
    return EXIT_OK if rep.match else EXIT_FAILED


def cmd_tate_inversion(args, cfg, out):
    from .tate import tate_inversion_check
    ok = tate_inversion_check(cfg.prec)
    emit({"prec": cfg.prec, "inversion": ok}, cfg.format, out,
         text=f"lambda(s) lambda(-s) = 1 + O(s^{cfg.prec}): {str(ok).lower()}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_crossratio_prop4(args, cfg, out):
    from .crossratio import dihedral_tate_check
    rep = dihedral_tate_check(cfg.prec, cfg.max_len)
    text = "\n".join([f"L={L}: agrees to O(s^{a})" for L, a in enumerate(rep.agreement)]
                     + [f"nondecreasing: {str(rep.nondecreasing).lower()}"])
    emit(rep.to_json(), cfg.format, out, text=text)
    return EXIT_OK if rep.nondecreasing and rep.agreement[-1] >= cfg.prec else EXIT_FAILED


def cmd_verify_all(args, cfg, out):
    from .acceptance import AcceptanceConfig, verify_all
    kw = {"seed": cfg.seed, "workers": cfg.threads, "cache_dir": cfg.cache_dir, "archive_dir": args.archive_dir}
    acfg = AcceptanceConfig.reduced(**kw) if args.reduced else AcceptanceConfig(**kw)
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError as exc:
            raise UsageError("--only takes comma-separated integers") from exc
    rep = verify_all(acfg, only)
    payload = rep.to_json()
    if not args.timings:
        payload.pop("seconds")
        for c in payload["criteria"]:
            c.pop("seconds")
    text = "\n".join(r.line() for r in rep.results)
    if rep.failed:
        text += "\nfailed: " + ", ".join(f"{r.number} ({r.name})" for r in rep.failed)
    emit(payload, cfg.format, out, text=text)
    return EXIT_OK if rep.passed else EXIT_FAILED


COMMANDS = {
    ("asm", "lambda"): cmd_asm_lambda,
    ("asm", "theta-oracle"): cmd_asm_theta_oracle,
    ("asm", "capital-lambda"): cmd_asm_capital_lambda,
    ("asm", "decide-iso"): cmd_asm_decide_iso,
    ("asm", "decide-conj"): cmd_asm_decide_conj,
    ("asm", "p123"): cmd_asm_p123,
    ("tate", "lambda"): cmd_tate_lambda,
    ("tate", "j-check"): cmd_tate_j_check,
    ("tate", "inversion"): cmd_tate_inversion,
    ("crossratio", "prop4"): cmd_crossratio_prop4,
    ("verify", "all"): cmd_verify_all,
}


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = _config(args)
        t0 = time.perf_counter()
        code = COMMANDS[(args.group, args.command)](args, cfg, out)
        log.info("%s finished in %.2fs", cfg.command, time.perf_counter() - t0)
        return code
    except UsageError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


def run_capture(argv) -> tuple[int, str]:
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def main():
    sys.exit(run())


__all__ = ["run", "run_capture", "main", "build_parser", "RunConfig", "EXIT_OK", "EXIT_USAGE",
           "EXIT_UNCERTIFIED", "EXIT_FAILED"]
