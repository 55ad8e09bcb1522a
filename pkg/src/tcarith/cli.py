"""Command-line entry point: ``tcarith <command> ...``.

Output is plain text by default and sorted, indented JSON with ``--json``. Exit
status is 0 on success, 2 for usage or syntax errors, 3 when an input violates an
operation's precondition and 4 when a budget runs out.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import divpow, lif, roots
from .catalan import (
    DegreeVector, catalan, check_identity_bin, check_identity_cm, check_identity_k,
    compositions_with_weight,
)
from .errors import FormulaSyntaxError, TcArithError
from .exact import format_rat, parse_int, parse_rat
from .formula.minsat import DEFAULT_BUDGET, min_sat_report
from .formula.normal import normalize_formula
from .formula.parser import parse as parse_formula
from .poly import Polynomial


class UsageError(Exception):
    pass


def _int(text: str) -> int:
    try:
        return parse_int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nat(text: str) -> int:
    v = _int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return v


def _rat(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _poly(text: str) -> Polynomial:
    try:
        return Polynomial.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [parse_int(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _param(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), _nat(value)


# commands; each returns (text, json_payload)

Result = tuple[str, Any]


def cmd_catalan(args: argparse.Namespace) -> Result:
    if args.d is None or args.m is None:
        raise UsageError("catalan needs --d and --m (or use 'catalan verify')")
    if args.d < 1:
        raise UsageError(f"--d must be >= 1, got {args.d}")
    if len(args.m) != args.d - 1:
        raise UsageError(f"--m needs {args.d - 1} entries for d = {args.d}, got {len(args.m)}")
    m = DegreeVector(args.m)
    value = catalan(m)
    return str(value), {"d": args.d, "m": list(m.entries), "catalan": value}


def cmd_catalan_verify(args: argparse.Namespace) -> Result:
    d, wmax = args.d, args.weight_max
    vectors = [m for w in range(1, wmax + 2) for m in compositions_with_weight(d, w)]
    failures: list[dict] = []
    counts = {"cm": 0, "bin": 0, "k": 0}
    for m in vectors:
        if not m.is_zero():
            counts["cm"] += 1
            if not check_identity_cm(m):
                failures.append({"identity": "cm", "m": list(m.entries)})
        counts["bin"] += 1
        if not check_identity_bin(m):
            failures.append({"identity": "bin", "m": list(m.entries)})
        for k in range(1, d + 1):
            counts["k"] += 1
            if not check_identity_k(m, k):
                failures.append({"identity": "k", "m": list(m.entries), "k": k})
    ok = not failures
    text = (f"d={d} weight<={wmax} vectors={len(vectors)} "
            f"cm={counts['cm']} bin={counts['bin']} k={counts['k']} "
            + ("all identities hold" if ok else f"FAILURES={len(failures)}"))
    payload = {"d": d, "weight_max": wmax, "vectors": len(vectors), "checked": counts,
               "failures": failures, "ok": ok}
    return text, payload


def cmd_lif_coeffs(args: argparse.Namespace) -> Result:
    s = lif.lif_coefficients(args.poly, args.n)
    return ",".join(format_rat(b) for b in s.coeffs), s.to_json()


def cmd_lif_check(args: argparse.Namespace) -> Result:
    s = lif.lif_coefficients(args.poly, args.n)
    rec = lif.recurrence_coefficients(args.poly, args.n)
    same = list(s.coeffs) == rec
    recurrence_ok = lif.check_inverse_recurrence(s)
    bound_ok = lif.coefficient_bound_holds(s)
    ratio = max(lif.bound_ratios(s), default=Fraction(0))
    payload = {"poly": str(args.poly), "n": args.n, "a": format_rat(s.a),
               "closed_form_equals_recurrence": same, "recurrence_holds": recurrence_ok,
               "coefficient_bound_holds": bound_ok, "max_bound_ratio": format_rat(ratio)}
    verdict = lambda ok: "ok" if ok else "FAIL"  # noqa: E731
    text = (f"closed-form=recurrence: {verdict(same)}\n"
            f"recurrence: {verdict(recurrence_ok)}\n"
            f"bound |b_n| <= (4a)^(n-1) with a={format_rat(s.a)}: {verdict(bound_ok)}"
            f" (max ratio {format_rat(ratio)})")
    return text, payload


def cmd_root_approx(args: argparse.Namespace) -> Result:
    iv = roots.SignChangeInterval.oriented(args.poly, args.lo, args.hi)
    negated = iv.f != args.poly
    if args.bisect:
        cert = roots.refine_sign_change(iv, args.eps)
    else:
        cert = roots.approx_root(iv.f, iv, args.eps, max_terms=args.max_terms)
    payload = cert.to_json()
    payload["negated"] = negated
    text = f"z_minus={payload['z_minus']} z_plus={payload['z_plus']} width={payload['width']}"
    return text, payload


def cmd_divide(args: argparse.Namespace) -> Result:
    if args.via_powers:
        t = divpow.division_trace(args.y, args.x)
        q, r = t.q, t.r
        extra = {"n": t.n, "m": t.m, "q0": t.q0, "chain_holds": t.chain_holds()}
    else:
        q, r = divpow.native_divide(args.y, args.x)
        extra = {}
    payload = {"y": args.y, "x": args.x, "q": q, "r": r, "via_powers": args.via_powers, **extra}
    return f"q={q} r={r}", payload


def cmd_powers(args: argparse.Namespace) -> Result:
    if args.via_division:
        ys = divpow.powers_via_division(args.x, args.n)
    else:
        ys = divpow.power_sequence(args.x, args.n + 1)
    return ",".join(map(str, ys)), {"x": args.x, "n": args.n, "powers": ys,
                                    "via_division": args.via_division}


def _read_formula(path: str):
    if path == "-":
        src = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            src = fh.read()
    return parse_formula(src)


def cmd_formula_normalize(args: argparse.Namespace) -> Result:
    nf = normalize_formula(_read_formula(args.file), collapse=args.collapse)
    return str(nf), nf.to_json()


def cmd_formula_minsat(args: argparse.Namespace) -> Result:
    phi = _read_formula(args.file)
    rep = min_sat_report(phi, args.bound, dict(args.param), budget=args.budget)
    text = "none" if rep.value is None else str(rep.value)
    return text, rep.to_json()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="structured output (sorted keys)")
    common.add_argument("--max-terms", type=_nat, default=argparse.SUPPRESS,
                        help=f"cap on series terms (default {lif.DEFAULT_MAX_TERMS})")
    common.add_argument("--budget", type=_nat, default=argparse.SUPPRESS,
                        help=f"cap on enumerated quantifier assignments (default {DEFAULT_BUDGET})")

    p = argparse.ArgumentParser(prog="tcarith", parents=[common],
                                description="Exact arithmetic reductions, inversion series and bounded-formula tools.")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("catalan", parents=[common], help="generalized Catalan numbers")
    pc.add_argument("--d", type=_int)
    pc.add_argument("--m", type=_int_list)
    pc.set_defaults(func=cmd_catalan)
    pcs = pc.add_subparsers(dest="action")
    pv = pcs.add_parser("verify", parents=[common], help="check the convolution identities")
    pv.add_argument("--d", type=_int, required=True)
    pv.add_argument("--weight-max", type=_nat, required=True)
    pv.set_defaults(func=cmd_catalan_verify)

    pl = sub.add_parser("lif", parents=[common], help="inversion series coefficients")
    pls = pl.add_subparsers(dest="action", required=True)
    for name, fn in (("coeffs", cmd_lif_coeffs), ("check", cmd_lif_check)):
        q = pls.add_parser(name, parents=[common])
        q.add_argument("--poly", type=_poly, required=True, help='"a0,a1,...,ad"')
        q.add_argument("--n", type=_nat, required=True)
        q.set_defaults(func=fn)

    pr = sub.add_parser("root", parents=[common], help="certified root brackets")
    prs = pr.add_subparsers(dest="action", required=True)
    pa = prs.add_parser("approx", parents=[common])
    pa.add_argument("--poly", type=_poly, required=True)
    pa.add_argument("--lo", type=_rat, required=True)
    pa.add_argument("--hi", type=_rat, required=True)
    pa.add_argument("--eps", type=_rat, required=True)
    pa.add_argument("--bisect", action="store_true", help="plain bisection only")
    pa.set_defaults(func=cmd_root_approx)

    pd = sub.add_parser("divide", parents=[common], help="quotient and remainder")
    pd.add_argument("--y", type=_nat, required=True)
    pd.add_argument("--x", type=_int, required=True)
    pd.add_argument("--via-powers", action="store_true")
    pd.set_defaults(func=cmd_divide)

    pp = sub.add_parser("powers", parents=[common], help="x^0 .. x^n")
    pp.add_argument("--x", type=_nat, required=True)
    pp.add_argument("--n", type=_nat, required=True)
    pp.add_argument("--via-division", action="store_true")
    pp.set_defaults(func=cmd_powers)

    pf = sub.add_parser("formula", parents=[common], help="bounded formulas")
    pfs = pf.add_subparsers(dest="action", required=True)
    pn = pfs.add_parser("normalize", parents=[common])
    pn.add_argument("--file", required=True, help="formula file, or - for stdin")
    pn.add_argument("--collapse", action="store_true", help="one inequality per residue class")
    pn.set_defaults(func=cmd_formula_normalize)
    pm = pfs.add_parser("minsat", parents=[common])
    pm.add_argument("--file", required=True)
    pm.add_argument("--bound", type=_nat, required=True)
    pm.add_argument("--param", type=_param, action="append", default=[],
                    help="value of a further free variable, NAME=VALUE")
    pm.set_defaults(func=cmd_formula_minsat)
    return p


_NEGATIVE_VALUE = re.compile(r"-[\d.]")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--poly -2,0,1`` into ``--poly=-2,0,1`` so argparse does not see an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _emit(out, text: str, payload: Any, as_json: bool) -> None:
    if as_json:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(text + "\n")


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    args.max_terms = getattr(args, "max_terms", lif.DEFAULT_MAX_TERMS)
    args.budget = getattr(args, "budget", DEFAULT_BUDGET)
    func: Callable[[argparse.Namespace], Result] = args.func
    try:
        text, payload = func(args)
    except UsageError as exc:
        err.write(f"tcarith: error: {exc}\n")
        return 2
    except FormulaSyntaxError as exc:
        err.write(f"tcarith: syntax error: {exc}\n")
        line_start = exc.src.rfind("\n", 0, exc.pos) + 1
        line_end = exc.src.find("\n", exc.pos)
        line = exc.src[line_start: None if line_end < 0 else line_end]
        err.write(f"  {line}\n  {' ' * (exc.pos - line_start)}^\n")
        return exc.exit_code
    except TcArithError as exc:
        err.write(f"tcarith: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        err.write(f"tcarith: error: {exc}\n")
        return 2
    _emit(out, text, payload, args.json)
    return 0


def main() -> None:
    sys.exit(run())
