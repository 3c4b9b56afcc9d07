"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 budget exhausted, 3 invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .config import set_budget, set_threads
from .errors import BudgetExceeded, InvariantViolation, ValidationError

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3


def _ints(text: str) -> List[int]:
    text = text.strip().strip("()[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}") from None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {text!r}") from None


def _prime(text: str) -> int:
    from .arith import require_prime

    try:
        p = int(text)
    except ValueError:
        raise ValidationError(f"not an integer: {text!r}") from None
    return require_prime(p)


def _emit(obj, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(obj, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _tup(xs) -> str:
    return "(" + ",".join(str(x) for x in xs) + ")"


# -- subcommands ---------------------------------------------------------------

def cmd_gk(args) -> int:
    from .gk import gk_invariant, gr_at_p
    from .matrices import load_matrix, local_invariants

    B = load_matrix(args.matrix)
    p = _prime(args.prime)
    res = gk_invariant(B, p)
    led = res.ledger
    eB = local_invariants(B, p).eB
    g = [gr_at_p(B, p, r) for r in range(1, B.n)]
    top_ok = led[-1] == eB
    minor_ok = all(led[r] <= g[r] for r in range(B.n - 1))
    obj = {
        "a": list(res.a),
        "ledger": list(led),
        "certificate": res.certificate,
        "eB": eB,
        "g": g,
        "top_ledger_equals_eB": top_ok,
        "ledger_below_minor_bounds": minor_ok,
    }
    if res.witness is not None:
        obj["witness"] = [list(r) for r in res.witness]
    _emit(obj, args.json, [
        _tup(res.a),
        f"ledger {_tup(led)}",
        f"certificate {res.certificate}",
        f"e_n = e_B ({eB}): {'ok' if top_ok else 'FAIL'}",
        f"e_r <= g_r {_tup(g)}: {'ok' if minor_ok else 'FAIL'}",
    ])
    return EXIT_OK if top_ok and minor_ok else EXIT_INVARIANT


def cmd_siegel(args) -> int:
    from .attach import attach
    from .egk import f_poly
    from .matrices import load_matrix, local_invariants
    from .siegel import egk_to_F, siegel_oracle

    B = load_matrix(args.matrix)
    p = _prime(args.prime)
    eB = local_invariants(B, p).eB
    obj = {"eB": eB, "method": args.method, "p": p}
    status = EXIT_OK
    if args.method in ("oracle", "both"):
        orc = siegel_oracle(B, p, level=args.level)
        obj["F"] = list(orc.F)
        obj["S"] = list(orc.S)
    if args.method in ("egk", "both"):
        res = attach(B, p)
        F = list(egk_to_F(f_poly(res.datum), p, B.n))
        obj["datum"] = str(res.datum)
        if args.method == "egk":
            obj["F"] = F
        else:
            obj["F_egk"] = F
            obj["equal"] = F == obj["F"]
            if not obj["equal"]:
                status = EXIT_INVARIANT
    print(json.dumps(obj, sort_keys=True))
    return status


def _negk_report(H, q: int, r0: str) -> dict:
    from .egk import bound_check

    rep = bound_check(H, q, _frac(r0))
    return {
        "datum": str(H),
        "q": q,
        "r0": str(rep.r0),
        "coefficient_checks": rep.coeff_checks,
        "value_checks": rep.value_checks,
        "violations": rep.violations,
        "max_coefficient_ratio": str(rep.max_coeff_ratio),
        "max_value_ratio": str(rep.max_value_ratio),
    }


def cmd_negk(args) -> int:
    import random

    from .egk import f_poly, random_negk, specialize, validate_negk

    if args.action == "eval":
        H = validate_negk(_ints(args.a), _ints(args.eps))
        G = f_poly(H)
        obj = {"datum": str(H), "G": G.to_text(), "F": G.F().to_text(), "eN": G.eN}
        if (args.t is not None or args.x is not None) and args.q is None:
            raise ValidationError("--t and --x need --q")
        if args.q is not None:
            _prime(str(args.q))
            obj["coefficients_at_sqrt_q"] = [repr(v) for v in G.at_sqrt_q(args.q)]
            if args.t is not None:
                obj["value_at_t"] = repr(specialize(G, args.q, t=_frac(args.t)))
            if args.x is not None:
                obj["value_at_x"] = repr(specialize(G, args.q, x=_frac(args.x)))
        _emit(obj, args.json, [f"{k} = {obj[k]}" for k in sorted(obj)])
        return EXIT_OK
    if args.a is not None or args.eps is not None:
        if args.a is None or args.eps is None:
            raise ValidationError("--a and --eps go together")
        data = [validate_negk(_ints(args.a), _ints(args.eps))]
    else:
        if args.count < 0 or not 1 <= args.max_n or args.max_a < 0:
            raise ValidationError("need count >= 0, max-n >= 1, max-a >= 0")
        rng = random.Random(args.seed)
        data = [random_negk(rng, rng.randint(1, args.max_n), args.max_a) for _ in range(args.count)]
    qs = _ints(args.q_list)
    for q in qs:
        _prime(str(q))
    reports = [_negk_report(H, q, r0) for H in data for q in qs for r0 in args.r0]
    bad = [r for r in reports if r["violations"]]
    obj = {"data": len(data), "checks": len(reports), "violations": len(bad), "failing": bad}
    if len(data) == 1:
        obj["reports"] = reports
    _emit(obj, args.json, [
        f"{len(data)} data, {len(reports)} checks, {len(bad)} with violations",
    ] + [f"{r['datum']} q={r['q']} r0={r['r0']}: {r['violations'][0]}" for r in bad])
    return EXIT_INVARIANT if bad else EXIT_OK


def cmd_attach(args) -> int:
    from .attach import attach
    from .matrices import load_matrix

    B = load_matrix(args.matrix)
    res = attach(B, _prime(args.prime), verify=args.verify)
    print(json.dumps(res.to_dict(), sort_keys=True))
    return EXIT_OK


def _load_form(path: str):
    from .lift import EigenformData

    if not os.path.isfile(path):
        raise ValidationError(f"eigenform file {path} does not exist")
    return EigenformData.load(path)


def cmd_lift(args) -> int:
    from .lift import bound_report, fmt_decimal, lift_coefficient, maass_check
    from .matrices import load_matrix

    data = _load_form(args.form)
    if args.action == "coeff":
        B = load_matrix(args.matrix)
        lc = lift_coefficient(B, data)
        obj = {
            "value": str(lc.value),
            "dB": lc.dB,
            "fB": lc.fB,
            "c_h": str(lc.ch),
            "per_prime": {str(p): repr(v) for p, v in sorted(lc.per_prime.items())},
            "ramanujan_flags": list(lc.ramanujan_flags),
        }
        print(json.dumps(obj, sort_keys=True))
        return EXIT_OK
    if not os.path.isdir(args.matrices):
        raise ValidationError(f"matrix directory {args.matrices} does not exist")
    names = sorted(f for f in os.listdir(args.matrices) if f.endswith(".json"))
    # validate everything before computing
    mats = [(os.path.splitext(f)[0], load_matrix(os.path.join(args.matrices, f))) for f in names]
    eps = _frac(args.eps)
    header = ["matrix-id", "det2B", "dB", "fB", "c", "hecke", "bk", "thm31", "thm32",
              "thm641", "thm642", "maass-status", "c-decimal", "thm641-decimal",
              "thm641-ok", "thm642-ok"]
    rows = []
    failed = False
    for mid, B in mats:
        row = bound_report(B, data, eps)
        if B.n == 2:
            try:
                eq, _, _ = maass_check(B, data)
                row.maass = "equal" if eq else "differs"
            except ValidationError:
                row.maass = "missing-entries"
        failed |= not (row.ok641 and row.ok642)
        rows.append([
            mid, row.det2B, row.dB, row.fB, str(row.c),
            fmt_decimal(row.hecke), fmt_decimal(row.bk), fmt_decimal(row.thm31), fmt_decimal(row.thm32),
            str(row.thm641), fmt_decimal(row.thm642), row.maass,
            fmt_decimal(row.c), fmt_decimal(row.thm641),
            str(row.ok641).lower(), str(row.ok642).lower(),
        ])
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_INVARIANT if failed else EXIT_OK


def cmd_corpus(args) -> int:
    from .corpus import gen_corpus, write_corpus

    mats = gen_corpus(args.seed, args.count, args.n, args.bound)
    paths = write_corpus(mats, args.out)
    print(json.dumps({"count": len(paths), "directory": args.out}, sort_keys=True))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gksiegel", description="Siegel series, Gross-Keating invariants and lift coefficients.")
    ap.add_argument("--version", action="version", version=f"gksiegel {__version__}")
    ap.add_argument("--threads", type=int, default=None, help="worker threads (default: logical cores)")
    ap.add_argument("--budget", type=int, default=None, help="maximum enumeration visits")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("gk", help="Gross-Keating invariant")
    g.add_argument("--prime", required=True)
    g.add_argument("--matrix", required=True)
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_gk)

    s = sub.add_parser("siegel", help="local Siegel series polynomial")
    s.add_argument("--prime", required=True)
    s.add_argument("--matrix", required=True)
    s.add_argument("--method", choices=("oracle", "egk", "both"), default="both")
    s.add_argument("--level", type=int, default=None)
    s.set_defaults(func=cmd_siegel)

    n = sub.add_parser("negk", help="naive EGK data")
    nsub = n.add_subparsers(dest="action", parser_class=_Parser)
    nsub.required = True
    ev = nsub.add_parser("eval")
    ev.add_argument("--a", required=True)
    ev.add_argument("--eps", required=True)
    ev.add_argument("--q", type=int, default=None)
    ev.add_argument("--t", default=None, help="evaluate at X + 1/X = t")
    ev.add_argument("--x", default=None, help="evaluate at X = x")
    ev.add_argument("--json", action="store_true")
    ck = nsub.add_parser("check")
    ck.add_argument("--a", default=None)
    ck.add_argument("--eps", default=None)
    ck.add_argument("--count", type=int, default=20)
    ck.add_argument("--max-n", type=int, default=6)
    ck.add_argument("--max-a", type=int, default=5)
    ck.add_argument("--seed", type=int, default=1)
    ck.add_argument("--q", dest="q_list", default="2,3,5")
    ck.add_argument("--r0", action="append", default=None)
    ck.add_argument("--json", action="store_true")
    for p_ in (ev, ck):
        p_.set_defaults(func=cmd_negk)

    a = sub.add_parser("attach", help="attach a naive EGK datum")
    a.add_argument("--prime", required=True)
    a.add_argument("--matrix", required=True)
    a.add_argument("--verify", action="store_true", help="always run the oracle")
    a.set_defaults(func=cmd_attach)

    li = sub.add_parser("lift", help="lift coefficients and bounds")
    lsub = li.add_subparsers(dest="action", parser_class=_Parser)
    lsub.required = True
    lc = lsub.add_parser("coeff")
    lc.add_argument("--form", required=True)
    lc.add_argument("--matrix", required=True)
    lb = lsub.add_parser("bounds")
    lb.add_argument("--form", required=True)
    lb.add_argument("--matrices", required=True)
    lb.add_argument("--eps", default="1/100")
    lb.add_argument("--out", default=None)
    for p_ in (lc, lb):
        p_.set_defaults(func=cmd_lift)

    c = sub.add_parser("corpus", help="write a seeded matrix corpus")
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--count", type=int, default=10)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--bound", type=int, default=6)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.budget is not None:
            if args.budget <= 0:
                raise ValidationError("--budget must be positive")
            set_budget(args.budget)
        if args.threads is not None:
            if args.threads <= 0:
                raise ValidationError("--threads must be positive")
            set_threads(args.threads)
        if getattr(args, "action", None) == "check" and args.r0 is None:
            args.r0 = ["0", "1/2"]
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    finally:
        set_budget(None)
        set_threads(None)


if __name__ == "__main__":
    sys.exit(main())
