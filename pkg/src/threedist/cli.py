"""Command line interface: ``threedist {bda,gaps,verify,cf,search,sample}``.

Exit status: 0 on success, 2 on invalid input (unparseable alpha or cf,
horizon guard, too-short sequence, unwritable output), 1 when a fast route
disagrees with its oracle or a checked inequality fails.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .alphas import DEFAULT_PRIME, parse_alpha
from .arith import Norm, format_rational
from .bestapprox import (
    EXISTS_INFINITELY,
    FOR_ALL,
    best_approximations_bruteforce,
    compute_best_approximations,
    contact_number,
    doubling_index,
    halving_check,
    ratio_floor_check,
    verify_sum_inequality,
)
from .gaps import N1_CONVENTION, OracleMismatch, count_table, gap_spectrum, rows_to_csv
from .onedim import (
    PERIODIC,
    CFDescription,
    cf_convergents,
    cf_expand_rational,
    classify_liminf,
    classify_limsup,
    golden_equivalent,
)
from .search import sample_doubling_violations, search_high_g

COMMANDS = ("bda", "gaps", "verify", "cf", "search", "sample")


class UsageError(ValueError):
    pass


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def read_config(path: str) -> dict[str, str]:
    """Flat ``key=value`` file; ``#`` starts a comment; keys mirror long flags."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--norm", default="linf", help="l1, l2 or linf (default linf)")
    p.add_argument("--dim", type=int, default=None, help="dimension d (inferred from explicit alphas)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--no-timestamp", action="store_true", help="omit generated_at from JSON output")
    p.add_argument("--config", default=None, help="key=value file; flags override it")


def _paths(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--oracle", action="store_true", help="use the enumeration oracle only")
    g.add_argument("--fast", action="store_true", help="use the fast route only")
    g.add_argument("--check", action="store_true", help="run both routes and fail on mismatch (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threedist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bda", help="best Diophantine approximation sequence")
    _common(p)
    _paths(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--qmax", type=int, required=True)

    p = sub.add_parser("gaps", help="g(alpha, N) over a window, fast vs oracle")
    _common(p)
    _paths(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--nlo", type=int, default=1)
    p.add_argument("--nhi", type=int, required=True)
    p.add_argument("--spectrum", action="store_true", help="also emit the gap spectrum at N = nhi")

    p = sub.add_parser("verify", help="growth inequalities on a best approximation sequence")
    _common(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--shift", type=int, action="append", default=None, help="extra shift to report (repeatable)")
    p.add_argument("--halving-k", type=int, default=None, help="K for the halving check (default 5^d)")

    p = sub.add_parser("cf", help="continued fraction expansion, convergents, classification")
    _common(p)
    p.add_argument("input", help='rational "p/q" or expansion like "[0;3,(1,2)]"')
    p.add_argument("--count", type=int, default=None, help="number of convergents")

    p = sub.add_parser("search", help="search for alpha, N with large g")
    _common(p)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--nmax", type=int, default=2000)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--lines", default=None, help="also write witnesses in the sequence record format")

    p = sub.add_parser("sample", help="sampling report of q_{n+T} < 2 q_n shortfalls")
    _common(p)
    p.add_argument("--shift", type=int, required=True, help="T")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    return parser


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config:
        values = read_config(known.config)
        cmd = next((a for a in argv if a in COMMANDS), None)
        if cmd is not None:
            subparser = parser._subparsers._group_actions[0].choices[cmd]
            actions = {a.dest: a for a in subparser._actions}
            defaults = {}
            for key, val in values.items():
                if key not in actions:
                    raise UsageError(f"unknown config key {key!r} for {cmd}")
                act = actions[key]
                if act.nargs == 0:
                    defaults[key] = _bool(val)
                elif act.type is not None:
                    defaults[key] = act.type(val)
                else:
                    defaults[key] = val
            subparser.set_defaults(**defaults)
            for act in subparser._actions:
                if act.dest in defaults:
                    act.required = False
    return parser.parse_args(argv)


def _mode(args) -> str:
    if getattr(args, "oracle", False):
        return "oracle"
    if getattr(args, "fast", False):
        return "fast"
    return "check"


def _resolved(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "config"}
    cfg["mode"] = _mode(args) if hasattr(args, "oracle") else None
    return cfg


def _emit(args, doc: dict | None, csv_text: str | None) -> str:
    if args.format == "csv":
        if csv_text is None:
            raise UsageError(f"{args.command} has no CSV output")
        return csv_text
    doc = dict(doc)
    if not args.no_timestamp:
        doc["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _seq_doc(seq) -> dict:
    head = seq.header()
    head.pop("record")
    head["q"] = seq.qs
    head["r"] = [format_rational(r.value) for r in seq.rs]
    return head


def cmd_bda(args):
    alpha = parse_alpha(args.alpha, args.dim)
    mode = _mode(args)
    seq = oracle = None
    if mode in ("fast", "check"):
        seq = compute_best_approximations(alpha, args.norm, args.qmax)
        seq.check_invariants()
    if mode in ("oracle", "check"):
        oracle = best_approximations_bruteforce(alpha, args.norm, args.qmax)
    if seq is not None and oracle is not None and seq.terms != oracle.terms:
        raise OracleMismatch("fast scan and Fraction scan disagree")
    seq = seq or oracle
    rows = ["q,r_numerator,r_denominator,norm"]
    rows += [f"{q},{r.value.numerator},{r.value.denominator},{r.norm}" for q, r in seq.terms]
    doc = {"command": "bda", "sequence": _seq_doc(seq), "records": seq.to_lines().splitlines()}
    return doc, "\n".join(rows) + "\n"


def cmd_gaps(args):
    alpha = parse_alpha(args.alpha, args.dim)
    mode = _mode(args)
    if not 1 <= args.nlo <= args.nhi:
        raise UsageError("need 1 <= nlo <= nhi")
    rows = count_table(alpha, args.norm, args.nlo, args.nhi, fast=mode != "oracle", oracle=mode != "fast")
    bad = [r["N"] for r in rows if r["match"] is False]
    gs = [r["g_fast"] if r["g_fast"] is not None else r["g_oracle"] for r in rows]
    doc = {
        "command": "gaps",
        "alpha": [format_rational(c) for c in alpha.coords],
        "norm": str(Norm.parse(args.norm)),
        "range": [args.nlo, args.nhi],
        "window_max": max(gs),
        "window_min": min(gs),
        "n1_convention": N1_CONVENTION,
        "rows": rows,
    }
    if args.spectrum:
        doc["spectrum"] = gap_spectrum(alpha, args.norm, args.nhi).to_records()
    if bad:
        raise OracleMismatch(f"Chevallier count disagrees with the oracle at N={bad[:10]}")
    return doc, rows_to_csv(rows)


def cmd_verify(args):
    alpha = parse_alpha(args.alpha, args.dim)
    norm = Norm.parse(args.norm)
    d = alpha.d
    seq = compute_best_approximations(alpha, norm, args.qmax)
    seq.check_invariants()
    if len(seq) < 2:
        raise UsageError(f"sequence has {len(seq)} term(s); raise --qmax (horizon {args.qmax})")
    checks, failed = [], []

    def run(label, fn, *a, assert_pass=True):
        try:
            rep = fn(seq, *a)
        except ValueError as exc:
            checks.append({"name": label, "skipped": str(exc)})
            return
        out = rep.to_dict()
        out["name"] = label
        checks.append(out)
        if assert_pass and rep.quantifier == FOR_ALL and not rep.passed:
            failed.append(label)

    if norm is Norm.LINF:
        run("sum_shift_2^d_linf", verify_sum_inequality, 2**d, FOR_ALL)
        if d == 2:
            run("sum_shift_3_infinitely_often", verify_sum_inequality, 3, EXISTS_INFINITELY, assert_pass=False)
        run("ratio_floor", ratio_floor_check)
    if norm is Norm.L2 and d == 2:
        run("sum_shift_4_planar_l2", verify_sum_inequality, 4, FOR_ALL)
    K = contact_number(norm, d)
    if K is not None:
        run(f"sum_shift_contact_K={K}", verify_sum_inequality, K, FOR_ALL)
    run("halving", halving_check, args.halving_k or 5**d)
    for s in args.shift or []:
        run(f"sum_shift_{s}", verify_sum_inequality, s, FOR_ALL, assert_pass=False)
    T = doubling_index(seq)
    doc = {
        "command": "verify",
        "sequence": _seq_doc(seq),
        "contact_number": K,
        "doubling_index": T,
        "g_upper_bound": T + 1,
        "checks": checks,
    }
    csv_rows = ["name,checked,passed,violations"]
    for c in checks:
        if "skipped" in c:
            csv_rows.append(f"{c['name']},0,,skipped")
        else:
            csv_rows.append(f"{c['name']},{c['checked']},{str(c['passed']).lower()},{' '.join(map(str, c['violations']))}")
    if failed:
        raise AssertionError(f"inequality violated: {failed}")
    return doc, "\n".join(csv_rows) + "\n"


def cmd_cf(args):
    text = args.input.strip()
    if text.startswith("["):
        cf = CFDescription.parse(text)
    else:
        cf = cf_expand_rational(Fraction(text.replace(" ", "")))
    if cf.kind == PERIODIC:
        count = args.count or len(cf.preperiod) + 2 * len(cf.period) + 8
    else:
        count = args.count or len(cf.preperiod)
    doc = {"command": "cf", "input": text, "expansion": str(cf), "kind": cf.kind}
    table = None
    if count:
        table = cf_convergents(cf, count)
        doc["convergents"] = [{"n": i, "a": a, "p": p, "q": q} for i, (a, p, q) in enumerate(table.entries, start=1)]
    if cf.kind == PERIODIC:
        doc["limsup_g"] = classify_limsup(cf)
        doc["liminf_g"] = classify_liminf(cf)
        doc["golden_equivalent"] = golden_equivalent(cf)
    return doc, table.to_csv() if table else "n,a_n,p_n,q_n\n"


def cmd_search(args):
    d = args.dim or 1
    found = search_high_g(d, args.norm, args.target, args.budget, args.seed, args.nmax, prime=args.prime)
    if args.lines:
        Path(args.lines).write_text("".join(w.to_lines() for w in found))
    doc = {"command": "search", "witnesses": [w.to_dict() for w in found], "count": len(found)}
    rows = ["alpha,N,norm,g,verified_by_oracle"]
    rows += [f"\"{w.to_dict()['alpha']}\",{w.N},{w.norm},{w.g},{str(w.verified_by_oracle).lower()}" for w in found]
    return doc, "\n".join(rows) + "\n"


def cmd_sample(args):
    d = args.dim or 1
    rep = sample_doubling_violations(d, args.norm, args.shift, args.samples, args.seed, args.qmax, prime=args.prime)
    doc = {"command": "sample", **rep.to_dict()}
    return doc, rep.to_csv()


HANDLERS = {
    "bda": cmd_bda,
    "gaps": cmd_gaps,
    "verify": cmd_verify,
    "cf": cmd_cf,
    "search": cmd_search,
    "sample": cmd_sample,
}


def run(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return 2 if exc.code else 0
    print("# config: " + json.dumps(_resolved(args), sort_keys=True, default=str), file=sys.stderr)
    try:
        Norm.parse(args.norm)
        doc, csv_text = HANDLERS[args.command](args)
        text = _emit(args, doc, csv_text)
    except (OracleMismatch, AssertionError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
