"""Command-line front end: analyses, space-time diagrams, reports.

Exit status: 0 success, 1 unexpected failure, 2 usage error, 3 guard
exceeded.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

from . import __version__
from .claims import load_catalog, run_catalog
from .commcomp import FunctionTable, cc_exact, cc_of_cut
from .core import GuardExceeded, classify, evolve, evolve_cyclic, rule_code
from .preimage import enumerate_preimages, find_antecedent, has_antecedent
from .problems import pred_value, sinv_decide
from .render import (ReportDocument, center_rows, save_diagram_png,
                     save_line_plot, write_csv, write_pbm)
from .strategies import audit_strategy, covered_rules, get_strategies


class UsageError(Exception):
    pass


def _rule(text: str) -> int:
    try:
        return rule_code(int(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _word01(text: str) -> str:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"not a nonempty 01-word: {text!r}")
    return text


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _finish(args, command, parameters, results, lines, t0, status=0,
            reporter=None):
    """Emit text or JSON, and write the report directory when asked."""
    doc = ReportDocument(version=__version__, command=command,
                         parameters=parameters, results=results,
                         timing=round(time.time() - t0, 6))
    report_dir = getattr(args, "report_dir", None)
    if report_dir:
        os.makedirs(report_dir, exist_ok=True)
        with open(os.path.join(report_dir, "report.json"), "w") as fh:
            fh.write(doc.to_json() + "\n")
        if reporter:
            reporter(report_dir)
    if args.json:
        print(doc.to_json())
    else:
        for ln in lines:
            print(ln)
    return status


def _cmd_evolve(args):
    t0 = time.time()
    if args.word is None and args.width is None:
        raise UsageError("evolve needs --word or --width")
    if args.word is not None:
        word = args.word
    else:
        rng = random.Random(args.seed)
        word = "".join(rng.choice("01") for _ in range(args.width))
    stepper = evolve_cyclic if args.cyclic else evolve
    rows = [r for r in stepper(args.rule, word, args.steps) if r]
    params = {"rule": args.rule, "word": word, "steps": args.steps,
              "cyclic": args.cyclic, "seed": args.seed,
              "format": args.format}
    results = {"rows": rows, "height": len(rows),
               "width": max(len(r) for r in rows)}
    lines = []
    if args.text:
        lines.extend(center_rows(rows))
    lines.append(f"rule {args.rule}: {len(rows)} rows, "
                 f"width {results['width']}")
    if args.out:
        write_pbm(rows, args.out, binary=args.format == "p4")
        lines.append(f"wrote {args.out}")

    def reporter(d):
        write_pbm(rows, os.path.join(d, "diagram.pbm"),
                  binary=args.format == "p4")
        save_diagram_png(rows, os.path.join(d, "diagram.png"),
                         title=f"rule {args.rule}")
        write_csv(os.path.join(d, "rows.csv"), ["step", "width", "cells"],
                  [(i, len(r), r) for i, r in enumerate(rows)])

    return _finish(args, "evolve", params, results, lines, t0,
                   reporter=reporter)


def _cmd_classify(args):
    t0 = time.time()
    classes = classify()
    total = sum(len(c) for c in classes)
    lines = [f"class {i:2d}  rep {c[0]:3d}  size {len(c)}  "
             + " ".join(map(str, c)) for i, c in enumerate(classes)]
    lines.append(f"{len(classes)} classes, {total} rules total")
    results = {"classes": classes, "count": len(classes),
               "rules_total": total}
    return _finish(args, "classify", {}, results, lines, t0)


def _cmd_preimage(args):
    t0 = time.time()
    if args.all and args.steps != 1:
        raise UsageError("--all only makes sense with --steps 1")
    ok = has_antecedent(args.rule, args.word, args.steps)
    witness = find_antecedent(args.rule, args.word, args.steps) if ok else None
    params = {"rule": args.rule, "word": args.word, "steps": args.steps}
    results = {"has_antecedent": ok, "witness": witness, **params}
    lines = [f"antecedent: {witness}"] if ok else ["no antecedent"]
    if args.all:
        pres = sorted(enumerate_preimages(args.rule, args.word))
        results["preimages"] = pres
        lines.append(f"{len(pres)} preimages")
        lines.extend(f"  {p}" for p in pres)
    return _finish(args, "preimage", params, results, lines, t0)


def _read_table(path) -> FunctionTable:
    with open(path) as fh:
        body = [ln.strip() for ln in fh if ln.strip()]
    if not body or any(set(ln) - {"0", "1"} for ln in body):
        raise UsageError(f"{path}: expected lines of 0/1 cells")
    if len({len(ln) for ln in body}) != 1:
        raise UsageError(f"{path}: ragged rows")
    entries = [[int(c) for c in ln] for ln in body]
    return FunctionTable(range(len(body)), range(len(body[0])), entries)


def _cmd_cc(args):
    t0 = time.time()
    if (args.table is None) == (args.rule is None):
        raise UsageError("cc needs exactly one of --table or --rule/--n")
    if args.rule is not None and args.n is None:
        raise UsageError("--rule needs --n")
    params = {"cap": args.cap}
    if args.table:
        table = _read_table(args.table)
        params.update(table=args.table, rows=len(table.rows),
                      cols=len(table.cols))
        depth = cc_exact(table, cap=args.cap)
        per_cut = None
    elif args.cut is not None:
        if args.n is None:
            raise UsageError("--cut needs --n")
        length = 2 * args.n + 1
        if not 0 <= args.cut < length:
            raise UsageError(f"--cut must lie in 0..{length - 1}")
        params.update(rule=args.rule, n=args.n, cut=args.cut)
        table = cc_of_cut(lambda w: pred_value(args.rule, w), length,
                          args.cut)
        depth = cc_exact(table, cap=args.cap)
        per_cut = None
    else:
        params.update(rule=args.rule, n=args.n)
        depth, per_cut = _pred_depths(args.rule, args.n, args.cap)
    results = {"depth": depth, "cap_exceeded": depth is None}
    if per_cut is not None:
        results["per_cut"] = per_cut
    lines = [f"depth {depth}" if depth is not None
             else f"depth exceeds cap {args.cap}"]
    return _finish(args, "cc", params, results, lines, t0)


def _pred_depths(rule, n, cap):
    """Exact depth of every proper cut of the n-step center-value game."""
    length = 2 * n + 1
    fn = lambda w: pred_value(rule, w)
    per_cut = {}
    for cut in range(length):
        per_cut[cut] = cc_exact(cc_of_cut(fn, length, cut), cap=cap)
    vals = list(per_cut.values())
    depth = None if None in vals else max(vals)
    return depth, per_cut


def _cmd_pred(args):
    t0 = time.time()
    depth, per_cut = _pred_depths(args.rule, args.n, args.cap)
    params = {"rule": args.rule, "n": args.n, "cap": args.cap}
    results = {"per_cut": per_cut, "max": depth,
               "cap_exceeded": depth is None}
    lines = [f"cut {cut:2d}: depth {d}" if d is not None
             else f"cut {cut:2d}: depth > {args.cap}"
             for cut, d in per_cut.items()]
    lines.append(f"max depth {depth}" if depth is not None
                 else f"max depth exceeds cap {args.cap}")

    def reporter(d):
        write_csv(os.path.join(d, "per_cut.csv"), ["cut", "depth"],
                  sorted(per_cut.items()))
        xs = sorted(per_cut)
        ys = [per_cut[c] if per_cut[c] is not None else -1 for c in xs]
        save_line_plot(os.path.join(d, "per_cut.png"),
                       {f"rule {args.rule}": (xs, ys)}, "cut",
                       "protocol depth",
                       title=f"n={args.n} center-value game")

    return _finish(args, "pred", params, results, lines, t0,
                   reporter=reporter)


def _cmd_sinv(args):
    t0 = time.time()
    v = sinv_decide(args.rule, args.u, args.x, horizon=args.horizon)
    params = {"rule": args.rule, "u": args.u, "x": args.x,
              "horizon": args.horizon}
    results = {"verdict": v.kind, "time": v.time,
               "horizon_used": v.horizon}
    if v.kind == "inconclusive":
        lines = [f"inconclusive after horizon {args.horizon}"]
    else:
        lines = [f"{v.kind} (settled at step {v.time})"]
    return _finish(args, "sinv", params, results, lines, t0)


def _cmd_protocols(args):
    t0 = time.time()
    if (args.rule is None) == (not args.all):
        raise UsageError("protocols needs exactly one of --rule or --all")
    rules = covered_rules(args.problem) if args.all else [args.rule]
    audits = []
    status = 0
    for r in rules:
        for strat in get_strategies(r, args.problem):
            rep = audit_strategy(strat, n_max=args.n_max, max_u=args.max_u)
            audits.append((strat, rep))
            if not rep.correct:
                status = 1
    params = {"problem": args.problem, "n_max": args.n_max,
              "max_u": args.max_u,
              "rules": rules if args.all else args.rule}
    results = {"audits": [
        {"rule": rep.rule, "problem": rep.problem, "variant": strat.variant,
         "name": strat.name, "bound": strat.bound_kind,
         "max_bits": {str(n): b for n, b in sorted(rep.max_bits.items())},
         "correct": rep.correct, "mismatches": len(rep.mismatches),
         "notes": list(rep.notes)}
        for strat, rep in audits]}
    lines = []
    for strat, rep in audits:
        bits = " ".join(f"{n}:{b}" for n, b in sorted(rep.max_bits.items()))
        verdict = "ok" if rep.correct else \
            f"MISMATCH x{len(rep.mismatches)}"
        lines.append(f"rule {rep.rule:3d} {rep.problem} "
                     f"[{strat.variant}] {strat.name}: bits {bits} "
                     f"{verdict}")
        lines.extend(f"    note: {n}" for n in rep.notes)
    if not audits:
        lines.append("no strategy registered")
    lines.append(f"{len(audits)} audits, "
                 f"{sum(1 for _, r in audits if not r.correct)} failing")

    def reporter(d):
        write_csv(os.path.join(d, "audits.csv"),
                  ["rule", "problem", "variant", "name", "n", "max_bits",
                   "correct"],
                  [(rep.rule, rep.problem, strat.variant, strat.name, n, b,
                    rep.correct)
                   for strat, rep in audits
                   for n, b in sorted(rep.max_bits.items())])
        series = {}
        for strat, rep in audits:
            xs = sorted(rep.max_bits)
            series[f"{rep.rule}{strat.variant}"] = \
                (xs, [rep.max_bits[n] for n in xs])
        if series:
            save_line_plot(os.path.join(d, "bits.png"), series,
                           "instance size n", "max bits announced",
                           title=f"{args.problem} strategies")

    return _finish(args, "protocols", params, results, lines, t0,
                   status=status, reporter=reporter)


def _cmd_verify(args):
    t0 = time.time()
    claims = load_catalog(args.catalog)
    report = run_catalog(claims)
    lines = []
    for res in report.results:
        if res.unexpected:
            tag = "UNEXPECTED-PASS" if res.passed else "UNEXPECTED-FAIL"
        else:
            tag = "pass" if res.passed else "xfail"
        witness = f"  witness={res.witness}" if res.witness else ""
        lines.append(f"[{tag}] {res.claim.id}: {res.detail}{witness}")
    counts = report.counts()
    lines.append(
        f"{counts['claims']} claims: {counts['passed']} passed, "
        f"{counts['expected_failures']} expected failures, "
        f"{counts['unexpected_failures']} unexpected failures, "
        f"{counts['unexpected_passes']} unexpected passes")
    results = {"counts": counts, "ok": report.ok, "claims": [
        {"id": r.claim.id, "rule": r.claim.rule, "kind": r.claim.kind,
         "prop": r.claim.prop, "passed": r.passed,
         "expect_fail": r.claim.expect_fail, "witness": r.witness,
         "detail": r.detail}
        for r in report.results]}
    params = {"catalog": args.catalog or "builtin",
              "claims": len(claims)}
    return _finish(args, "verify", params, results, lines, t0,
                   status=0 if report.ok else 1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ecacomm",
        description="Elementary cellular automata: evolution, preimages, "
                    "communication bounds, protocol audits.")
    ap.add_argument("--version", action="version",
                    version=f"ecacomm {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, report_dir=False):
        p.add_argument("--json", action="store_true",
                       help="emit a JSON report instead of text")
        if report_dir:
            p.add_argument("--report-dir", metavar="DIR",
                           help="write report.json, CSV tables and figures "
                                "here")

    p = sub.add_parser("evolve", help="run a rule and render the diagram")
    p.add_argument("--rule", type=_rule, required=True)
    p.add_argument("--word", type=_word01, help="initial 01-word")
    p.add_argument("--width", type=_positive,
                   help="draw a random initial word of this width")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cyclic", action="store_true",
                   help="wrap around instead of shrinking")
    p.add_argument("--format", choices=("p1", "p4"), default="p1")
    p.add_argument("--out", metavar="FILE", help="write a PBM image")
    p.add_argument("--text", action="store_true", help="print padded rows")
    common(p, report_dir=True)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("classify", help="list the 88 equivalence classes")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("preimage", help="search for antecedents of a word")
    p.add_argument("--rule", type=_rule, required=True)
    p.add_argument("--word", type=_word01, required=True)
    p.add_argument("--steps", type=_positive, default=1)
    p.add_argument("--all", action="store_true",
                   help="list every one-step antecedent")
    common(p)
    p.set_defaults(func=_cmd_preimage)

    p = sub.add_parser("cc", help="exact deterministic protocol depth")
    p.add_argument("--table", metavar="FILE",
                   help="text matrix of 0/1 rows")
    p.add_argument("--rule", type=_rule)
    p.add_argument("--n", type=_positive,
                   help="center-value game size when --rule is used")
    p.add_argument("--cut", type=int,
                   help="only this split of the input word")
    p.add_argument("--cap", type=int, default=24)
    common(p)
    p.set_defaults(func=_cmd_cc)

    p = sub.add_parser("pred", help="per-cut depth of the center-value game")
    p.add_argument("--rule", type=_rule, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--cap", type=int, default=24)
    common(p, report_dir=True)
    p.set_defaults(func=_cmd_pred)

    p = sub.add_parser("sinv", help="does a perturbation stay bounded?")
    p.add_argument("--rule", type=_rule, required=True)
    p.add_argument("--u", type=_word01, required=True,
                   help="background period")
    p.add_argument("--x", type=_word01, required=True,
                   help="perturbation word")
    p.add_argument("--horizon", type=_positive, default=256)
    common(p)
    p.set_defaults(func=_cmd_sinv)

    p = sub.add_parser("protocols", help="audit the per-rule strategies")
    p.add_argument("--rule", type=_rule)
    p.add_argument("--all", action="store_true",
                   help="every rule with a registered strategy")
    p.add_argument("--problem", choices=("pred", "sinv"), required=True)
    p.add_argument("--n-max", type=_positive, default=4)
    p.add_argument("--max-u", type=_positive, default=3)
    common(p, report_dir=True)
    p.set_defaults(func=_cmd_protocols)

    p = sub.add_parser("verify", help="run the claims catalog")
    p.add_argument("--catalog", metavar="FILE",
                   help="claims file (defaults to the packaged catalog)")
    common(p)
    p.set_defaults(func=_cmd_verify)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GuardExceeded as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
