"""Command-line interface: ``lpmkit {mine,spm,select,evaluate,export,demo}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import io
from .exceptions import LpmkitError, ParseError, ResourceError
from .export import to_dot, to_pnml
from .fixtures import reference_lpms, running_example
from .metrics import evaluate
from .mine import MineConfig, mine
from .petri import DEFAULT_STATE_BUDGET
from .select import (alignment_based_selection, greedy_fscore_selection, greedy_selection,
                     heuristic_diversity_selection, merge_clogsgrow, remine)
from .seqdb import load
from .spm import mine_clogsgrow
from .tree import OPERATORS

EXIT_USAGE, EXIT_PARSE, EXIT_RESOURCE = 2, 3, 4
METHODS = ("align", "greedy", "greedy-fscore", "heuristic", "clogsgrow-merge")


class UsageError(Exception):
    pass


def _existing(path: str, flag: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{flag}: no such file: {path}")
    return p


def _db(args):
    return load(_existing(args.input, "--input"), args.format)


def _operators(text: str) -> frozenset:
    ops = frozenset(o.strip() for o in text.split(",") if o.strip())
    bad = ops - set(OPERATORS)
    if bad or not ops:
        raise UsageError(f"--operators: expected a subset of {','.join(OPERATORS)}, got {text!r}")
    return ops


def _summary(report) -> str:
    return (f"coverage={report.explained_events}/{report.total_events} ({report.coverage:.4f}) "
            f"non_redundancy={report.non_redundancy:.4f} fscore={report.fscore:.4f} "
            f"patterns={report.pattern_count}")


def cmd_mine(args) -> int:
    db = _db(args)
    cfg = MineConfig(min_sup=args.min_sup, exp_max=args.exp_max, operators=_operators(args.operators),
                     min_confidence=args.min_confidence, max_candidates_evaluated=args.max_candidates,
                     workers=args.threads)
    res = mine(db, cfg)
    top = res.lpms[:args.top_k] if args.top_k else res.lpms
    io.save_lpms(top, args.out)
    flag = " (truncated)" if res.truncated else ""
    print(f"mined {len(res.lpms)} LPMs from {res.candidates_evaluated} candidates{flag}; wrote {len(top)} to {args.out}")
    return 0


def cmd_spm(args) -> int:
    db = _db(args)
    pats = mine_clogsgrow(db, args.min_sup, keep_singletons=not args.no_singletons)
    io.save_patterns(pats, args.out)
    print(f"{len(pats)} closed patterns with support >= {args.min_sup}; wrote {args.out}")
    return 0


def cmd_select(args) -> int:
    db = _db(args)
    if args.method == "clogsgrow-merge":
        if not args.patterns:
            raise UsageError("--patterns is required for --method clogsgrow-merge")
        pats = io.load_patterns(_existing(args.patterns, "--patterns"))
        sel = merge_clogsgrow(db, pats, args.min_dist)
    else:
        if not args.lpms:
            raise UsageError(f"--lpms is required for --method {args.method}")
        lpms = io.load_lpms(_existing(args.lpms, "--lpms"))
        if args.method == "align":
            sel = alignment_based_selection(db, lpms)
        elif args.method == "greedy":
            sel = greedy_selection(db, lpms)
        elif args.method == "greedy-fscore":
            sel = greedy_fscore_selection(db, lpms)
        else:
            sel = heuristic_diversity_selection(lpms, args.diversity)
    if args.remine:
        sel = remine(db, sel)
    io.save_lpms(sel, args.out)
    print(_summary(evaluate(db, sel.nets, args.state_budget)))
    return 0


def cmd_evaluate(args) -> int:
    db = _db(args)
    lpms = io.load_lpms(_existing(args.lpms, "--lpms"))
    report = evaluate(db, [l.net for l in lpms], args.state_budget)
    if args.out:
        io.dump(report.to_json(), args.out)
    print(_summary(report))
    return 0


def cmd_export(args) -> int:
    lpms = io.load_lpms(_existing(args.lpms, "--lpms"))
    if not (args.dot or args.pnml):
        raise UsageError("export needs --dot and/or --pnml")
    indices = range(len(lpms)) if args.index is None else [args.index]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for j in indices:
        if not 0 <= j < len(lpms):
            raise UsageError(f"--index: {j} outside 0..{len(lpms) - 1}")
        name = f"lpm{j}"
        if args.dot:
            (out / f"{name}.dot").write_text(to_dot(lpms[j].net, name), encoding="utf-8")
            written.append(f"{name}.dot")
        if args.pnml:
            (out / f"{name}.pnml").write_text(to_pnml(lpms[j].net, name), encoding="utf-8")
            written.append(f"{name}.pnml")
    print(f"wrote {len(written)} files to {out}")
    return 0


def cmd_demo(args) -> int:
    t0 = time.perf_counter()
    db = running_example()
    print(f"running example: {len(db)} sequences, {db.total_events} events, alphabet {''.join(sorted(db.alphabet))}")
    pats = mine_clogsgrow(db, 3)
    print(f"closed repetitive patterns at support >= 3: {len(pats)}")
    lpms = reference_lpms(db)
    for name, l in zip("abc", lpms):
        print(f"  LPM {name}: {l.text}  support={l.support} instances={l.instance_count}")
    print("all three:      " + _summary(evaluate(db, [l.net for l in lpms])))
    for label, sel in (("alignment-based", alignment_based_selection(db, lpms)),
                       ("greedy F-score ", greedy_fscore_selection(db, lpms))):
        names = ",".join("abc"[lpms.index(x)] for x in sel)
        print(f"{label} -> {{{names}}}: " + _summary(evaluate(db, sel.nets)))
    res = mine(db, MineConfig(min_sup=3, exp_max=3, min_confidence=0.4, workers=args.threads))
    picked = greedy_fscore_selection(db, res.lpms[:args.top_k])
    print(f"mined {len(res.lpms)} LPMs ({res.candidates_evaluated} candidates); "
          f"greedy F-score over the top {args.top_k}:")
    for l in picked:
        print(f"  {l.text}  support={l.support}")
    print("selected:       " + _summary(evaluate(db, picked.nets)))
    print(f"done in {time.perf_counter() - t0:.1f}s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes for candidate evaluation (default: all cores)")
    common.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET,
                        help="maximum markings explored by alignment and state-space searches")
    common.add_argument("-v", "--verbose", action="store_true")

    def data(p):
        p.add_argument("--input", required=True)
        p.add_argument("--format", choices=("lines", "csv"), default="lines")

    ap = argparse.ArgumentParser(prog="lpmkit", description="Mine and select local process models.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", parents=[common], help="discover candidate LPMs")
    data(p)
    p.add_argument("--min-sup", type=int, default=3)
    p.add_argument("--exp-max", type=int, default=4)
    p.add_argument("--operators", default=",".join(OPERATORS))
    p.add_argument("--min-confidence", type=float, default=0.0)
    p.add_argument("--max-candidates", type=int, default=MineConfig.max_candidates_evaluated)
    p.add_argument("--top-k", type=int, default=250)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("spm", parents=[common], help="closed repetitive gapped sequential patterns")
    data(p)
    p.add_argument("--min-sup", type=int, default=3)
    p.add_argument("--no-singletons", action="store_true",
                   help="apply the closedness filter to one-activity patterns too")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spm)

    p = sub.add_parser("select", parents=[common], help="select a non-redundant LPM set")
    data(p)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--lpms")
    p.add_argument("--patterns")
    p.add_argument("--remine", action="store_true")
    p.add_argument("--min-dist", type=float, default=0.5)
    p.add_argument("--diversity", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("evaluate", parents=[common], help="coverage, non-redundancy, F-score and complexity")
    data(p)
    p.add_argument("--lpms", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export", parents=[common], help="write LPMs as DOT and/or PNML")
    p.add_argument("--lpms", required=True)
    p.add_argument("--index", type=int)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--pnml", action="store_true")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("demo", parents=[common], help="run the bundled running example end to end")
    p.add_argument("--top-k", type=int, default=40)
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"lpmkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"lpmkit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceError as exc:
        print(f"lpmkit: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (LpmkitError, ValueError) as exc:
        print(f"lpmkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
