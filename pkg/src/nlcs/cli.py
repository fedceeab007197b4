"""Command-line interface.

Exit codes: 10 sat, 20 unsat, 30 unknown, 1 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .constraint import InputError, parse_file
from .decision import Status
from .poly import ParseError
from .solver import ENGINES, decide, find_conflict

log = logging.getLogger("nlcs")

CSV_COLUMNS = ["file", "n_constraints", "n_vars", "engine", "status", "conflict_size", "t_decide_ms",
               "t_conflict_ms", "cells_or_branches", "matrix_rows", "matrix_cols"]
COMPARE_COLUMNS = ["t_plain_ms", "t_total_ms"]
PROBLEM_SUFFIXES = (".nlcs", ".smt2")
DEFAULT_BUDGET = 200_000
EXIT_INPUT = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _budget(value) -> int | None:
    if value is not None:
        return value if value > 0 else None
    env = os.environ.get("NLCS_BUDGET")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InputError(f"NLCS_BUDGET must be an integer, got {env!r}")
        return n if n > 0 else None
    return DEFAULT_BUDGET


def _order(text: str | None):
    if not text:
        return None
    return [t for t in text.replace(",", " ").split() if t]


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("file")
    p.add_argument("--engine", choices=ENGINES, default="auto",
                   help="auto = virtual substitution with CAD fallback (default)")
    p.add_argument("--format", choices=("native", "smt2"), default=None,
                   help="input format (default: by extension, .smt2 or native)")
    p.add_argument("--var-order", default=None, help="comma separated variable names")
    p.add_argument("--budget", type=int, default=None,
                   help=f"sample point / branch budget (default $NLCS_BUDGET or {DEFAULT_BUDGET}; 0 = none)")
    p.add_argument("--partial-cad", type=_on_off, default=True, metavar="on|off",
                   help="prune CAD stacks above falsified cells (default on)")
    p.add_argument("--hybrid", action="store_true",
                   help="delegate degree > 2 branches to CAD one at a time")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nlcs", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser,
                            metavar="{decide,conflict,bench,gen-corpus}")

    d = sub.add_parser("decide", help="decide satisfiability")
    _common(d)
    d.add_argument("--json", action="store_true")

    c = sub.add_parser("conflict", help="decide and report a conflict set (JSON)")
    _common(c)
    c.add_argument("--cover", choices=("exact", "greedy"), default="exact")
    c.add_argument("--minimize", action="store_true", help="drop-one minimisation after covering")
    c.add_argument("--verify", action="store_true", help="re-decide the conflict subsystem")
    c.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")

    b = sub.add_parser("bench", help="run every .nlcs/.smt2 file of a directory, CSV output")
    b.add_argument("dir")
    b.add_argument("--engine", choices=ENGINES, default="auto")
    b.add_argument("--budget", type=int, default=None)
    b.add_argument("--cover", choices=("exact", "greedy"), default="exact")
    b.add_argument("--partial-cad", type=_on_off, default=True, metavar="on|off")
    b.add_argument("--no-conflict", action="store_true", help="decide only")
    b.add_argument("--compare", action="store_true", help="also time a plain decide run")
    b.add_argument("--no-timing", action="store_true", help="leave timing columns empty (reproducible CSV)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")

    g = sub.add_parser("gen-corpus", help="write the bundled desk corpus")
    g.add_argument("dir")
    g.add_argument("--seed", type=int, default=2024)
    g.add_argument("--size", type=int, default=40)

    r = sub.add_parser("reduction-check")
    r.add_argument("--max-size", type=int, default=3)
    r.add_argument("--random", type=int, default=0, help="additional random 4x4 matrices")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--engine", choices=ENGINES, default="cad")
    # hidden from the subcommand list
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "reduction-check"]
    return ap


# ---------------------------------------------------------------------------
# commands

def _load(args):
    return parse_file(args.file, args.format)


def cmd_decide(args) -> int:
    sys_ = _load(args)
    d = decide(sys_, args.engine, _budget(args.budget), args.partial_cad, args.hybrid, _order(args.var_order))
    if args.json:
        out = {"status": d.status.value, "engine": d.engine}
        if d.status is Status.SAT:
            out["witness"] = d.witness_json(sys_.variables)
        if d.reason:
            out["reason"] = d.reason
        print(json.dumps(out, sort_keys=True))
    else:
        print(d.status.value)
        if d.witness is not None:
            for name, val in d.witness_json(sys_.variables).items():
                print(f"{name} = {_describe(name, val)}  (~{val['approx']:.12g})")
        elif d.reason:
            print(f"reason: {d.reason}")
    return d.status.exit_code


def _describe(name: str, val: dict) -> str:
    if "value" in val:
        return val["value"]
    from .poly import MultiPoly

    alg = val["algebraic"]
    poly = MultiPoly.from_univariate([int(c) if "/" not in c else c for c in alg["poly"]])
    return f"root of {poly.to_str([name])} in ({alg['lo']}, {alg['hi']})"


def cmd_conflict(args) -> int:
    sys_ = _load(args)
    r = find_conflict(sys_, args.engine, args.cover, args.partial_cad, args.verify, args.minimize,
                      _budget(args.budget), args.hybrid, _order(args.var_order))
    status = r.decision.status
    if status is Status.UNSAT:
        cs, M = r.conflict, r.matrix
        out = {"status": "unsat", "conflict": list(cs.ids), "method": cs.method.value,
               "verified": cs.verified is True,
               "matrix": {"rows": M.n_rows_raw, "cols": len(M.columns), "mandatory": sorted(M.mandatory)}}
        if args.verify and cs.verified is None:
            out["verification"] = "inconclusive"
        if args.minimize:
            out["minimality_certified"] = bool(cs.certified_minimal)
    else:
        out = {"status": status.value, "conflict": None}
        if r.decision.reason:
            out["reason"] = r.decision.reason
    print(json.dumps(out, sort_keys=True))
    return status.exit_code


def _bench_one(task):
    path, engine, budget, cover, partial, want_conflict, compare = task
    rec = {k: "" for k in CSV_COLUMNS + COMPARE_COLUMNS}
    rec["file"] = path.name
    rec["engine"] = engine
    try:
        sys_ = parse_file(path)
    except (InputError, ParseError, OSError, UnicodeDecodeError) as e:
        log.warning("skipping %s: %s", path, e)
        rec["status"] = "unknown"
        return rec
    rec["n_constraints"] = len(sys_)
    rec["n_vars"] = sys_.nvars
    if compare:
        t = time.perf_counter()
        decide(sys_, engine, budget, partial)
        rec["t_plain_ms"] = (time.perf_counter() - t) * 1e3
    if want_conflict:
        r = find_conflict(sys_, engine, cover, partial, budget=budget)
    else:
        from .solver import ConflictResult

        t = time.perf_counter()
        d = decide(sys_, engine, budget, partial)
        r = ConflictResult(d, t_decide_ms=(time.perf_counter() - t) * 1e3)
    d = r.decision
    rec["status"] = d.status.value
    rec["t_decide_ms"] = r.t_decide_ms
    rec["t_conflict_ms"] = r.t_conflict_ms if r.conflict is not None else ""
    rec["cells_or_branches"] = d.stats.get("cells", d.stats.get("branches", ""))
    if r.conflict is not None:
        rec["conflict_size"] = len(r.conflict)
        rec["matrix_rows"] = r.matrix.n_rows_raw
        rec["matrix_cols"] = len(r.matrix.columns)
    if compare:
        rec["t_total_ms"] = r.t_decide_ms + (r.t_conflict_ms if r.conflict is not None else 0.0)
    return rec


def run_bench(directory, engine="auto", budget=DEFAULT_BUDGET, cover="exact", partial=True,
              conflict=True, compare=False, timing=True, jobs=1) -> str:
    d = Path(directory)
    if not d.is_dir():
        raise InputError(f"{directory}: not a directory")
    files = sorted((p for p in d.iterdir() if p.is_file() and p.suffix in PROBLEM_SUFFIXES),
                   key=lambda p: p.name)
    tasks = [(p, engine, budget, cover, partial, conflict, compare) for p in files]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_bench_one, tasks))
    else:
        records = [_bench_one(t) for t in tasks]
    columns = CSV_COLUMNS + (COMPARE_COLUMNS if compare else [])
    timed = {"t_decide_ms", "t_conflict_ms", "t_plain_ms", "t_total_ms"}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        row = []
        for col in columns:
            v = rec[col]
            if col in timed:
                v = "" if (not timing or v == "") else f"{v:.3f}"
            row.append(v)
        w.writerow(row)
    return buf.getvalue()


def cmd_bench(args) -> int:
    text = run_bench(args.dir, args.engine, _budget(args.budget), args.cover, args.partial_cad,
                     not args.no_conflict, args.compare, not args.no_timing, max(1, args.jobs))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen_corpus(args) -> int:
    from .gen import write_corpus

    for p in write_corpus(args.dir, args.seed, args.size):
        print(p)
    return 0


def cmd_reduction_check(args) -> int:
    import itertools
    import random

    from .reduction import roundtrip_check

    mats = []
    for k in range(1, args.max_size + 1):
        for m in range(1, args.max_size + 1):
            for bits in itertools.product((0, 1), repeat=k * m):
                M = [list(bits[r * m:(r + 1) * m]) for r in range(k)]
                if all(any(r) for r in M):
                    mats.append(M)
    rng = random.Random(args.seed)
    for _ in range(args.random):
        M = [[rng.randint(0, 1) for _ in range(4)] for _ in range(4)]
        for r in M:
            if not any(r):
                r[rng.randrange(4)] = 1
        mats.append(M)
    bad = [M for M in mats if not roundtrip_check(M, args.engine)]
    for M in bad:
        print("mismatch", M)
    print(f"{len(mats) - len(bad)}/{len(mats)} matrices round-trip")
    return 0 if not bad else EXIT_INPUT


COMMANDS = {"decide": cmd_decide, "conflict": cmd_conflict, "bench": cmd_bench,
            "gen-corpus": cmd_gen_corpus, "reduction-check": cmd_reduction_check}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ParseError as e:
        print(f"{getattr(args, 'file', '')}:{e.line}:{e.col}: {e.msg}", file=sys.stderr)
    except InputError as e:
        print(f"{getattr(args, 'file', '')}: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
