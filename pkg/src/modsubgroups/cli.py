"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 overflow or internal invariant failure.
Data goes to standard output or ``--out``; progress goes to standard error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from typing import Sequence

from . import pipeline
from .trees import aut_group, canonical_code, enumerate_trees

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jobs(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modsub", description="Finite-index subgroups of PSL2(Z) via Kulkarni diagrams.")
    p.add_argument("-v", "--verbose", action="store_true", help="progress and timing on stderr")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    t = sub.add_parser("trees", help="list bi-valent trees Bi(M, n)")
    t.add_argument("--internal", type=int, required=True, metavar="M")
    t.add_argument("--valence", type=int, default=3)

    e = sub.add_parser("enumerate", help="enumerate subgroups of one index")
    e.add_argument("--index", type=int, required=True, action="append", metavar="D")
    e.add_argument("--mode", choices=pipeline.MODES, default="sl2")
    e.add_argument("--out", metavar="PATH")
    e.add_argument("--format", dest="fmt", choices=("jsonl", "csv"), default="jsonl")
    e.add_argument("--jobs", type=_jobs, default=None, help=f"worker processes (default ${pipeline.JOBS_ENV} or 1)")
    e.add_argument("--convention", choices=("table", "isomorphism"), default="table")
    e.add_argument("--genus", type=int, default=None, help="keep only this genus")

    tb = sub.add_parser("table1", help="diagram, SL2 and GL2 class counts per index")
    tb.add_argument("--max", type=int, required=True, dest="max_index", metavar="D")
    tb.add_argument("--min", type=int, default=2, dest="min_index", metavar="D")
    tb.add_argument("--jobs", type=_jobs, default=None)

    for name, helptext in (
        ("describe", "full report for one subgroup"),
        ("member", "membership of a matrix"),
        ("congruence", "Hsu congruence test"),
        ("overgroups", "block systems with a given number of blocks"),
    ):
        q = sub.add_parser(name, help=helptext)
        q.add_argument("--key", required=True, metavar="K")
        q.add_argument("--db", metavar="PATH", help="JSONL file written by enumerate")
        if name == "member":
            q.add_argument("--matrix", required=True, metavar='"[[a,b],[c,d]]"')
        if name == "overgroups":
            q.add_argument("--blocks", type=int, required=True, metavar="B")
    return p


def _resolve_jobs(jobs: int | None) -> int:
    if jobs is not None:
        return jobs
    try:
        return pipeline.default_jobs()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _lookup(args: argparse.Namespace):
    try:
        return pipeline.find_record(args.key, args.db)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    except OSError as exc:
        raise UsageError(str(exc)) from None


def run(args: argparse.Namespace) -> int:
    out = sys.stdout
    if args.cmd == "trees":
        if args.internal < 1 or args.valence < 2:
            raise UsageError("need --internal >= 1 and --valence >= 2")
        for T in enumerate_trees(args.internal, args.valence):
            G = aut_group(T)
            out.write(f"{canonical_code(T)}\tedges={T.edges()}\t|Aut|={G.order}\n")
        return EXIT_OK
    if args.cmd == "enumerate":
        try:
            cfg = pipeline.RunConfig(
                tuple(args.index),
                mode=args.mode,
                jobs=_resolve_jobs(args.jobs),
                out=args.out,
                fmt=args.fmt,
                convention=args.convention,
                genus=args.genus,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        records = pipeline.enumerate_subgroups(cfg)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                n = pipeline.write_records(records, fh, cfg.fmt)
        else:
            n = pipeline.write_records(records, out, cfg.fmt)
        logging.getLogger(__name__).info("wrote %d records", n)
        return EXIT_OK
    if args.cmd == "table1":
        if args.max_index < 2:
            raise UsageError("--max must be at least 2")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["index", "diagrams", "sl2", "gl2"])
        for d in range(max(2, args.min_index), args.max_index + 1):
            # one row at a time so long runs show progress
            w.writerow(pipeline.table1(d, _resolve_jobs(args.jobs), min_index=d)[0])
            out.flush()
        return EXIT_OK
    r = _lookup(args)
    if args.cmd == "describe":
        out.write(pipeline.describe(r) + "\n")
    elif args.cmd == "member":
        try:
            ans = pipeline.member_query(r, args.matrix)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out.write(("true" if ans else "false") + "\n")
    elif args.cmd == "congruence":
        out.write(("true" if pipeline.congruence_query(r) else "false") + "\n")
    elif args.cmd == "overgroups":
        try:
            systems = pipeline.overgroups(r, args.blocks)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for part in systems:
            out.write(" ".join("{" + ",".join(map(str, b)) + "}" for b in part) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(message)s",
    )
    try:
        return run(args)
    except UsageError as exc:
        print(f"modsub: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OverflowError, RuntimeError) as exc:
        print(f"modsub: internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
