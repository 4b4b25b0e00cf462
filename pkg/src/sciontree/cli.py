"""Command line entry point: ``sciontree {solve,verify,scale,gen}``.

Exit codes: 0 success, 2 usage or configuration error, 3 unreadable or
malformed instance, 4 verification mismatch, 5 backend failure.  The default
thread budget comes from ``SCIONTREE_THREADS`` (1 when unset).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .core import Permutation, reported_coords
from .engine import THREADS_ENV, ConfigurationError, EngineConfig, EngineError, default_thread_budget, run
from .io import ParseError, generate_text, parse_instance, serialize_images
from .scalarizer import BackendError
from .scaling import records_to_csv, scale_instance, thread_ladder
from .warmstart import run_cascade

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_MISMATCH = 4
EXIT_BACKEND = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _order(text: str) -> Permutation:
    try:
        return Permutation.from_one_based([int(t) for t in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad ordering {text!r}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sciontree", description="Exact nondominated sets of multi-objective integer problems.",
                epilog=f"Default thread budget: ${THREADS_ENV} or 1.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="compute the nondominated set of an instance file")
    s.add_argument("file")
    s.add_argument("--threads", type=_positive, default=None)
    s.add_argument("--warmstart-cascade", action="store_true",
                   help="compute the nested level sets first and skip provably infeasible queries")
    s.add_argument("--order", type=_order, default=None, help="objective priority, e.g. 3,1,2")
    s.add_argument("--out", default=None, help="write the result here instead of stdout")
    s.add_argument("--format", choices=("explicit", "knapsack", "tinyilp"), default=None)

    v = sub.add_parser("verify", help="solve and cross-check against brute force")
    v.add_argument("files", nargs="+")
    v.add_argument("--threads", type=_positive, default=None)
    v.add_argument("--no-cascade", action="store_true")

    c = sub.add_parser("scale", help="time one instance over a thread ladder, CSV to stdout")
    c.add_argument("file")
    c.add_argument("--max-threads", type=_positive, default=8)
    c.add_argument("--repeats", type=_positive, default=1)
    c.add_argument("--out", default=None)

    g = sub.add_parser("gen", help="write a seeded random instance")
    g.add_argument("kind", choices=("kp", "explicit", "ilp"))
    g.add_argument("k", type=int)
    g.add_argument("n", type=int)
    g.add_argument("seed", type=int)
    g.add_argument("--general-position", action="store_true")
    g.add_argument("--out", default=None)
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_thread_budget()


def cmd_solve(args) -> int:
    instance = parse_instance(args.file, args.format)
    threads = _threads(args)
    if args.warmstart_cascade:
        if args.order is not None:
            raise ConfigurationError("--order cannot be combined with --warmstart-cascade")
        casc = run_cascade(instance, thread_budget=threads)
        report = casc.report
        extra = {"skipped_infeasible": casc.skipped_infeasible,
                 "levels": " ".join(str(len(lv)) for lv in casc.ladder.levels)}
    else:
        report = run(instance, config=EngineConfig(thread_budget=threads, order=args.order))
        extra = {}
    meta = {
        "nondominated": len(report.nondominated),
        "scalarizations_solved": report.scalarizations_solved,
        "infeasible": report.infeasible_count,
        "backend_calls": report.backend_calls,
        "threads": threads,
        **extra,
        "wall_time_seconds": f"{report.wall_time.get('total', 0.0):.6f}",
    }
    images = [reported_coords(instance, im) for im in report.nondominated]
    _emit(serialize_images(images, instance.k, meta), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import verify_instance

    threads = _threads(args)
    status = EXIT_OK
    for path in args.files:
        instance = parse_instance(path)
        res = verify_instance(instance, threads, cascade=not args.no_cascade)
        verdict = "ok" if res.ok else "MISMATCH"
        print(f"{path}: {verdict} ({len(res.checks)} checks, |Y_N|={res.expected_size},"
              f" scalarizations={res.report.scalarizations_solved})")
        for m in res.mismatches:
            print(f"  {m}")
        for note in res.notes:
            print(f"  note: {note}")
        if not res.ok:
            status = EXIT_MISMATCH
    return status


def cmd_scale(args) -> int:
    instance = parse_instance(args.file)
    records = scale_instance(instance, Path(args.file).stem, thread_ladder(args.max_threads),
                             repeats=args.repeats)
    _emit(records_to_csv(records), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        text = generate_text(args.kind, args.k, args.n, args.seed, general_position=args.general_position) \
            if args.kind == "explicit" else generate_text(args.kind, args.k, args.n, args.seed)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "scale": cmd_scale, "gen": cmd_gen}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"sciontree: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BackendError, EngineError) as exc:
        print(f"sciontree: backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (ConfigurationError, ValueError) as exc:
        print(f"sciontree: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
