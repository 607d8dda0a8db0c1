"""``opg-solve`` command line."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import bench
from .diagram import operational_semantics, shortcut
from .dsl import format_source, parse_source
from .errors import OpgError
from .generate import GenSpec, generate_random
from .opg import validate_opg
from .oracle import DEFAULT_BOUND
from .report import Mode, emit_dot, emit_json, run_solve


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def cmd_solve(args) -> int:
    source = parse_source(_read(args.file))
    diagram = args.diagram
    if diagram is None:
        if len(source.diagrams) != 1:
            raise OpgError("--diagram is required when the file defines zero or several diagrams")
        diagram = next(iter(source.diagrams))
    report = run_solve(source, diagram, args.mode, pruning=args.pruning,
                       oracle_bound=args.oracle_bound, jobs=args.jobs)
    # keep stdout parseable when a machine-readable output goes there
    quiet = "-" in (args.json, args.dot, args.dot_shortcut)
    for e in report.entrances if not quiet else ():
        front = ", ".join(repr(r) for r in e.front.canonical())
        print(f"{e.entrance}: {e.classification.value}  {{{front}}}")
    if args.stats:
        for k, v in report.stats.items():
            print(f"  {k}: {v}", file=sys.stderr)
    if args.json:
        _write(args.json, emit_json(report))
    if args.dot or args.dot_shortcut:
        game = operational_semantics(source.diagrams[diagram])
        if args.dot:
            _write(args.dot, emit_dot(game, diagram))
        if args.dot_shortcut:
            _write(args.dot_shortcut, emit_dot(shortcut(game, report.fronts), f"shortcut {diagram}"))
    return 0


def cmd_validate(args) -> int:
    source = parse_source(_read(args.file))
    bad = 0
    for name, a in source.opgs.items():
        violations = validate_opg(a, atomic=True)
        if violations:
            bad += 1
            for v in violations:
                print(f"{name}: {v}")
        else:
            print(f"{name}: ok ({a.type})")
    for name in source.diagrams:
        print(f"diagram {name}: ok")
    return 1 if bad else 0


def cmd_bench(args) -> int:
    spec = bench.load_bench_spec(args.specfile)
    rows = bench.run_bench(spec, seed=args.seed, timeout_ms=args.timeout_ms)
    text = bench.rows_to_csv(rows)
    if args.csv:
        _write(args.csv, text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    bench.check_rows(rows)
    return 0


def cmd_generate(args) -> int:
    spec = json.loads(_read(args.specfile))
    if args.seed is not None:
        spec["seed"] = args.seed
    sys.stdout.write(format_source(generate_random(GenSpec.from_dict(spec))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opg-solve", description="Pareto fronts of open parity games")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve every entrance of a diagram")
    p.add_argument("file")
    p.add_argument("--diagram")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.COMPOSITIONAL.value)
    p.add_argument("--pruning", action="store_true", help="skip queries above a winning one")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--dot", metavar="OUT", help="DOT of the composite game")
    p.add_argument("--dot-shortcut", metavar="OUT", help="DOT of the composite's shortcut game")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--oracle-bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a benchmark spec and write a CSV table")
    p.add_argument("specfile")
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--seed", type=int)
    p.add_argument("--timeout-ms", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="check every open game in a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="print a random source file from a JSON generator spec")
    p.add_argument("specfile")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OpgError, OSError, KeyError) as exc:
        print(f"opg-solve: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
