"""Command-line interface: generate / solve / oracle / bench.

Exit codes: 0 success, 1 usage error, 2 I/O or validation error.
Diagnostics go to stderr; results to stdout.
"""

import argparse
import sys
from pathlib import Path

from .bench import emit_csv, emit_markdown, format_cents, load_suite, run_bench
from .gvns import SCHEMES, SolverConfig, solve_scheme
from .model import (GeneratorConfig, InstanceFormatError, generate_instance,
                    parse_instance, serialize_instance, validate_instance)
from .oracle import enumerate_optimal


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the CLI contract reserves 2 for I/O errors
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="remlot",
                     description="GVNS solver for lot sizing with remanufacturing")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic instance file")
    gen.add_argument("--products", type=int, required=True)
    gen.add_argument("--periods", type=int, required=True)
    gen.add_argument("--demand-max", type=int, default=100)
    gen.add_argument("--return-ratio", type=float, default=0.5)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="solve one instance with one scheme")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--scheme", choices=SCHEMES, required=True)
    solve.add_argument("--time-limit", type=float, required=True,
                       help="wall-clock budget in seconds")
    solve.add_argument("--workers", type=int, default=2)
    solve.add_argument("--parallelism", type=int, default=4)
    solve.add_argument("--kmax", type=int, default=5)
    solve.add_argument("--kmax-vnd", type=int, default=4)
    solve.add_argument("--seed", type=int, required=True)

    orc = sub.add_parser("oracle", help="exact optimum by pattern enumeration")
    orc.add_argument("--instance", required=True)

    bench = sub.add_parser("bench", help="run a benchmark suite")
    bench.add_argument("--suite", required=True)
    bench.add_argument("--out-csv", required=True)
    bench.add_argument("--out-md", default=None)
    return parser


def _read_instance(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def _cmd_generate(args):
    config = GeneratorConfig(products=args.products, periods=args.periods,
                             demand_max=args.demand_max,
                             return_ratio=args.return_ratio, seed=args.seed)
    inst = generate_instance(config)
    violations = validate_instance(inst)
    if violations:
        raise ValueError("generated instance invalid: " + "; ".join(violations))
    Path(args.out).write_text(serialize_instance(inst))
    print(f"wrote {args.out} ({inst.products} products, {inst.periods} periods)")
    return 0


def _cmd_solve(args):
    inst = _read_instance(args.instance)
    config = SolverConfig(t_max=args.time_limit, k_max=args.kmax,
                          k_vnd_max=args.kmax_vnd, workers=args.workers,
                          parallelism=args.parallelism, scheme=args.scheme,
                          seed=args.seed)
    result = solve_scheme(inst, config)
    print(f"objective {format_cents(result.cost)}")
    print(f"objective_cents {result.cost}")
    print(f"wall_s {result.wall_s:.3f}")
    print(f"rounds {result.rounds}")
    return 0


def _cmd_oracle(args):
    inst = _read_instance(args.instance)
    cost, _ = enumerate_optimal(inst)
    print(f"optimal {format_cents(cost)}")
    print(f"optimal_cents {cost}")
    return 0


def _cmd_bench(args):
    suite = load_suite(args.suite)
    report = run_bench(suite)
    Path(args.out_csv).write_text(emit_csv(report))
    print(f"wrote {args.out_csv} ({len(report.rows)} rows)")
    if args.out_md:
        Path(args.out_md).write_text(emit_markdown(report))
        print(f"wrote {args.out_md}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "oracle": _cmd_oracle,
    "bench": _cmd_bench,
}


def cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"remlot: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:   # --help and friends
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (InstanceFormatError, ValueError, OSError) as exc:
        print(f"remlot: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
