#!/usr/bin/env python3
"""
DICOD convolutional sparse coding CLI

Generate synthetic problems, run the coordinate-descent solvers and the
distributed DICOD solver, and reproduce the comparison and speedup benchmarks.

Usage:
    python scripts/cli.py generate --T 6000 --W 20 --K 10 --P 3 --seed 7 --out data/
    python scripts/cli.py solve --signal data/signal.csc1 --dictionary data/dictionary.csc1
    python scripts/cli.py bench compare --out results/trace.csv --svg results/trace.svg
    python scripts/cli.py bench speedup --m 1,2,4,8 --repeats 5
    python scripts/cli.py check h1 --dictionary data/dictionary.csc1
    python scripts/cli.py bound --alpha 0.01 --m 1,2,4,8

Every random path takes --seed; any subcommand accepts --config FILE with
key=value lines that act as defaults for its flags.

Exit status: 0 on success, 1 on configuration or usage errors, 2 when the
DICOD protocol is violated.
"""

import argparse
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from pydantic import ValidationError

from src.bench.bounds import theoretical_speedup_bound
from src.bench.comparison import SOLVER_NAMES, run_comparison, run_solver
from src.bench.config_file import read_config_file
from src.bench.generation import GenerationSpec, generate_instance, resolve_regularization
from src.bench.report import (
    comparison_svg,
    speedup_svg,
    trace_frame,
    write_csv,
    write_svg,
)
from src.bench.speedup import run_speedup_sweep
from src.dicod.update_log import write_update_log
from src.errors import CSCError, ConfigurationError, ProtocolViolation
from src.objective.hypotheses import check_h1
from src.signals.io import read_dictionary, read_signal, write_code_csv, write_csc1

LOG_FORMAT = "%(name)-18s: %(levelname)-8s %(message)s"
KEY_ALIASES = {"T": "n_times", "W": "width", "K": "n_atoms", "P": "n_channels"}


class CLIParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        raise SystemExit(1)


def int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def add_generation_args(parser: argparse.ArgumentParser) -> None:
    defaults = GenerationSpec()
    group = parser.add_argument_group("instance")
    for flag, dest, label in (
        ("--T", "n_times", "Signal length"),
        ("--W", "width", "Atom length"),
        ("--K", "n_atoms", "Atoms"),
        ("--P", "n_channels", "Channels"),
    ):
        default = getattr(defaults, dest)
        group.add_argument(flag, dest=dest, type=int, help=f"{label} (default: {default})")
    group.add_argument("--rho", type=float, help=f"Activation rate (default: {defaults.rho})")
    group.add_argument("--sigma", type=float, help=f"Activation std (default: {defaults.sigma})")
    group.add_argument("--noise-std", type=float, help=f"Noise std (default: {defaults.noise_std})")
    group.add_argument("--reg", type=float, help=f"Regularization lambda (default: {defaults.reg})")
    group.add_argument(
        "--no-auto-reg", action="store_true", help="Keep lambda even when it is degenerate"
    )
    group.add_argument(
        "--paper-scale",
        "--full-scale",
        dest="full_scale",
        action="store_true",
        help="Full-size instance (T=600W, W=200, K=25, P=7)",
    )
    group.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")


def generation_spec(args) -> GenerationSpec:
    fields = ("n_times", "width", "n_atoms", "n_channels", "rho", "sigma", "noise_std", "reg")
    overrides = {f: getattr(args, f) for f in fields if getattr(args, f) is not None}
    overrides["seed"] = args.seed
    if args.no_auto_reg:
        overrides["auto_reg"] = False
    if args.full_scale:
        return GenerationSpec.full_scale(**overrides)
    return GenerationSpec(**overrides)


def add_solver_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver")
    group.add_argument("--tol", type=float, default=1e-6, help="Stopping tolerance")
    group.add_argument("--max-iter", type=int, default=1_000_000, help="Iteration budget")
    group.add_argument("--workers", type=int, default=4, help="DICOD workers M (default: 4)")
    group.add_argument("--segments", type=int, help="SeqDICOD segments (default: L / 10W)")
    group.add_argument(
        "--mode", choices=["stepped", "free-running"], default="stepped", help="DICOD runtime"
    )
    group.add_argument("--d-max", type=int, default=1, help="Stepped max message delay")
    group.add_argument("--log-every", type=int, default=100, help="Cost sampling stride")
    group.add_argument("--prox-iters", type=int, default=2000, help="FISTA iterations")


def solver_options(args) -> dict:
    return dict(
        n_workers=args.workers,
        n_segments=args.segments,
        seed=args.seed,
        log_every=args.log_every,
        prox_iters=args.prox_iters,
        mode=args.mode,
        d_max=args.d_max,
    )


def build_parser() -> tuple[CLIParser, dict[str, argparse.ArgumentParser]]:
    parser = CLIParser(
        description="Convolutional sparse coding with (distributed) coordinate descent",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s generate --T 4000 --W 20 --K 5 --P 3 --seed 7 --out data/
  %(prog)s solve --signal data/signal.csc1 --dictionary data/dictionary.csc1 --solver dicod
  %(prog)s bench compare --out results/trace.csv
  %(prog)s bound --alpha 0 --m 4
        """,
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    leaves: dict[str, argparse.ArgumentParser] = {}

    gen = commands.add_parser("generate", help="Write a synthetic instance as CSC1 files")
    add_generation_args(gen)
    gen.add_argument("--out", type=Path, default=Path("."), help="Output directory")
    leaves["generate"] = gen

    solve = commands.add_parser("solve", help="Run one solver and write its trace")
    solve.add_argument("--signal", type=Path, help="Signal (CSC1 or CSV)")
    solve.add_argument("--dictionary", type=Path, help="Dictionary (CSC1)")
    solve.add_argument("--solver", choices=SOLVER_NAMES, default="greedy")
    solve.add_argument("--reg", type=float, default=1.0, help="Regularization lambda")
    solve.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    add_solver_args(solve)
    solve.add_argument("--trace", type=Path, help="Trace CSV (default: stdout)")
    solve.add_argument("--code", type=Path, help="Write the code (.csv or CSC1)")
    solve.add_argument("--update-log", type=Path, help="DICOD update log CSV")
    leaves["solve"] = solve

    bench = commands.add_parser("bench", help="Benchmarks")
    bench_commands = bench.add_subparsers(dest="bench_command", required=True)
    compare = bench_commands.add_parser("compare", help="Cost trajectories of several solvers")
    add_generation_args(compare)
    add_solver_args(compare)
    compare.add_argument(
        "--solvers", default=",".join(SOLVER_NAMES), help="Comma-separated solver names"
    )
    compare.add_argument("--out", type=Path, default=Path("trace.csv"), help="Trace CSV")
    compare.add_argument("--svg", type=Path, help="Optional SVG plot")
    leaves["bench compare"] = compare

    speedup = bench_commands.add_parser("speedup", help="DICOD speedup sweep over M")
    add_generation_args(speedup)
    speedup.add_argument("--m", type=int_list, default=[1, 2, 4], help="Worker counts")
    speedup.add_argument("--repeats", type=int, default=3, help="Runs per M (default: 3)")
    speedup.add_argument("--tol", type=float, default=1e-6)
    speedup.add_argument("--max-iter", type=int, default=1_000_000)
    speedup.add_argument(
        "--mode", choices=["stepped", "free-running"], default="free-running"
    )
    speedup.add_argument("--out", type=Path, default=Path("speedup.csv"), help="Speedup CSV")
    speedup.add_argument("--svg", type=Path, help="Optional SVG plot")
    leaves["bench speedup"] = speedup

    check = commands.add_parser("check", help="Hypothesis checks")
    check_commands = check.add_subparsers(dest="check_command", required=True)
    h1 = check_commands.add_parser("h1", help="Dictionary coherence report")
    h1.add_argument("--dictionary", type=Path, help="Dictionary (CSC1)")
    h1.add_argument("--tol", type=float, default=1e-12)
    leaves["check h1"] = h1

    bound = commands.add_parser("bound", help="Theoretical speedup bound")
    bound.add_argument("--alpha", type=float_list, help="alpha = W/T values")
    bound.add_argument("--m", type=int_list, help="Worker counts")
    leaves["bound"] = bound

    for leaf in leaves.values():
        leaf.add_argument("--config", type=Path, help="key=value defaults file")
    return parser, leaves


def leaf_name(args) -> str:
    for sub in ("bench_command", "check_command"):
        if getattr(args, sub, None):
            return f"{args.command} {getattr(args, sub)}"
    return args.command


def apply_config_file(leaf: argparse.ArgumentParser, path: Path) -> None:
    """Install file values as the leaf parser's defaults so flags still win"""
    known = {a.dest: a for a in leaf._actions}
    defaults = {}
    for key, value in read_config_file(path).items():
        dest = KEY_ALIASES.get(key, key)
        if dest not in known or dest in ("config", "help"):
            raise ConfigurationError(f"{path}: unknown key {key!r}")
        if isinstance(known[dest], argparse._StoreTrueAction):
            defaults[dest] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[dest] = value
    leaf.set_defaults(**defaults)


def require(args, *names: str) -> None:
    """Flags that may come from the command line or from --config"""
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigurationError(f"missing required option(s): {', '.join(missing)}")


def run_generate(args) -> int:
    spec = generation_spec(args)
    signal, dictionary, z_true = generate_instance(spec)
    args.out.mkdir(parents=True, exist_ok=True)
    write_csc1(args.out / "signal.csc1", signal)
    write_csc1(args.out / "dictionary.csc1", dictionary)
    write_csc1(args.out / "code_true.csc1", z_true)
    reg = resolve_regularization(spec, signal, dictionary)
    print(f"Wrote {args.out}/signal.csc1, dictionary.csc1, code_true.csc1")
    print(f"T={spec.n_times} W={spec.width} K={spec.n_atoms} P={spec.n_channels}")
    print(f"activations={z_true.nnz()} lambda={reg:.6g}")
    return 0


def run_solve(args) -> int:
    require(args, "signal", "dictionary")
    signal = read_signal(args.signal)
    dictionary = read_dictionary(args.dictionary)
    code, summary = run_solver(
        args.solver,
        signal,
        dictionary,
        args.reg,
        tol=args.tol,
        max_iter=args.max_iter,
        **solver_options(args),
    )
    frame = trace_frame(args.solver, summary.trace)
    if args.trace:
        write_csv(frame, args.trace)
    else:
        frame.to_csv(sys.stdout, index=False, float_format="%.17g")
    if args.code:
        if args.code.suffix == ".csv":
            write_code_csv(args.code, code)
        else:
            write_csc1(args.code, code)
    if args.update_log:
        if args.solver != "dicod":
            raise ConfigurationError("--update-log needs --solver dicod")
        write_update_log(args.update_log, summary.log)

    status = "converged" if summary.converged else "not converged"
    print(
        f"{args.solver}: {status}, {summary.trace.iterations} updates, "
        f"cost {summary.final_cost:.10g}",
        file=sys.stderr,
    )
    return 0


def run_bench_compare(args) -> int:
    spec = generation_spec(args)
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    report = run_comparison(
        spec, solvers, tol=args.tol, max_iter=args.max_iter, **solver_options(args)
    )
    write_csv(report.trajectory_frame(), args.out)
    if args.svg:
        write_svg(comparison_svg(report), args.svg)

    print(f"{'solver':<12} {'updates':>10} {'cost':>18}  converged")
    for s in report.summaries:
        print(f"{s.solver:<12} {s.trace.iterations:>10} {s.final_cost:>18.10g}  {s.converged}")
    for warning in report.warnings:
        print(f"Warning: {warning}")
    return 0


def run_bench_speedup(args) -> int:
    spec = generation_spec(args)
    report = run_speedup_sweep(
        spec, args.m, repeats=args.repeats, tol=args.tol, mode=args.mode, max_iter=args.max_iter
    )
    write_csv(report.speedup_frame(), args.out)
    if args.svg:
        write_svg(speedup_svg(report), args.svg)

    print(f"alpha = W/T = {spec.alpha:.4g}")
    print(f"{'M':>4} {'median speedup':>15} {'bound':>12}")
    for M in sorted({r.M for r in report.speedups}):
        bound = theoretical_speedup_bound(M, spec.alpha).value
        print(f"{M:>4} {report.median_speedup(M):>15.3f} {bound:>12.4g}")
    for warning in report.warnings:
        print(f"Warning: {warning}")
    return 0


def run_check_h1(args) -> int:
    require(args, "dictionary")
    report = check_h1(read_dictionary(args.dictionary), tol=args.tol)
    k0, k1, lag, value = report.worst
    print(f"H1 {'holds' if report.holds else 'violated'}")
    print(f"max |C| = {abs(value):.12g} at k0={k0} k1={k1} lag={lag}")
    return 0


def run_bound(args) -> int:
    require(args, "alpha", "m")
    if len(args.alpha) == 1 and len(args.m) == 1:
        print(f"{theoretical_speedup_bound(args.m[0], args.alpha[0]).value:g}")
        return 0
    print("M,alpha,bound,expansion,hypothesis_holds")
    for alpha in args.alpha:
        for M in args.m:
            b = theoretical_speedup_bound(M, alpha)
            print(f"{M},{alpha:g},{b.value:.10g},{b.expansion:.10g},{b.hypothesis_holds}")
    return 0


HANDLERS = {
    "generate": run_generate,
    "solve": run_solve,
    "bench compare": run_bench_compare,
    "bench speedup": run_bench_speedup,
    "check h1": run_check_h1,
    "bound": run_bound,
}


def main(argv: list[str] | None = None) -> int:
    parser, leaves = build_parser()
    args = parser.parse_args(argv)
    name = leaf_name(args)

    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format=LOG_FORMAT,
    )

    try:
        if args.config is not None:
            apply_config_file(leaves[name], args.config)
            args = parser.parse_args(argv)
        return HANDLERS[name](args)
    except ProtocolViolation as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except (CSCError, ValidationError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
