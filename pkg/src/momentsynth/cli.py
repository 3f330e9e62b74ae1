"""Command-line front end: solve, verify, random, batch.

Exit codes: 0 success, 1 parse or IO error, 2 unsolvable input,
3 synthesis convergence failure, 4 verification residual above tolerance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .documents import (
    measure_from_doc,
    measure_to_doc,
    problem_from_doc,
    problem_to_doc,
    read_doc,
    report_to_doc,
    write_doc,
)
from .errors import ConvergenceFailure, Unsolvable
from .synthesis import SolverConfig, synthesize
from .verify import random_instance, report


def _config_from_args(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        tol=args.tol,
        grid=args.grid,
        margin=args.margin,
        seed=args.seed,
        normalize=False if args.no_normalize else None,
        box_degree=args.box_degree,
    )


def _report_path(output: Path) -> Path:
    return output.with_suffix(".report")


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        spec = problem_from_doc(read_doc(Path(args.input)))
        config = _config_from_args(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        measure = synthesize(spec, config)
    except Unsolvable as exc:
        print(f"unsolvable: {exc}", file=sys.stderr)
        return 2
    except ConvergenceFailure as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 3
    rep = report(spec, measure, config)
    output = Path(args.output)
    try:
        write_doc(output, measure_to_doc(measure))
        write_doc(_report_path(output), report_to_doc(rep))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"solved: {rep.atom_count} atoms, mass {rep.total_mass:.12g}, "
        f"support radius {rep.support_radius:.12g}, "
        f"max residual {rep.max_residual:.3e}"
    )
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        spec = problem_from_doc(read_doc(Path(args.problem)))
        measure = measure_from_doc(read_doc(Path(args.measure)))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if measure.n != spec.n:
        print(
            f"error: dimension mismatch (problem n={spec.n}, measure n={measure.n})",
            file=sys.stderr,
        )
        return 1
    tol = args.tol if args.tol is not None else SolverConfig().resolved_tol(spec.n)
    rep = report(spec, measure)
    scale = max(1.0, max(abs(v) for v in spec.values))
    passed = rep.max_residual <= tol * scale
    print(
        f"{'PASS' if passed else 'FAIL'}: max residual {rep.max_residual:.3e} "
        f"vs allowance {tol * scale:.3e}"
    )
    import json

    print(json.dumps(report_to_doc(rep), indent=2))
    return 0 if passed else 4


def _cmd_random(args: argparse.Namespace) -> int:
    output = Path(args.output)
    try:
        spec, measure = random_instance(
            args.n, args.d, args.atoms, args.seed, radius=args.radius
        )
        write_doc(output, problem_to_doc(spec))
        write_doc(output.with_suffix(".measure.json"), measure_to_doc(measure))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {output} and {output.with_suffix('.measure.json')}")
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return 1
    problems = sorted(
        p
        for p in directory.glob("*.json")
        if not p.name.endswith(".measure.json") and not p.name.endswith(".solution.json")
    )
    worst = 0
    for problem in problems:
        solve_args = argparse.Namespace(
            input=str(problem),
            output=str(problem.with_suffix(".solution.json")),
            tol=args.tol,
            grid=args.grid,
            margin=args.margin,
            box_degree=args.box_degree,
            seed=args.seed,
            no_normalize=args.no_normalize,
        )
        code = _cmd_solve(solve_args)
        print(f"{problem.name}: exit {code}")
        if code and not worst:
            worst = code
    return worst


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="residual target (scaled by the largest moment magnitude)")
    parser.add_argument("--grid", type=int, default=64, help="candidate angles per dimension")
    parser.add_argument("--margin", type=float, default=1.1, help="contraction scale margin (must exceed 1)")
    parser.add_argument("--box-degree", type=int, default=None, help="embed into a box of this degree instead of the minimal one")
    parser.add_argument("--seed", type=int, default=0, help="seed for candidate sampling beyond two variables")
    parser.add_argument("--no-normalize", action="store_true", help="disable moment magnitude pre-scaling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentsynth",
        description="Solve truncated complex moment problems with atomic measures on a scaled torus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a problem document")
    solve.add_argument("input", help="problem JSON path")
    solve.add_argument("output", help="measure JSON path (report written with .report suffix)")
    _add_solver_flags(solve)
    solve.set_defaults(func=_cmd_solve)

    verify = sub.add_parser("verify", help="check a measure against a problem")
    verify.add_argument("problem", help="problem JSON path")
    verify.add_argument("measure", help="measure JSON path")
    verify.add_argument("--tol", type=float, default=None, help="residual allowance (scaled)")
    verify.set_defaults(func=_cmd_verify)

    random_cmd = sub.add_parser("random", help="generate a seeded instance with a known solution")
    random_cmd.add_argument("output", help="problem JSON path (ground truth written with .measure.json suffix)")
    random_cmd.add_argument("--n", type=int, default=1, help="number of complex variables")
    random_cmd.add_argument("--d", type=int, default=2, help="exponent box degree")
    random_cmd.add_argument("--atoms", type=int, default=3, help="number of atoms")
    random_cmd.add_argument("--seed", type=int, default=0, help="generator seed")
    random_cmd.add_argument("--radius", type=float, default=1.0, help="polydisc radius for the atoms")
    random_cmd.set_defaults(func=_cmd_random)

    batch = sub.add_parser("batch", help="solve every problem document in a directory")
    batch.add_argument("directory", help="directory of problem JSON files")
    _add_solver_flags(batch)
    batch.set_defaults(func=_cmd_batch)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
