"""Command-line interface: ``boltzdiv solve|compare|curve|diagnose PROBLEM.json``.

Exit codes: 0 success, 1 invalid input or domain error, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import render
from .baselines import comparison_report
from .division import allocate, flavor_probabilities, homogeneous_probabilities, sample_allocation
from .errors import DivisionError, HeterogeneousProblemGiven, ProblemSyntaxError, ValidationError
from .io import ProblemIOError, load_problem
from .optimize import SearchConfig, default_beta_max, optimize_beta, small_beta_diagnostic, utility_curve

EXIT_OK, EXIT_INPUT, EXIT_IO = 0, 1, 2
DEFAULT_CURVE_POINTS = 1001
DEFAULT_SAMPLE_UNITS = 100_000


def _probabilities(problem, beta):
    if problem.is_heterogeneous:
        return flavor_probabilities(problem, beta)
    return homogeneous_probabilities(problem.contributions, beta)


def cmd_solve(args) -> str:
    problem = load_problem(args.problem)
    optimum = None
    if args.beta is None:
        optimum = optimize_beta(problem, SearchConfig(beta_max=args.beta_max))
        beta = optimum.beta_star
        allocation = optimum.allocation
    else:
        beta = args.beta
        allocation = allocate(problem, beta)
    sampled = None
    if args.seed is not None:
        sampled = sample_allocation(problem, beta, args.units, seed=args.seed)
    return render.render_solution(
        problem, beta, allocation, _probabilities(problem, beta),
        fmt=args.format, optimum=optimum, sampled=sampled,
    )


def cmd_compare(args) -> str:
    problem = load_problem(args.problem)
    optimum = optimize_beta(problem, SearchConfig(beta_max=args.beta_max))
    return render.render_comparison(comparison_report(problem, optimum), fmt=args.format)


def cmd_curve(args) -> tuple[str, str]:
    problem = load_problem(args.problem)
    beta_max = default_beta_max(problem) if args.beta_max is None else args.beta_max
    if not beta_max > 0:
        raise DivisionError(f"--beta-max must be > 0, got {beta_max}")
    if args.points < 2:
        raise DivisionError(f"--points must be >= 2, got {args.points}")
    curve = utility_curve(problem, np.linspace(0.0, beta_max, args.points))
    return render.render_curve_csv(curve), render.curve_summary(curve)


def cmd_diagnose(args) -> str:
    problem = load_problem(args.problem)
    try:
        report = small_beta_diagnostic(problem)
    except HeterogeneousProblemGiven as exc:
        raise DivisionError(
            f"diagnose needs a homogeneous cake: {exc}"
        ) from exc
    return render.render_diagnostic(problem, report, fmt=args.format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boltzdiv",
        description="Exponential-weight (Boltzmann) fair division at the utility-maximizing beta.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=True):
        p.add_argument("problem", help="problem file (JSON)")
        if formats:
            p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("solve", help="allocation at beta* (or at a fixed --beta)")
    common(p)
    p.add_argument("--beta", type=float, help="evaluate at this beta instead of searching")
    p.add_argument("--beta-max", type=float, help="upper end of the beta search range")
    p.add_argument("--seed", type=int, help="also draw a Monte Carlo allocation with this seed")
    p.add_argument("--units", type=int, default=DEFAULT_SAMPLE_UNITS,
                   help=f"cake units drawn when --seed is given (default {DEFAULT_SAMPLE_UNITS})")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="Boltzmann vs egalitarian and proportional splits")
    common(p)
    p.add_argument("--beta-max", type=float, help="upper end of the beta search range")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("curve", help="sample total utility over a beta grid (CSV)")
    common(p, formats=False)
    p.add_argument("--beta-max", type=float, help="grid upper end (default: saturation bound)")
    p.add_argument("--points", type=int, default=DEFAULT_CURVE_POINTS,
                   help=f"grid size including both ends (default {DEFAULT_CURVE_POINTS})")
    p.add_argument("--out", type=Path, help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("diagnose", help="small-beta test for an interior optimum")
    common(p)
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
        if args.command == "curve":
            csv_text, summary = result
            if args.out is None:
                sys.stdout.write(csv_text)
                sys.stderr.write(summary)
            else:
                try:
                    args.out.write_text(csv_text, encoding="utf-8")
                except OSError as exc:
                    raise ProblemIOError(f"cannot write {args.out}: {exc}") from exc
                sys.stdout.write(summary)
        else:
            sys.stdout.write(result)
    except ProblemIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(f"error: invalid problem file {args.problem}", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INPUT
    except ProblemSyntaxError as exc:
        print(f"error: malformed JSON in {args.problem}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
