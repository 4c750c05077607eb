"""Batch command-line entry point.

Subcommands:
  check     run one verification suite on a space-description file
  campaign  run seeded random campaigns of the finite suites
  remark5   run the fiber-pair counterexample pipeline and discretization study

Exit codes: 0 all checks passed, 1 a property failed, 2 input error. Reports
are emitted on stdout (JSON by default, --format text for human output) and
contain nothing run-dependent, so identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .campaign import SUITE_ORDER, CampaignConfig, derived_rng, run_campaign, run_suite
from .continuum import (
    discretization_csv,
    discretization_study,
    generate_event_battery,
    remark5_identity_check,
    triviality_failure,
    NO_MEASURABLE_ITERATED_RCD,
)
from .errors import InconsistentVerdict, InvariantViolation, RcdkitError
from .io import dump_json, load_space_description
from .rationals import format_fraction, parse_fraction

EXIT_PASS = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_INPUT_ERROR = 2


def _parse_levels(text: str) -> list[int]:
    try:
        levels = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"levels must be integers: {text!r}") from exc
    if not levels or any(level < 1 for level in levels):
        raise argparse.ArgumentTypeError("levels must be positive integers")
    return levels


def _parse_seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be an integer: {text!r}") from exc
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcdkit",
        description="Exact verification of regular conditional distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run one suite on a space-description file")
    p_check.add_argument("--file", required=True, help="space-description JSON path")
    p_check.add_argument("--suite", required=True, choices=SUITE_ORDER)
    p_check.add_argument("--format", choices=("json", "text"), default="json")
    p_check.set_defaults(func=cmd_check)

    p_camp = sub.add_parser("campaign", help="seeded random verification campaign")
    p_camp.add_argument("--seed", required=True, type=_parse_seed)
    p_camp.add_argument("--trials", required=True, type=int)
    p_camp.add_argument("--suites", nargs="+", choices=SUITE_ORDER, default=list(SUITE_ORDER))
    p_camp.add_argument("--max-points", type=int, default=10)
    p_camp.add_argument("--format", choices=("json", "text"), default="json")
    p_camp.set_defaults(func=cmd_campaign)

    p_r5 = sub.add_parser("remark5", help="fiber-pair counterexample pipeline")
    p_r5.add_argument("--m0", required=True, help="fiber weight as p/q, strictly in (0,1)")
    p_r5.add_argument("--pairs", type=int, default=2500)
    p_r5.add_argument("--levels", type=_parse_levels, default=[2, 8, 64, 1024])
    p_r5.add_argument("--panels", type=int, default=10_000)
    p_r5.add_argument("--format", choices=("json", "text"), default="json")
    p_r5.set_defaults(func=cmd_remark5)

    return parser


def cmd_check(args) -> int:
    desc = load_space_description(args.file)
    result = run_suite(args.suite, desc, derived_rng("check", args.suite))
    report = {
        "file": args.file,
        "suite": args.suite,
        "passed": result.passed,
        "detail": result.detail,
    }
    if args.format == "json":
        sys.stdout.write(dump_json(report))
    else:
        sys.stdout.write(f"suite {args.suite} on {args.file}: ")
        sys.stdout.write("PASS\n" if result.passed else f"FAIL\n{result.detail}\n")
    return EXIT_PASS if result.passed else EXIT_PROPERTY_FAILURE


def cmd_campaign(args) -> int:
    config = CampaignConfig(
        seed=args.seed,
        trials=args.trials,
        max_points=args.max_points,
        suites=tuple(args.suites),
    )
    result = run_campaign(config, repro_dir=Path.cwd())
    if args.format == "json":
        sys.stdout.write(dump_json(result.to_json_dict()))
    else:
        sys.stdout.write(
            f"campaign seed={config.seed} trials={config.trials} "
            f"max_points={config.max_points}\n"
        )
        for name in config.suites:
            sys.stdout.write(
                f"  {name}: {result.pass_counts[name]} pass, {result.fail_counts[name]} fail\n"
            )
        for failure in result.failures:
            sys.stdout.write(
                f"  FAILURE trial={failure.trial} suite={failure.suite} "
                f"repro={failure.repro_file}\n"
            )
        sys.stdout.write("all passed\n" if result.all_passed else "FAILURES FOUND\n")
    return EXIT_PASS if result.all_passed else EXIT_PROPERTY_FAILURE


def cmd_remark5(args) -> int:
    m0 = parse_fraction(args.m0)
    if args.pairs < 1:
        raise InvariantViolation(f"pairs must be at least 1, got {args.pairs}")
    if args.panels < 0:
        raise InvariantViolation(f"panels must be nonnegative, got {args.panels}")
    side = 1
    while side * side < args.pairs:
        side += 1
    g_events, a_events = generate_event_battery(0, side, side)
    identity = remark5_identity_check(
        m0, g_events, a_events, quad_panels=args.panels
    )
    failure_value = triviality_failure(m0, Fraction(1, 2))
    rows = discretization_study(m0, args.levels)

    all_trivial = all(row.conditionally_trivial for row in rows)
    passed = identity.all_exact and all_trivial

    if args.format == "json":
        report = {
            "m0": format_fraction(identity.m0),
            "identity_pairs_checked": identity.pairs_checked,
            "all_exact": identity.all_exact,
            "triviality_failure_value": format_fraction(failure_value),
            "quadrature_panels": identity.quad_panels,
            "quadrature_max_error": identity.quad_max_error,
            "quadrature_within_tolerance": identity.quad_ok,
            "theorem7_conclusion": NO_MEASURABLE_ITERATED_RCD,
            "discretization": [
                {"N": row.bins, "conditionally_trivial": row.conditionally_trivial}
                for row in rows
            ],
        }
        sys.stdout.write(dump_json(report))
    else:
        sys.stdout.write(f"m0 = {format_fraction(identity.m0)}\n")
        sys.stdout.write(
            f"identity pairs checked: {identity.pairs_checked} "
            f"(all exact: {str(identity.all_exact).lower()})\n"
        )
        sys.stdout.write(
            f"quadrature max error: {identity.quad_max_error!r} "
            f"(panels {identity.quad_panels}, within tolerance: "
            f"{str(identity.quad_ok).lower()})\n"
        )
        sys.stdout.write(
            f"triviality failure value: {format_fraction(failure_value)}\n"
        )
        sys.stdout.write(f"conclusion: {NO_MEASURABLE_ITERATED_RCD}\n")
        sys.stdout.write(discretization_csv(rows))
    return EXIT_PASS if passed else EXIT_PROPERTY_FAILURE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InconsistentVerdict as exc:
        sys.stderr.write(f"inconsistent verdict (implementation defect): {exc}\n")
        return EXIT_PROPERTY_FAILURE
    except RcdkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
