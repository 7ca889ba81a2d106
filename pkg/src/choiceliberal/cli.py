"""Command-line front end.

Exit codes: 0 success or verified, 1 counterexample or violation found,
2 usage, parse or guard-limit error.  Timing goes to stderr so stdout is
byte-identical across runs with the same flags.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .demos import DEMOS
from .impossibility import contradiction_witness, pigeonhole_overlap, search_two_player
from .mechanisms import GameFormError, liberal_game_form, parse_matrix
from .nash import DEFAULT_GUARD_LIMIT, GuardLimitError, nash_equilibria
from .prefs import PreferenceError, parse_profile
from .rules import (
    AssignmentError,
    canonical_assignment,
    liberal,
    liberal_rule,
    overlapping_assignment,
    parse_pairs,
)
from .verify import (
    DEFAULT_VIOLATION_CAP,
    ListSource,
    SampledSource,
    adversarial_profiles,
    format_outcomes,
    verify_profiles,
)

OK, FOUND, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_solve(args) -> int:
    profile = parse_profile(_read(args.profile))
    if args.pairs is not None:
        assign = parse_pairs(args.pairs, profile.m)
        gf = liberal_game_form(assign)
        print(f"liberal game form, pairs {assign}")
    else:
        gf = parse_matrix(_read(args.matrix))
        print(f"matrix game form {gf.rows}x{gf.cols}")
    eq = nash_equilibria(gf, profile, args.guard_limit)
    print(f"strategy profiles: {gf.num_profiles}")
    print(f"equilibria: {len(eq)}")
    for s in eq.profiles:
        print(f"  {gf.format_profile(s)} -> w{gf.outcome(s)}")
    print(f"equilibrium outcomes: {format_outcomes(eq.outcomes)}")
    if args.pairs is not None:
        print(f"liberal rule: {format_outcomes(liberal_rule(assign, profile))}")
    return OK


def cmd_verify(args) -> int:
    n, m = args.n, args.m
    if n < 3:
        raise UsageError("verify needs n >= 3: no liberal mechanism exists for two players")
    if m < 2 * n:
        raise UsageError(f"verify needs m >= 2n = {2 * n}")
    assign = parse_pairs(args.pairs, m) if args.pairs else canonical_assignment(n, m)
    if assign.n != n:
        raise UsageError(f"--pairs lists {assign.n} pairs but n={n}")
    if not assign.disjoint:
        raise UsageError("--pairs must be pairwise disjoint for verification")
    if args.samples < 0:
        raise UsageError("--samples must be non-negative")
    gf = liberal_game_form(assign)
    if gf.num_profiles > args.guard_limit:
        raise GuardLimitError(f"{gf.num_profiles} strategy profiles exceed guard limit {args.guard_limit}")
    rule = liberal(assign)
    opts = dict(guard_limit=args.guard_limit, violation_cap=args.violation_cap, threads=args.threads)
    t0 = time.perf_counter()
    sampled = verify_profiles(gf, rule, SampledSource(n, m, args.samples, args.seed), **opts)
    adv = verify_profiles(gf, rule, ListSource(adversarial_profiles(assign, m), "adversarial"), **opts)
    print(f"liberal mechanism vs liberal rule, n={n} m={m}, pairs {assign}")
    print(sampled.format())
    print(adv.format())
    violations = sampled.violation_count + adv.violation_count
    print(f"sampled={sampled.tested} adversarial={adv.tested}")
    print(f"tested={sampled.tested + adv.tested} violations={violations} seed={args.seed}")
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return OK if violations == 0 else FOUND


def cmd_witness(args) -> int:
    n, m = args.n, args.m
    if args.pairs:
        assign = parse_pairs(args.pairs, m)
        if assign.n != n:
            raise UsageError(f"--pairs lists {assign.n} pairs but n={n}")
    elif m < 2 * n:
        assign = overlapping_assignment(n, m)
    else:
        raise UsageError(f"m={m} >= 2n={2 * n}: give overlapping --pairs explicitly")
    if pigeonhole_overlap(assign) is None:
        raise UsageError(f"pairs {assign} are disjoint; no contradiction exists")
    witness = contradiction_witness(assign, m)
    print(witness.format())
    return OK if witness.valid else FOUND


def cmd_search2p(args) -> int:
    assign = parse_pairs(args.pairs, args.m) if args.pairs else canonical_assignment(2, args.m)
    total = args.m ** (args.rows * args.cols)
    if total > args.guard_limit:
        raise GuardLimitError(f"{args.m}^{args.rows * args.cols} = {total} forms exceed guard limit {args.guard_limit}")
    report = search_two_player(
        args.rows, args.cols, args.m, assign,
        guard_limit=args.guard_limit, threads=args.threads, progress=sys.stderr,
    )
    print(report.format())
    print(report.summary_line())
    print(f"elapsed {report.elapsed:.2f}s", file=sys.stderr)
    if report.unrefuted:
        print("WARNING: unrefuted two-player forms found at this bound", file=sys.stderr)
        return FOUND
    return OK


def cmd_demo(args) -> int:
    text, ok = DEMOS[args.which]()
    print(text)
    print("result: " + ("matches expected" if ok else "DIVERGES from expected"))
    return OK if ok else FOUND


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choiceliberal",
        description="Nash implementation checks for choice-liberal social choice rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def limits(p, threads=True):
        p.add_argument("--guard-limit", type=_positive, default=DEFAULT_GUARD_LIMIT,
                       help="refuse enumerations larger than this (default %(default)s)")
        if threads:
            p.add_argument("--threads", type=_positive, default=1, help="worker processes")

    p = sub.add_parser("solve", help="enumerate pure Nash equilibria for one profile")
    p.add_argument("--profile", required=True, help="profile file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pairs", help='liberal mechanism with these pairs, e.g. "1,2;3,4;5,6"')
    src.add_argument("--matrix", help="matrix game-form file")
    limits(p, threads=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check equilibrium outcomes = liberal rule on sampled and adversarial profiles")
    p.add_argument("--n", type=_positive, required=True, help="players (at least 3)")
    p.add_argument("--m", type=_positive, required=True, help="outcomes (at least 2n)")
    p.add_argument("--pairs", help="decisive pairs; canonical if omitted")
    p.add_argument("--samples", type=int, default=10_000, help="seeded random profiles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--violation-cap", type=int, default=DEFAULT_VIOLATION_CAP,
                   help="violations listed in the report")
    limits(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="contradiction profile for overlapping decisive pairs")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--pairs", help="overlapping pairs; auto-generated when m < 2n")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("search2p", help="try to refute every small two-player game form")
    p.add_argument("--rows", type=_positive, required=True)
    p.add_argument("--cols", type=_positive, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--pairs", help="decisive pairs; canonical if omitted")
    limits(p)
    p.set_defaults(func=cmd_search2p)

    p = sub.add_parser("demo", help="replay a worked example")
    p.add_argument("which", choices=sorted(DEMOS), help="worked example id")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, PreferenceError, AssignmentError, GameFormError, GuardLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
