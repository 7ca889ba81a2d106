"""The three worked examples: too few outcomes, three readers, two readers.

Each demo recomputes its result with the library and returns ``(text, ok)``,
where ``ok`` says whether the computed result matches the expected one.
"""

from __future__ import annotations

from dataclasses import replace
from itertools import chain, combinations

from .impossibility import RefutationWitness, contradiction_witness, refute_two_player
from .mechanisms import LiberalStrategy, liberal_game_form, matrix_game_form
from .nash import best_deviation, nash_equilibria
from .prefs import parse_profile
from .rules import PairAssignment, decisive_violations, liberal_rule
from .verify import Verdict, format_outcomes, check_implementation_at

BOOK_PAIRS = PairAssignment(((1, 4), (2, 4), (3, 4)))

BOOK_PROFILE = """\
# players 1 and 2 rank their own outcome first, player 3 ranks w4 first
outcomes: 4
players: 3
pref 1: 1 > 4 > 2 > 3
pref 2: 2 > 4 > 1 > 3
pref 3: 4 > 3 > 1 > 2
"""

TWO_COPIES_PAIRS = PairAssignment(((2, 4), (3, 6), (1, 5)))

TWO_COPIES_PROFILE = """\
# each player puts the second member of their pair on top
outcomes: 6
players: 3
pref 1: 4 > 2 > 1 = 3 = 5 = 6
pref 2: 6 > 3 > 1 = 2 = 4 = 5
pref 3: 5 > 1 > 2 = 3 = 4 = 6
"""

TWO_READERS_PAIRS = PairAssignment(((1, 6), (2, 5)))

TWO_READERS_PROFILE = """\
# Ann ranks w1 first, Bob ranks w2 first
outcomes: 6
players: 2
pref 1: 1 > 6 > 2 > 3 > 4 > 5
pref 2: 2 > 5 > 1 > 3 > 4 > 6
"""

# row 1 always gives w1
TWO_READERS_GRID = [[1, 1, 1], [2, 5, 6], [3, 2, 4]]


def demo_book() -> tuple[str, bool]:
    profile = parse_profile(BOOK_PROFILE)
    # C forces w4 in, A forces it out; the story profile replaces the default completion
    built = contradiction_witness(BOOK_PAIRS, 4, overlap=(3, 1, 4))
    witness = replace(built, profile=profile)
    outcomes = range(1, 5)
    candidates = chain.from_iterable(combinations(outcomes, k) for k in range(1, 5))
    every_set_fails = all(
        decisive_violations(lambda _p, c=frozenset(c): c, BOOK_PAIRS, [profile]) for c in candidates
    )
    lines = [
        "Three classmates, one book: w1 A reads, w2 B reads, w3 C reads, w4 nobody reads.",
        witness.format(),
        f"every non-empty candidate set breaks some decisive pair here: {every_set_fails}",
    ]
    ok = witness.valid and built.valid and witness.shared == 4 and every_set_fails
    return "\n".join(lines), ok


def demo_two_copies() -> tuple[str, bool]:
    profile = parse_profile(TWO_COPIES_PROFILE)
    gf = liberal_game_form(TWO_COPIES_PAIRS)
    chosen = liberal_rule(TWO_COPIES_PAIRS, profile)
    eq = nash_equilibria(gf, profile)
    lines = [
        "Three classmates, two copies; pairs A {w2,w4}, B {w3,w6}, C {w1,w5}.",
        f"liberal rule: {format_outcomes(chosen)}",
        f"strategy profiles: {gf.num_profiles}, equilibria: {len(eq)}",
        f"equilibrium outcomes: {format_outcomes(eq.outcomes)}",
    ]
    everyone_on_a = gf.indices([LiberalStrategy(4, 1), LiberalStrategy(6, 1), LiberalStrategy(5, 1)])
    lines.append(f"all name A, A names w4: outcome w{gf.outcome(everyone_on_a)}, "
                 f"equilibrium: {everyone_on_a in eq}")
    # first profile (in enumeration order) that ends at w1, and C's way out
    bad = next(s for s in gf.profiles() if gf.outcome(s) == 1)
    dev = best_deviation(gf, profile, bad, 3)
    trace_ok = dev is not None
    lines.append(f"at {gf.format_profile(bad)} the outcome is w1")
    if dev is not None:
        moved = list(bad)
        moved[2] = dev
        lines.append(f"  C deviates to {gf.strategy_label(3, dev)}: outcome w{gf.outcome(moved)}, "
                     f"which C strictly prefers")
        trace_ok = gf.outcome(moved) == 5
    ok = chosen == {4, 5, 6} and eq.outcomes == {4, 5, 6} and everyone_on_a in eq and trace_ok
    return "\n".join(lines), ok


def demo_two_readers() -> tuple[str, bool]:
    profile = parse_profile(TWO_READERS_PROFILE)
    gf = matrix_game_form(TWO_READERS_GRID, 6)
    verdict = check_implementation_at(gf, lambda p: liberal_rule(TWO_READERS_PAIRS, p), profile)
    rows = gf.constant_rows(1)
    lines = [
        "Two readers; pairs Ann {w1,w6}, Bob {w2,w5}; Ann picks rows, Bob columns.",
        "sample matrix:",
        *("  " + " ".join(f"w{x}" for x in row) for row in TWO_READERS_GRID),
        f"rows containing only w1: {[r + 1 for r in rows]}",
        "at the story profile:",
        verdict.format(),
        "Ann can always switch to the all-w1 row, so no cell yielding w2 survives.",
    ]
    generic = refute_two_player(gf, TWO_READERS_PAIRS)
    lines.append("first refutation found by the generic search:")
    if isinstance(generic, RefutationWitness):
        lines.append(generic.format())
    else:
        lines.append(f"UNREFUTED after {generic.probes_tried} probes")
    ok = (
        bool(rows)
        and verdict.rule == {1, 2}
        and 2 in verdict.missing
        and bool(verdict.verdict & Verdict.MISSING_FROM_EQUILIBRIA)
        and isinstance(generic, RefutationWitness)
    )
    return "\n".join(lines), ok


DEMOS = {"6.1": demo_book, "6.2": demo_two_copies, "6.3": demo_two_readers}
