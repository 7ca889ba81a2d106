"""Acceptance criteria, one test each.

Every test records a pass/fail line through the ``criterion`` fixture; the
lines are printed in the terminal summary.  Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import math
import random
import time

import numpy as np
import pytest

from choiceliberal.demos import BOOK_PAIRS, BOOK_PROFILE, TWO_COPIES_PAIRS, TWO_COPIES_PROFILE, demo_book
from choiceliberal.impossibility import contradiction_witness, search_two_player
from choiceliberal.mechanisms import ConsensusError, liberal_game_form, matrix_game_form
from choiceliberal.nash import nash_equilibria
from choiceliberal.prefs import (
    Profile,
    count_orders,
    enumerate_orders,
    format_profile,
    parse_profile,
    sample_profile,
)
from choiceliberal.rules import (
    ViolationKind,
    canonical_assignment,
    is_monotone_transformation,
    liberal,
    liberal_rule,
    monotonic_violation,
    no_veto_conflict_profile,
    no_veto_violation,
    overlapping_assignment,
    raise_outcome,
)
from choiceliberal.verify import ListSource, SampledSource, adversarial_profiles, verify_profiles
from oracles import nash_by_definition, ordered_bell_recurrence

SEED = 20240601


def _verify_canonical(n, m, samples, with_adversarial):
    assign = canonical_assignment(n, m)
    gf = liberal_game_form(assign)
    rule = liberal(assign)
    reports = [verify_profiles(gf, rule, SampledSource(n, m, samples, seed=SEED))]
    if with_adversarial:
        adv = adversarial_profiles(assign, m)
        reports.append(verify_profiles(gf, rule, ListSource(adv, "adversarial")))
    return reports


def test_c1_two_copies_reproduction(criterion):
    t0 = time.perf_counter()
    assign = TWO_COPIES_PAIRS
    profile = parse_profile(TWO_COPIES_PROFILE)
    gf = liberal_game_form(assign)
    rule_set = liberal_rule(assign, profile)
    eq = nash_equilibria(gf, profile)
    elapsed = time.perf_counter() - t0
    ok = gf.num_profiles == 216 and rule_set == eq.outcomes == {4, 5, 6} and elapsed < 1
    criterion("C1 two-copies reproduction", ok, f"rule={sorted(rule_set)} eq={sorted(eq.outcomes)} {elapsed:.3f}s")
    assert ok


def test_c2_three_players(criterion):
    t0 = time.perf_counter()
    try:
        reports = _verify_canonical(3, 6, 100_000, with_adversarial=True)
    except ConsensusError as exc:
        criterion("C2 n=3 m=6 verification", False, f"consensus assertion fired: {exc}")
        raise
    elapsed = time.perf_counter() - t0
    tested = sum(r.tested for r in reports)
    bad = sum(r.violation_count for r in reports)
    ok = reports[0].tested == 100_000 and reports[1].tested > 0 and bad == 0 and elapsed < 300
    criterion("C2 n=3 m=6 verification", ok, f"tested={tested} violations={bad} seed={SEED} {elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_c3_four_players(criterion):
    t0 = time.perf_counter()
    assert liberal_game_form(canonical_assignment(4, 8)).num_profiles == 4096
    try:
        (report,) = _verify_canonical(4, 8, 10_000, with_adversarial=False)
    except ConsensusError as exc:
        criterion("C3 n=4 m=8 verification", False, f"consensus assertion fired: {exc}")
        raise
    elapsed = time.perf_counter() - t0
    ok = report.tested == 10_000 and report.ok and elapsed < 600
    criterion("C3 n=4 m=8 verification", ok, f"{report.summary_line()} {elapsed:.1f}s")
    assert ok


def test_c4_overlap_witnesses(criterion):
    t0 = time.perf_counter()
    valid = []
    for n in (2, 3, 4):
        m = 2 * n - 1
        valid.append(contradiction_witness(overlapping_assignment(n, m), m).validate() == (True, True))
    book = contradiction_witness(BOOK_PAIRS, 4, overlap=(3, 1, 4))
    book_ok = book.shared == 4 and book.valid
    # the worked profile itself satisfies the witness constraints
    story = parse_profile(BOOK_PROFILE)
    story_ok = story[1].strictly_prefers(1, 4) and story[3].strictly_prefers(4, 3)
    story_ok = story_ok and demo_book()[1]
    elapsed = time.perf_counter() - t0
    ok = all(valid) and book_ok and story_ok and elapsed < 1
    criterion("C4 overlap witnesses", ok, f"n=2,3,4 valid={valid} book_shared=w{book.shared} {elapsed:.3f}s")
    assert ok


def test_c5_two_player_search(criterion):
    t0 = time.perf_counter()
    assign = canonical_assignment(2, 4)
    parts = []
    ok = True
    for rows, cols in ((2, 2), (2, 3), (3, 2), (3, 3)):
        report = search_two_player(rows, cols, 4, assign)
        ok &= report.enumerated == 4 ** (rows * cols) == report.refuted and not report.unrefuted
        parts.append(f"{rows}x{cols}:{report.refuted}/{report.enumerated}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300
    criterion("C5 two-player search", ok, f"{' '.join(parts)} {elapsed:.1f}s")
    assert ok


def test_c6_no_veto_conflict(criterion):
    t0 = time.perf_counter()
    assign = canonical_assignment(3, 6)
    profile = no_veto_conflict_profile(assign, 6)
    chosen = liberal_rule(assign, profile)
    v = no_veto_violation(chosen, profile)
    elapsed = time.perf_counter() - t0
    ok = v is not None and v.kind is ViolationKind.NO_VETO_POWER and v.outcomes == (1,) and elapsed < 1
    criterion("C6 no-veto conflict", ok, f"chosen={sorted(chosen)} dropped={v and v.outcomes} {elapsed:.3f}s")
    assert ok


def test_c7_monotonicity(criterion):
    t0 = time.perf_counter()
    assign = canonical_assignment(3, 6)
    rule = liberal(assign)
    rng = random.Random(SEED)
    pairs = violations = 0
    while pairs < 10_000:
        before = sample_profile(3, 6, rng)
        noise = sample_profile(3, 6, rng)
        w = rng.choice(sorted(rule(before)))
        after = Profile(tuple(raise_outcome(q, b, w) for q, b in zip(noise, before)))
        assert is_monotone_transformation(before, after, w)
        pairs += 1
        violations += monotonic_violation(rule, before, after) is not None
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60
    criterion("C7 monotonicity", ok, f"pairs={pairs} violations={violations} {elapsed:.1f}s")
    assert ok


def test_c8_ordered_bell(criterion):
    weak = [sum(1 for _ in enumerate_orders(m)) for m in range(1, 6)]
    strict = [sum(1 for _ in enumerate_orders(m, strict_only=True)) for m in range(1, 6)]
    ok = (
        weak == [ordered_bell_recurrence(m) for m in range(1, 6)] == [1, 3, 13, 75, 541]
        and strict == [math.factorial(m) for m in range(1, 6)]
        and [count_orders(m) for m in range(1, 6)] == weak
    )
    criterion("C8 ordered Bell counts", ok, f"weak={weak} strict={strict}")
    assert ok


def test_c9_property_suites(criterion):
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    grids = 0
    missed = spurious = 0
    for rows, cols in ((2, 2), (2, 3)):
        for flat in np.ndindex(*(4,) * (rows * cols)):
            gf = matrix_game_form((np.array(flat).reshape(rows, cols) + 1).tolist(), 4)
            grids += 1
            for _ in range(100):
                p = sample_profile(2, 4, rng)
                got = set(nash_equilibria(gf, p).profiles)
                want = set(nash_by_definition(gf, p))
                missed += len(want - got)
                spurious += len(got - want)
    solver_ok = grids == 256 + 4096 and missed == spurious == 0

    round_trips = 0
    for _ in range(1000):
        p = sample_profile(rng.randint(1, 5), rng.randint(1, 8), rng)
        round_trips += parse_profile(format_profile(p)) == p
    parser_ok = round_trips == 1000

    # every strategy profile of the forms used by C1-C3 evaluates without the assertion
    try:
        for assign in (TWO_COPIES_PAIRS, canonical_assignment(3, 6), canonical_assignment(4, 8)):
            liberal_game_form(assign).table()
        consensus_ok = True
    except ConsensusError:
        consensus_ok = False

    elapsed = time.perf_counter() - t0
    ok = solver_ok and parser_ok and consensus_ok
    criterion(
        "C9 property suites",
        ok,
        f"grids={grids} missed={missed} spurious={spurious} round_trips={round_trips} "
        f"consensus_ok={consensus_ok} {elapsed:.1f}s",
    )
    assert ok
