import pytest

from choiceliberal.mechanisms import liberal_game_form, matrix_game_form
from choiceliberal.nash import GuardLimitError
from choiceliberal.prefs import Profile, WeakOrder, parse_profile
from choiceliberal.rules import PairAssignment, canonical_assignment, liberal
from choiceliberal.verify import (
    ExhaustiveSource,
    ListSource,
    ProfileVerdict,
    SampledSource,
    Verdict,
    adversarial_profiles,
    check_implementation_at,
    verify_profiles,
)

CANON3 = canonical_assignment(3, 6)
CANON2 = canonical_assignment(2, 4)


def linear(m, *best_first):
    return WeakOrder.from_ranking(best_first, m)


def test_two_copies_equal():
    assign = PairAssignment(((2, 4), (3, 6), (1, 5)))
    p = parse_profile(
        "outcomes: 6\nplayers: 3\n"
        "pref 1: 4 > 2 > 1 = 3 = 5 = 6\npref 2: 6 > 3 > 1 = 2 = 4 = 5\npref 3: 5 > 1 > 2 = 3 = 4 = 6\n"
    )
    v = check_implementation_at(liberal_game_form(assign), liberal(assign), p)
    assert v.verdict is Verdict.EQUAL
    assert v.equilibrium == v.rule == {4, 5, 6}


def test_one_by_one_matrix():
    gf = matrix_game_form([[1]])
    p = Profile((WeakOrder((1,)), WeakOrder((1,))))
    assert check_implementation_at(gf, lambda _: frozenset({1}), p).ok


def test_dictator_form_has_extra_equilibrium():
    # row player reaches every outcome from every column
    gf = matrix_game_form([[1, 1], [2, 2], [3, 3], [4, 4]], m=4)
    # dictator (row) top-ranks w4; column player ranks 3 > 4 > rest
    p = Profile((linear(4, 4), linear(4, 3, 4)))
    v = check_implementation_at(gf, liberal(CANON2), p)
    assert 4 in v.extra
    assert v.verdict & Verdict.EXTRA_EQUILIBRIA


def test_verdict_flags_are_recomputable():
    p = Profile((WeakOrder((1,)),))
    assert ProfileVerdict(p, frozenset({1}), frozenset({1})).verdict is Verdict.EQUAL
    assert ProfileVerdict(p, frozenset(), frozenset({1})).verdict is Verdict.MISSING_FROM_EQUILIBRIA
    assert ProfileVerdict(p, frozenset({2}), frozenset({1})).verdict == (
        Verdict.MISSING_FROM_EQUILIBRIA | Verdict.EXTRA_EQUILIBRIA
    )


def test_sampled_verification_is_clean_and_reproducible():
    gf = liberal_game_form(CANON3)
    src = SampledSource(3, 6, 3000, seed=5)
    a = verify_profiles(gf, liberal(CANON3), src)
    b = verify_profiles(gf, liberal(CANON3), src)
    assert a.ok and a.tested == 3000
    assert a.summary_line() == b.summary_line() == "tested=3000 violations=0 seed=5"


def test_parallel_matches_serial():
    gf = matrix_game_form([[1, 1], [2, 3]], m=4)
    src = ExhaustiveSource(2, 4, strict_only=True)
    serial = verify_profiles(gf, liberal(CANON2), src, violation_cap=5)
    par = verify_profiles(gf, liberal(CANON2), src, violation_cap=5, threads=2, chunk_size=50)
    assert serial.violation_count == par.violation_count
    assert [v.index for v in serial.violations] == [v.index for v in par.violations]


def test_adversarial_list_is_clean():
    gf = liberal_game_form(CANON3)
    profiles = adversarial_profiles(CANON3, 6)
    report = verify_profiles(gf, liberal(CANON3), ListSource(profiles, "adversarial"))
    assert report.ok and report.tested == len(profiles)


def test_matrix_fails_against_two_player_rule():
    gf = matrix_game_form([[1, 1], [2, 3]], m=4)
    report = verify_profiles(gf, liberal(CANON2), ExhaustiveSource(2, 4, strict_only=True), violation_cap=3)
    assert report.tested == 576
    assert report.violation_count >= 1
    assert len(report.violations) == 3
    assert [v.index for v in report.violations] == sorted(v.index for v in report.violations)


def test_exhaustive_guard():
    gf = liberal_game_form(CANON3)
    with pytest.raises(GuardLimitError):
        verify_profiles(gf, liberal(CANON3), ExhaustiveSource(3, 6))


def test_adversarial_contents():
    profiles = adversarial_profiles(CANON3, 6)
    want = Profile((linear(6, 2, 1), linear(6, 4, 3), linear(6, 6, 5)))
    assert want in profiles
    assert adversarial_profiles(CANON3, 6) == profiles
    assert len(set(profiles)) == len(profiles)


def test_two_player_adversarial_contents():
    profiles = adversarial_profiles(CANON2, 4)
    # player 1 top-ranks w4, player 2 orders 3 > 4 > rest
    assert Profile((linear(4, 4), linear(4, 3, 4))) in profiles
    assert Profile((linear(4, 2, 1), linear(4, 2, 1))) in profiles
    assert Profile((linear(4, 1), linear(4, 3))) in profiles
