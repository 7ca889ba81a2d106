"""Check that equilibrium outcomes coincide with a rule's output.

A verdict is a pair of one-sided checks: rule outcomes missing from the
equilibrium outcomes, and equilibrium outcomes the rule does not select.
"""

from __future__ import annotations

import enum
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .mechanisms import GameForm
from .nash import DEFAULT_GUARD_LIMIT, GuardLimitError, equilibrium_outcomes
from .prefs import (
    Profile,
    WeakOrder,
    count_orders,
    enumerate_profiles,
    sample_profile,
)
from .rules import EmptyOutcomeError, PairAssignment, Rule, no_veto_conflict_profile

DEFAULT_VIOLATION_CAP = 32


class Verdict(enum.Flag):
    EQUAL = 0
    MISSING_FROM_EQUILIBRIA = enum.auto()
    EXTRA_EQUILIBRIA = enum.auto()

    def describe(self) -> str:
        if not self:
            return "Equal"
        names = []
        if self & Verdict.MISSING_FROM_EQUILIBRIA:
            names.append("MissingFromEquilibria")
        if self & Verdict.EXTRA_EQUILIBRIA:
            names.append("ExtraEquilibria")
        return "+".join(names)


@dataclass(frozen=True)
class ProfileVerdict:
    profile: Profile
    equilibrium: frozenset
    rule: frozenset
    index: Optional[int] = None

    @property
    def missing(self) -> frozenset:
        return self.rule - self.equilibrium

    @property
    def extra(self) -> frozenset:
        return self.equilibrium - self.rule

    @property
    def verdict(self) -> Verdict:
        v = Verdict.EQUAL
        if self.missing:
            v |= Verdict.MISSING_FROM_EQUILIBRIA
        if self.extra:
            v |= Verdict.EXTRA_EQUILIBRIA
        return v

    @property
    def ok(self) -> bool:
        return self.equilibrium == self.rule

    def format(self) -> str:
        lines = [
            f"verdict: {self.verdict.describe()}",
            f"  equilibrium outcomes: {format_outcomes(self.equilibrium)}",
            f"  rule outcomes:        {format_outcomes(self.rule)}",
        ]
        if self.missing:
            lines.append(f"  missing from equilibria: {format_outcomes(self.missing)}")
        if self.extra:
            lines.append(f"  extra equilibrium outcomes: {format_outcomes(self.extra)}")
        lines += [f"  pref {i}: {o}" for i, o in enumerate(self.profile, start=1)]
        return "\n".join(lines)


def format_outcomes(s: Iterable[int]) -> str:
    return "{" + ", ".join(f"w{x}" for x in sorted(s)) + "}"


def check_implementation_at(
    gf: GameForm, rule: Rule, profile: Profile, guard_limit: int = DEFAULT_GUARD_LIMIT
) -> ProfileVerdict:
    chosen = frozenset(rule(profile))
    if not chosen:
        raise EmptyOutcomeError("rule returned no outcome")
    return ProfileVerdict(profile, equilibrium_outcomes(gf, profile, guard_limit), chosen)


# -- profile sources -----------------------------------------------------------


class ProfileSource:
    seed: Optional[int] = None

    def __iter__(self) -> Iterator[Profile]:
        raise NotImplementedError

    def cardinality(self) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass
class ExhaustiveSource(ProfileSource):
    n: int
    m: int
    strict_only: bool = False

    def __iter__(self):
        return enumerate_profiles(self.n, self.m, self.strict_only)

    def cardinality(self) -> int:
        return count_orders(self.m, self.strict_only) ** self.n

    def describe(self) -> str:
        kind = "linear" if self.strict_only else "weak"
        return f"exhaustive {kind} orders n={self.n} m={self.m}"


@dataclass
class SampledSource(ProfileSource):
    n: int
    m: int
    count: int
    seed: int = 0
    strict_only: bool = False

    def __iter__(self):
        rng = random.Random(self.seed)
        for _ in range(self.count):
            yield sample_profile(self.n, self.m, rng, self.strict_only)

    def cardinality(self) -> int:
        return self.count

    def describe(self) -> str:
        kind = "linear" if self.strict_only else "weak"
        return f"{self.count} sampled {kind}-order profiles n={self.n} m={self.m} seed={self.seed}"


@dataclass
class ListSource(ProfileSource):
    profiles: Sequence[Profile]
    label: str = "profile list"

    def __iter__(self):
        return iter(self.profiles)

    def cardinality(self) -> int:
        return len(self.profiles)

    def describe(self) -> str:
        return f"{self.label} ({len(self.profiles)} profiles)"


@dataclass
class VerificationReport:
    source: str
    tested: int
    violation_count: int
    violations: list[ProfileVerdict] = field(default_factory=list)
    seed: Optional[int] = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def summary_line(self) -> str:
        return f"tested={self.tested} violations={self.violation_count} seed={self.seed}"

    def format(self) -> str:
        lines = [f"source: {self.source}", f"profiles tested: {self.tested}",
                 f"violations: {self.violation_count}"]
        if self.violation_count > len(self.violations):
            lines.append(f"(showing first {len(self.violations)})")
        for v in self.violations:
            lines.append(f"-- profile #{v.index}")
            lines.append(v.format())
        return "\n".join(lines)


def _check_chunk(args):
    gf, rule, start, profiles, guard_limit = args
    bad = []
    for k, profile in enumerate(profiles, start=start):
        verdict = check_implementation_at(gf, rule, profile, guard_limit)
        if not verdict.ok:
            bad.append(ProfileVerdict(verdict.profile, verdict.equilibrium, verdict.rule, k))
    return len(profiles), bad


def _chunks(profiles: Iterable[Profile], size: int):
    it = iter(profiles)
    start = 0
    while chunk := list(itertools.islice(it, size)):
        yield start, chunk
        start += len(chunk)


def verify_profiles(
    gf: GameForm,
    rule: Rule,
    source: ProfileSource,
    *,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
    violation_cap: int = DEFAULT_VIOLATION_CAP,
    threads: int = 1,
    chunk_size: int = 2000,
) -> VerificationReport:
    """Run :func:`check_implementation_at` over every profile of ``source``.

    With ``threads > 1`` chunks go to worker processes; results are merged in
    source order so the report does not depend on the worker count.
    """
    if isinstance(source, ExhaustiveSource) and source.cardinality() > guard_limit:
        raise GuardLimitError(
            f"{source.describe()} has {source.cardinality()} profiles, above guard limit {guard_limit}"
        )
    t0 = time.perf_counter()
    jobs = ((gf, rule, start, chunk, guard_limit) for start, chunk in _chunks(source, chunk_size))
    tested = 0
    count = 0
    kept: list[ProfileVerdict] = []

    def merge(results):
        nonlocal tested, count
        for n_checked, bad in results:
            tested += n_checked
            count += len(bad)
            kept.extend(bad[: max(0, violation_cap - len(kept))])

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            merge(pool.map(_check_chunk, jobs))
    else:
        merge(map(_check_chunk, jobs))
    return VerificationReport(
        source.describe(), tested, count, kept, source.seed, time.perf_counter() - t0
    )


# -- adversarial profiles -------------------------------------------------------


def _ranked(m: int, *best_first: int) -> WeakOrder:
    return WeakOrder.from_ranking(best_first, m)


def adversarial_profiles(assign: PairAssignment, m: int) -> list[Profile]:
    """Deterministic profiles taken from the failure modes of the proofs.

    Unmentioned outcomes are appended below in index order.  Contents, in order:

    * every player prefers the first member of their pair, then the second;
    * each player alone strict over their pair (both orientations), everyone
      else fully indifferent;
    * each player strict over their pair while all others top-rank the member
      that player rejects;
    * for each player, the near-unanimity profile that breaks no-veto power;
    * with two players, additionally: both players sharing a favourite and a
      runner-up, the two players with distinct favourites, and the
      profiles where one player top-ranks a member of the other's pair that
      the other ranks second.
    """
    n = assign.n
    out: list[Profile] = []

    def add(orders):
        out.append(Profile(tuple(orders)))

    add(_ranked(m, a, b) for a, b in assign.pairs)
    add(_ranked(m, b, a) for a, b in assign.pairs)
    for i, (a, b) in enumerate(assign.pairs, start=1):
        for x, y in ((a, b), (b, a)):
            add(_ranked(m, x, y) if k == i else WeakOrder.indifferent(m) for k in range(1, n + 1))
    for i, (a, b) in enumerate(assign.pairs, start=1):
        for x, y in ((a, b), (b, a)):
            add(_ranked(m, x, y) if k == i else _ranked(m, y) for k in range(1, n + 1))
    for i in range(1, n + 1):
        out.append(no_veto_conflict_profile(assign, m, i))
    if n == 2:
        out += two_player_step_profiles(assign, m)
    return list(dict.fromkeys(out))


def two_player_step_profiles(assign: PairAssignment, m: int) -> list[Profile]:
    """Two-player probes, in three groups.

    Both players share favourite ``w`` and runner-up ``v``; the players have
    distinct favourites; one player top-ranks a member of the other's pair
    which the other ranks second.  ``w`` and ``v`` range over pair members.
    """
    if assign.n != 2:
        raise ValueError("two-player probes need exactly two pairs")
    members = sorted(assign.members)
    out = []
    for w, v in itertools.permutations(members, 2):
        out.append(Profile((_ranked(m, w, v), _ranked(m, w, v))))
    for w, v in itertools.permutations(members, 2):
        out.append(Profile((_ranked(m, w), _ranked(m, v))))
    for i, j in ((1, 2), (2, 1)):
        a, b = assign.pair(j)
        for first, second in ((a, b), (b, a)):
            orders = {i: _ranked(m, second), j: _ranked(m, first, second)}
            out.append(Profile((orders[1], orders[2])))
    return out
