"""Decisive pairs, the liberal rule and axiom checkers.

A rule is any callable ``Profile -> frozenset[int]``.  The checkers here take
such callables together with caller-supplied profile streams; whether a stream
is exhaustive is up to the caller.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Optional

from .prefs import PreferenceError, Profile, WeakOrder

OutcomeSet = frozenset
Rule = Callable[[Profile], frozenset]


class AssignmentError(ValueError):
    pass


class EmptyOutcomeError(ValueError):
    """A rule returned the empty set, which no social choice rule may do."""


class UnusableTransformation(ValueError):
    """The second profile is not a monotone transformation for any selected outcome."""


@dataclass(frozen=True)
class PairAssignment:
    """The pair of outcomes each player is decisive over, in player order."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise AssignmentError("need at least one pair")
        for i, (a, b) in enumerate(pairs, start=1):
            if a == b:
                raise AssignmentError(f"pair of player {i} repeats outcome {a}")
            if a < 1 or b < 1:
                raise AssignmentError(f"pair of player {i} has a non-positive outcome")

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def members(self) -> frozenset:
        return frozenset(x for p in self.pairs for x in p)

    @property
    def disjoint(self) -> bool:
        return len(self.members) == 2 * self.n

    @property
    def max_outcome(self) -> int:
        return max(self.members)

    def pair(self, player: int) -> tuple[int, int]:
        return self.pairs[player - 1]

    def partner(self, player: int, outcome: int) -> int:
        a, b = self.pair(player)
        if outcome == a:
            return b
        if outcome == b:
            return a
        raise AssignmentError(f"outcome {outcome} is not in player {player}'s pair")

    def owner(self, outcome: int) -> Optional[int]:
        """Lowest-indexed player whose pair contains ``outcome``."""
        for i, p in enumerate(self.pairs, start=1):
            if outcome in p:
                return i
        return None

    def check_fits(self, n: int, m: int) -> None:
        if self.n != n:
            raise AssignmentError(f"assignment has {self.n} pairs but there are {n} players")
        if self.max_outcome > m:
            raise AssignmentError(f"assignment uses outcome {self.max_outcome} but m={m}")

    def format(self) -> str:
        return ";".join(f"{a},{b}" for a, b in self.pairs)

    def __str__(self):
        return " ".join("{%d,%d}" % p for p in self.pairs)


def canonical_assignment(n: int, m: int) -> PairAssignment:
    """Player ``i`` gets ``{2i-1, 2i}``."""
    if n < 1:
        raise AssignmentError("n must be positive")
    if m < 2 * n:
        raise AssignmentError(f"m={m} < 2n={2 * n}: not enough outcomes for disjoint pairs")
    return PairAssignment(tuple((2 * i - 1, 2 * i) for i in range(1, n + 1)))


def overlapping_assignment(n: int, m: int) -> PairAssignment:
    """Canonical pairing wrapped modulo ``m``; overlaps whenever ``m < 2n``."""
    if m < 2:
        raise AssignmentError("need at least two outcomes to form a pair")
    return PairAssignment(tuple(((2 * i - 2) % m + 1, (2 * i - 1) % m + 1) for i in range(1, n + 1)))


def parse_pairs(text: str, m: Optional[int] = None) -> PairAssignment:
    """Parse ``"1,2;3,4;5,6"``; validates distinctness and, given ``m``, range."""
    pairs = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise AssignmentError(f"malformed pair {chunk.strip()!r}; expected 'a,b'")
        pairs.append((int(parts[0]), int(parts[1])))
    assign = PairAssignment(tuple(pairs))
    if m is not None and assign.max_outcome > m:
        raise AssignmentError(f"pair member {assign.max_outcome} out of range 1..{m}")
    return assign


def liberal_rule(assign: PairAssignment, profile: Profile) -> frozenset:
    """Every member of a player's pair that the player weakly prefers to its partner."""
    if not assign.disjoint:
        raise AssignmentError("the liberal rule needs pairwise disjoint pairs")
    assign.check_fits(profile.n, profile.m)
    chosen = set()
    for order, (a, b) in zip(profile, assign.pairs):
        if order.weakly_prefers(a, b):
            chosen.add(a)
        if order.weakly_prefers(b, a):
            chosen.add(b)
    return frozenset(chosen)


def liberal(assign: PairAssignment) -> Rule:
    return partial(liberal_rule, assign)


# -- violations ---------------------------------------------------------------


class ViolationKind(enum.Enum):
    CHOICE_LIBERALISM = "choice-liberalism"
    NO_VETO_POWER = "no-veto-power"
    MONOTONICITY = "monotonicity"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    profiles: tuple[Profile, ...]
    player: Optional[int]
    outcomes: tuple[int, ...]
    explanation: str = field(default="", compare=False)

    def __str__(self):
        who = f" player {self.player}" if self.player is not None else ""
        return f"{self.kind.value}{who} on {self.outcomes}: {self.explanation}"


def _nonempty(rule: Rule, profile: Profile) -> frozenset:
    out = frozenset(rule(profile))
    if not out:
        raise EmptyOutcomeError(f"rule returned no outcome at profile {profile}")
    return out


def decisive_violations(
    rule: Rule, assign: PairAssignment, profiles: Iterable[Profile]
) -> list[Violation]:
    """Choice-liberalism failures of ``rule`` for the decisive pairs in ``assign``.

    For each profile and each player strictly preferring ``w`` to ``w2`` within
    their pair, a violation is recorded unless ``w`` is selected and ``w2`` is not.
    """
    found = []
    for profile in profiles:
        chosen = _nonempty(rule, profile)
        for i, (a, b) in enumerate(assign.pairs, start=1):
            order = profile[i]
            if order.strictly_prefers(a, b):
                best, worst = a, b
            elif order.strictly_prefers(b, a):
                best, worst = b, a
            else:
                continue
            if best in chosen and worst not in chosen:
                continue
            reasons = []
            if best not in chosen:
                reasons.append(f"{best} not selected")
            if worst in chosen:
                reasons.append(f"{worst} selected")
            found.append(
                Violation(
                    ViolationKind.CHOICE_LIBERALISM,
                    (profile,),
                    i,
                    (best, worst),
                    f"player {i} strictly prefers {best} to {worst} but " + " and ".join(reasons),
                )
            )
    return found


def no_veto_violation(chosen: Iterable[int], profile: Profile) -> Optional[Violation]:
    """First outcome top-ranked by at least ``n - 1`` players yet not chosen."""
    chosen = frozenset(chosen)
    for bad in sorted(chosen):
        if not 1 <= bad <= profile.m:
            raise PreferenceError(f"chosen outcome {bad} out of range 1..{profile.m}")
    for w in range(1, profile.m + 1):
        tops = sum(1 for order in profile if order.tier(w) == 1)
        if tops >= profile.n - 1 and w not in chosen:
            return Violation(
                ViolationKind.NO_VETO_POWER,
                (profile,),
                None,
                (w,),
                f"{tops} of {profile.n} players top-rank {w} but it is not chosen",
            )
    return None


def is_monotone_transformation(before: Profile, after: Profile, outcome: int) -> bool:
    """Does ``outcome`` keep or improve its position for everyone?

    True when every ``w`` ranked weakly below ``outcome`` in ``before`` is still
    weakly below it in ``after``.
    """
    if before.n != after.n or before.m != after.m:
        raise PreferenceError("profiles differ in dimensions")
    for old, new in zip(before, after):
        for w in range(1, before.m + 1):
            if old.weakly_prefers(outcome, w) and not new.weakly_prefers(outcome, w):
                return False
    return True


def monotonic_violation(rule: Rule, before: Profile, after: Profile) -> Optional[Violation]:
    chosen = _nonempty(rule, before)
    usable = [w for w in sorted(chosen) if is_monotone_transformation(before, after, w)]
    if not usable:
        raise UnusableTransformation("no selected outcome is weakly raised by the new profile")
    chosen_after = _nonempty(rule, after)
    for w in usable:
        if w not in chosen_after:
            return Violation(
                ViolationKind.MONOTONICITY,
                (before, after),
                None,
                (w,),
                f"{w} did not fall in anyone's ranking but was dropped",
            )
    return None


def raise_outcome(order: WeakOrder, base: WeakOrder, outcome: int) -> WeakOrder:
    """Lift ``outcome`` in ``order`` above everything it weakly beat in ``base``."""
    lower = [w for w in range(1, base.m + 1) if base.weakly_prefers(outcome, w)]
    ranks = list(order.ranks)
    # half-step so the lifted outcome can sit in a fresh tier
    lifted = min(ranks[w - 1] for w in lower)
    scaled = [2 * r for r in ranks]
    if lifted < ranks[outcome - 1]:
        scaled[outcome - 1] = 2 * lifted - 1
    levels = {v: k for k, v in enumerate(sorted(set(scaled)), start=1)}
    return WeakOrder(tuple(levels[v] for v in scaled))


def no_veto_conflict_profile(assign: PairAssignment, m: int, player: int = 1) -> Profile:
    """Everyone else uniquely top-ranks one member of ``player``'s pair, which
    ``player`` ranks strictly last."""
    target, partner = assign.pair(player)
    orders = []
    for i in range(1, assign.n + 1):
        if i == player:
            rest = [w for w in range(1, m + 1) if w not in (target, partner)]
            orders.append(WeakOrder.from_ranking([partner] + rest + [target], m))
        else:
            orders.append(WeakOrder.from_ranking([target], m))
    return Profile(tuple(orders))
