"""Outcomes, weak orders and preference profiles.

A weak order over outcomes ``1..m`` is stored as a vector of tiers: ``ranks[k]``
is the tier of outcome ``k + 1`` and a lower tier is more preferred.  Tiers form
the contiguous range ``1..t``, so completeness, transitivity and reflexivity hold
by construction.

Enumeration order is lexicographic in the rank vector.  For ``m = 3`` this
starts ``(1, 1, 1), (1, 1, 2), (1, 2, 1), ...`` and ends ``(3, 2, 1)``.  The
sampler draws a uniform index into that sequence and unranks it, so samples
are exactly uniform over all weak orders.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class PreferenceError(ValueError):
    """Invalid weak order, profile or outcome index."""


class ProfileParseError(PreferenceError):
    """Malformed profile text; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Relation(enum.Enum):
    STRICTLY_PREFERS = ">"
    INDIFFERENT = "="
    STRICTLY_DISPREFERRED = "<"


@dataclass(frozen=True)
class WeakOrder:
    """A complete preorder over outcomes ``1..m`` in tier form."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        if not ranks:
            raise PreferenceError("a weak order needs at least one outcome")
        if set(ranks) != set(range(1, max(ranks) + 1)):
            raise PreferenceError(f"tiers {ranks} are not contiguous from 1")

    @property
    def m(self) -> int:
        return len(self.ranks)

    def tier(self, outcome: int) -> int:
        _check_outcome(outcome, self.m)
        return self.ranks[outcome - 1]

    @property
    def tiers(self) -> list[list[int]]:
        """Outcomes grouped by tier, best tier first."""
        groups: list[list[int]] = [[] for _ in range(max(self.ranks))]
        for outcome, r in enumerate(self.ranks, start=1):
            groups[r - 1].append(outcome)
        return groups

    @property
    def is_strict(self) -> bool:
        return len(set(self.ranks)) == self.m

    def weakly_prefers(self, a: int, b: int) -> bool:
        return self.tier(a) <= self.tier(b)

    def strictly_prefers(self, a: int, b: int) -> bool:
        return self.tier(a) < self.tier(b)

    @classmethod
    def from_tiers(cls, tiers: Sequence[Iterable[int]], m: int) -> "WeakOrder":
        """Build from groups of outcomes, best group first.

        Every outcome ``1..m`` must appear in exactly one group.
        """
        ranks = [0] * m
        for t, group in enumerate(tiers, start=1):
            for outcome in group:
                _check_outcome(outcome, m)
                if ranks[outcome - 1]:
                    raise PreferenceError(f"outcome {outcome} listed twice")
                ranks[outcome - 1] = t
        missing = [k + 1 for k, r in enumerate(ranks) if r == 0]
        if missing:
            raise PreferenceError(f"outcomes {missing} not ranked")
        return cls(tuple(ranks))

    @classmethod
    def from_ranking(cls, best_first: Sequence[int], m: int) -> "WeakOrder":
        """Linear order; outcomes left out are appended below in index order."""
        seen = list(dict.fromkeys(best_first))
        rest = [k for k in range(1, m + 1) if k not in seen]
        return cls.from_tiers([[k] for k in seen + rest], m)

    @classmethod
    def indifferent(cls, m: int) -> "WeakOrder":
        return cls((1,) * m)

    def format(self) -> str:
        return " > ".join(" = ".join(map(str, g)) for g in self.tiers)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Profile:
    """One weak order per player, all over the same outcome set."""

    orders: tuple[WeakOrder, ...]

    def __post_init__(self):
        orders = tuple(self.orders)
        object.__setattr__(self, "orders", orders)
        if not orders:
            raise PreferenceError("a profile needs at least one player")
        if len({o.m for o in orders}) != 1:
            raise PreferenceError("orders disagree on the number of outcomes")

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def m(self) -> int:
        return self.orders[0].m

    def __getitem__(self, player: int) -> WeakOrder:
        """1-based player lookup."""
        if not 1 <= player <= self.n:
            raise PreferenceError(f"player {player} out of range 1..{self.n}")
        return self.orders[player - 1]

    def __iter__(self):
        return iter(self.orders)


def _check_outcome(outcome: int, m: int) -> None:
    if not 1 <= outcome <= m:
        raise PreferenceError(f"outcome {outcome} out of range 1..{m}")


def compare(order: WeakOrder, a: int, b: int) -> Relation:
    ta, tb = order.tier(a), order.tier(b)
    if ta < tb:
        return Relation.STRICTLY_PREFERS
    if ta == tb:
        return Relation.INDIFFERENT
    return Relation.STRICTLY_DISPREFERRED


# -- counting and enumeration ------------------------------------------------


def ordered_bell(m: int) -> int:
    """Number of weak orders on ``m`` labelled outcomes."""
    if m < 0:
        raise PreferenceError("m must be non-negative")
    return _completions(0, 0, m)


@lru_cache(maxsize=None)
def _completions(used: int, missing: int, remaining: int) -> int:
    # Ways to fill `remaining` positions so the final tier set is contiguous.
    # `used` tiers below the current maximum are taken, `missing` are gaps
    # below the maximum that must still be filled.
    if remaining < missing:
        return 0
    if remaining == 0:
        return 1
    total = used * _completions(used, missing, remaining - 1)
    if missing:
        total += missing * _completions(used + 1, missing - 1, remaining - 1)
    # a brand-new tier `skip` levels above the current maximum
    for skip in range(remaining - missing):
        total += _completions(used + 1, missing + skip, remaining - 1)
    return total


def _candidates(prefix: Sequence[int], remaining: int) -> Iterator[tuple[int, int]]:
    """Yield ``(tier, completions)`` for the next position, ascending by tier."""
    top = max(prefix, default=0)
    present = set(prefix)
    used = len(present)
    missing = top - used
    for t in range(1, top + 1):
        if t in present:
            count = _completions(used, missing, remaining - 1)
        else:
            count = _completions(used + 1, missing - 1, remaining - 1)
        if count:
            yield t, count
    for skip in range(remaining - missing):
        count = _completions(used + 1, missing + skip, remaining - 1)
        if count:
            yield top + 1 + skip, count


def enumerate_orders(m: int, strict_only: bool = False) -> Iterator[WeakOrder]:
    """Every weak order (or linear order) on ``m`` outcomes, lexicographically."""
    if m < 1:
        raise PreferenceError("m must be at least 1")
    if strict_only:
        for perm in itertools.permutations(range(1, m + 1)):
            yield WeakOrder(perm)
        return

    def walk(prefix: list[int]):
        if len(prefix) == m:
            yield WeakOrder(tuple(prefix))
            return
        for t, _ in _candidates(prefix, m - len(prefix)):
            prefix.append(t)
            yield from walk(prefix)
            prefix.pop()

    yield from walk([])


def count_orders(m: int, strict_only: bool = False) -> int:
    return math.factorial(m) if strict_only else ordered_bell(m)


def unrank_weak_order(index: int, m: int) -> WeakOrder:
    """The ``index``-th weak order in :func:`enumerate_orders` order."""
    if m < 1:
        raise PreferenceError("m must be at least 1")
    if not 0 <= index < ordered_bell(m):
        raise PreferenceError(f"index {index} out of range for m={m}")
    prefix: list[int] = []
    for pos in range(m):
        for t, count in _candidates(prefix, m - pos):
            if index < count:
                prefix.append(t)
                break
            index -= count
    return WeakOrder(tuple(prefix))


def rank_weak_order(order: WeakOrder) -> int:
    """Inverse of :func:`unrank_weak_order`."""
    index = 0
    prefix: list[int] = []
    m = order.m
    for pos, t in enumerate(order.ranks):
        for cand, count in _candidates(prefix, m - pos):
            if cand == t:
                break
            index += count
        prefix.append(t)
    return index


def sample_weak_order(m: int, rng: random.Random, strict_only: bool = False) -> WeakOrder:
    """Uniform draw; all randomness comes from ``rng``."""
    if m < 1:
        raise PreferenceError("m must be at least 1")
    if strict_only:
        perm = list(range(1, m + 1))
        rng.shuffle(perm)
        return WeakOrder(tuple(perm))
    return unrank_weak_order(rng.randrange(ordered_bell(m)), m)


def sample_profile(n: int, m: int, rng: random.Random, strict_only: bool = False) -> Profile:
    return Profile(tuple(sample_weak_order(m, rng, strict_only) for _ in range(n)))


def enumerate_profiles(n: int, m: int, strict_only: bool = False) -> Iterator[Profile]:
    """Cartesian product of :func:`enumerate_orders`, first player slowest."""
    orders = list(enumerate_orders(m, strict_only))
    for combo in itertools.product(orders, repeat=n):
        yield Profile(combo)


# -- text format -------------------------------------------------------------

_HEADER = re.compile(r"^(outcomes|players)\s*:\s*(\S+)$")
_PREF = re.compile(r"^pref\s+(\S+)\s*:\s*(.*)$")


def parse_weak_order(text: str, m: int, lineno: int = 1) -> WeakOrder:
    tiers = []
    for group in text.split(">"):
        members = []
        for tok in group.split("="):
            tok = tok.strip()
            if not tok.isdigit():
                raise ProfileParseError(lineno, f"expected an outcome index, got {tok!r}")
            members.append(int(tok))
        tiers.append(members)
    seen: set[int] = set()
    for members in tiers:
        for k in members:
            if not 1 <= k <= m:
                raise ProfileParseError(lineno, f"outcome {k} out of range 1..{m}")
            if k in seen:
                raise ProfileParseError(lineno, f"duplicate outcome {k}")
            seen.add(k)
    missing = sorted(set(range(1, m + 1)) - seen)
    if missing:
        raise ProfileParseError(lineno, f"missing outcomes {missing}")
    return WeakOrder.from_tiers(tiers, m)


def parse_profile(text: str) -> Profile:
    """Parse the line-oriented profile format.

    ``outcomes: <m>`` and ``players: <n>`` must precede the ``pref <i>: ...``
    lines; ``#`` starts a comment.
    """
    header: dict[str, int] = {}
    prefs: dict[int, WeakOrder] = {}
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if (match := _HEADER.match(line)) is not None:
            key, value = match.groups()
            if key in header:
                raise ProfileParseError(lineno, f"duplicate key {key!r}")
            if not value.isdigit() or int(value) < 1:
                raise ProfileParseError(lineno, f"{key} must be a positive integer")
            header[key] = int(value)
            continue
        if (match := _PREF.match(line)) is not None:
            who, body = match.groups()
            if "outcomes" not in header or "players" not in header:
                raise ProfileParseError(lineno, "pref line before outcomes/players")
            if not who.isdigit() or not 1 <= int(who) <= header["players"]:
                raise ProfileParseError(lineno, f"bad player index {who!r}")
            if int(who) in prefs:
                raise ProfileParseError(lineno, f"player {who} given twice")
            prefs[int(who)] = parse_weak_order(body, header["outcomes"], lineno)
            continue
        key = line.split(":", 1)[0].strip() if ":" in line else line
        raise ProfileParseError(lineno, f"unknown key or malformed line {key!r}")
    if "outcomes" not in header or "players" not in header:
        raise ProfileParseError(lineno or 1, "missing outcomes/players header")
    n = header["players"]
    if len(prefs) != n:
        missing = sorted(set(range(1, n + 1)) - set(prefs))
        raise ProfileParseError(lineno or 1, f"expected {n} pref lines, missing players {missing}")
    return Profile(tuple(prefs[i] for i in range(1, n + 1)))


def format_profile(profile: Profile) -> str:
    lines = [f"outcomes: {profile.m}", f"players: {profile.n}"]
    lines += [f"pref {i}: {o.format()}" for i, o in enumerate(profile, start=1)]
    return "\n".join(lines) + "\n"
