"""Pure-strategy Nash equilibria of a game form under a preference profile.

Two routes are kept on purpose.  :func:`best_deviation` scans one player's
strategies one by one, a literal reading of the no-profitable-deviation
condition.  :func:`nash_equilibria` works on the whole outcome table at once:
a profile is an equilibrium when, for every player, its outcome's tier equals
the best tier reachable along that player's axis.  Tests check the two agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .mechanisms import GameForm
from .prefs import PreferenceError, Profile

DEFAULT_GUARD_LIMIT = 10**7


class GuardLimitError(RuntimeError):
    """A requested enumeration is larger than the configured guard limit."""


@dataclass(frozen=True)
class EquilibriumSet:
    profiles: tuple[tuple[int, ...], ...]
    outcomes: frozenset

    def __len__(self):
        return len(self.profiles)

    def __contains__(self, s):
        return tuple(s) in self.profiles


def _check_dims(gf: GameForm, profile: Profile) -> None:
    if profile.n != gf.n:
        raise PreferenceError(f"profile has {profile.n} players, game form has {gf.n}")
    top = max(gf.outcomes_used)
    if top > profile.m:
        raise PreferenceError(f"game form produces outcome {top} but profile ranks only {profile.m}")


def tier_arrays(profile: Profile) -> np.ndarray:
    """``(n, m + 1)`` array; entry ``[i, w]`` is player ``i + 1``'s tier of ``w``."""
    out = np.zeros((profile.n, profile.m + 1), dtype=np.int64)
    for i, order in enumerate(profile):
        out[i, 1:] = order.ranks
    return out


def best_deviation(gf: GameForm, profile: Profile, s: Sequence[int], player: int) -> Optional[int]:
    """First strategy of ``player`` that strictly improves on ``s``, if any."""
    order = profile[player]
    current = order.tier(gf.outcome(s))
    trial = list(s)
    for k in range(gf.sizes[player - 1]):
        trial[player - 1] = k
        if order.tier(gf.outcome(trial)) < current:
            return k
    return None


def is_nash(gf: GameForm, profile: Profile, s: Sequence[int]) -> bool:
    return all(best_deviation(gf, profile, s, i) is None for i in range(1, gf.n + 1))


def equilibrium_mask(table: np.ndarray, tiers: np.ndarray) -> np.ndarray:
    """Boolean array over strategy profiles marking equilibria."""
    mask = np.ones(table.shape, dtype=bool)
    for i in range(table.ndim):
        t = tiers[i][table]
        mask &= t == t.min(axis=i, keepdims=True)
    return mask


def nash_equilibria(
    gf: GameForm, profile: Profile, guard_limit: int = DEFAULT_GUARD_LIMIT
) -> EquilibriumSet:
    """All pure equilibria, in lexicographic strategy-index order."""
    if gf.num_profiles > guard_limit:
        raise GuardLimitError(f"{gf.num_profiles} strategy profiles exceed guard limit {guard_limit}")
    _check_dims(gf, profile)
    table = gf.table()
    mask = equilibrium_mask(table, tier_arrays(profile))
    found = tuple(tuple(int(x) for x in idx) for idx in np.argwhere(mask))
    return EquilibriumSet(found, frozenset(int(x) for x in table[mask]))


def equilibrium_outcomes(
    gf: GameForm, profile: Profile, guard_limit: int = DEFAULT_GUARD_LIMIT
) -> frozenset:
    return nash_equilibria(gf, profile, guard_limit).outcomes
