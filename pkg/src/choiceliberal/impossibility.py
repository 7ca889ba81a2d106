"""Witnesses for the impossible cases.

With fewer than ``2n`` outcomes two decisive pairs must share an outcome, and
one profile then forces that outcome both in and out of any choice-liberal
rule.  With two players no game form implements the liberal rule; here that is
checked form by form by searching for a profile where equilibrium outcomes
and the rule disagree.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, TextIO, Union

import numpy as np

from .mechanisms import MatrixGameForm, attainable_set
from .nash import DEFAULT_GUARD_LIMIT, GuardLimitError, tier_arrays
from .prefs import Profile, WeakOrder
from .rules import AssignmentError, PairAssignment, liberal, liberal_rule
from .verify import (
    ProfileVerdict,
    adversarial_profiles,
    check_implementation_at,
    two_player_step_profiles,
)

PROGRESS_EVERY = 10_000


# -- overlapping pairs -----------------------------------------------------------


def pigeonhole_overlap(assign: PairAssignment) -> Optional[tuple[int, int, int]]:
    """``(i, j, shared)`` for the first two players whose pairs intersect."""
    for i, j in itertools.combinations(range(1, assign.n + 1), 2):
        common = set(assign.pair(i)) & set(assign.pair(j))
        if common:
            return i, j, min(common)
    return None


@dataclass(frozen=True)
class ContradictionWitness:
    """Player ``i`` puts ``shared`` over ``partner_i``; player ``j`` puts
    ``partner_j`` over ``shared``."""

    assign: PairAssignment
    i: int
    j: int
    shared: int
    partner_i: int
    partner_j: int
    profile: Profile

    def validate(self) -> tuple[bool, bool]:
        """Whether the profile forces ``shared`` in (via ``i``) and out (via ``j``)."""
        forced_in = (
            self.shared in self.assign.pair(self.i)
            and self.assign.partner(self.i, self.shared) == self.partner_i
            and self.profile[self.i].strictly_prefers(self.shared, self.partner_i)
        )
        forced_out = (
            self.shared in self.assign.pair(self.j)
            and self.assign.partner(self.j, self.shared) == self.partner_j
            and self.profile[self.j].strictly_prefers(self.partner_j, self.shared)
        )
        return forced_in, forced_out

    @property
    def valid(self) -> bool:
        return all(self.validate())

    def format(self) -> str:
        forced_in, forced_out = self.validate()
        s, a, b = self.shared, self.partner_i, self.partner_j
        lines = [
            f"pairs: {self.assign}",
            f"players {self.i} and {self.j} share outcome w{s}",
            f"player {self.i} decisive over {{w{s}, w{a}}} and prefers w{s} > w{a}"
            f" => w{s} must be selected [{'ok' if forced_in else 'FAILED'}]",
            f"player {self.j} decisive over {{w{s}, w{b}}} and prefers w{b} > w{s}"
            f" => w{s} must not be selected [{'ok' if forced_out else 'FAILED'}]",
            "profile:",
        ]
        lines += [f"  pref {k}: {o}" for k, o in enumerate(self.profile, start=1)]
        lines.append("contradiction: no choice-liberal rule exists" if self.valid else "witness INVALID")
        return "\n".join(lines)


def contradiction_witness(
    assign: PairAssignment, m: int, overlap: Optional[tuple[int, int, int]] = None
) -> ContradictionWitness:
    """Build the clashing profile for an overlap (default: the first one found).

    Players other than ``i`` and ``j`` get the index order.
    """
    if overlap is None:
        overlap = pigeonhole_overlap(assign)
        if overlap is None:
            raise AssignmentError("pairs are disjoint; there is no contradiction to build")
    i, j, shared = overlap
    if i == j:
        raise AssignmentError("the two players must differ")
    assign.check_fits(assign.n, m)
    partner_i = assign.partner(i, shared)
    partner_j = assign.partner(j, shared)
    orders = []
    for k in range(1, assign.n + 1):
        if k == i:
            orders.append(WeakOrder.from_ranking([shared, partner_i], m))
        elif k == j:
            orders.append(WeakOrder.from_ranking([partner_j, shared], m))
        else:
            orders.append(WeakOrder.from_ranking([], m))
    return ContradictionWitness(assign, i, j, shared, partner_i, partner_j, Profile(tuple(orders)))


# -- two-player refutation ---------------------------------------------------------


def find_universal_attainers(gf: MatrixGameForm, targets) -> dict[int, frozenset]:
    """For each target, the players who can reach it whatever the opponent does."""
    row_sets = [attainable_set(gf, 1, [c]) for c in range(gf.cols)]
    col_sets = [attainable_set(gf, 2, [r]) for r in range(gf.rows)]
    out = {}
    for w in sorted(targets):
        who = set()
        if all(w in s for s in row_sets):
            who.add(1)
        if all(w in s for s in col_sets):
            who.add(2)
        out[w] = frozenset(who)
    return out


def _check_two_player(assign: PairAssignment, m: int) -> None:
    if assign.n != 2:
        raise AssignmentError("two-player refutation needs exactly two pairs")
    if not assign.disjoint:
        raise AssignmentError("two-player refutation needs disjoint pairs")
    if assign.max_outcome > m:
        raise AssignmentError(f"pairs use outcome {assign.max_outcome} but m={m}")


def probe_profiles(assign: PairAssignment, m: int) -> list[Profile]:
    """Probe order for refuting a two-player form.

    The two-player step profiles come first, then the rest of the adversarial
    list, then every pair of linear orders over the pair members with the
    remaining outcomes appended in index order.
    """
    _check_two_player(assign, m)
    members = sorted(assign.members)
    linear = [WeakOrder.from_ranking(p, m) for p in itertools.permutations(members)]
    probes = two_player_step_profiles(assign, m) + adversarial_profiles(assign, m)
    probes += [Profile((a, b)) for a, b in itertools.product(linear, repeat=2)]
    return list(dict.fromkeys(probes))


@dataclass(frozen=True)
class RefutationWitness:
    gf: MatrixGameForm
    verdict: ProfileVerdict
    probes_used: int
    attainers: dict = field(default_factory=dict)
    dictator: Optional[int] = None

    @property
    def profile(self) -> Profile:
        return self.verdict.profile

    def format(self) -> str:
        lines = ["game form:"]
        lines += ["  " + " ".join(f"w{x}" for x in row) for row in self.gf.grid.tolist()]
        for w, who in self.attainers.items():
            names = ", ".join(("row", "col")[p - 1] for p in sorted(who)) or "nobody"
            lines.append(f"  w{w} attainable against every opposing strategy by: {names}")
        if self.dictator is not None:
            lines.append(f"  dictator: player {self.dictator} ({('row', 'col')[self.dictator - 1]})")
        lines.append(f"refuted after {self.probes_used} probe(s):")
        lines.append(self.verdict.format())
        return "\n".join(lines)


@dataclass(frozen=True)
class Unrefuted:
    """No probe separated equilibrium outcomes from the rule at this bound."""

    gf: MatrixGameForm
    probes_tried: int


def refute_two_player(
    gf: MatrixGameForm, assign: PairAssignment, probes: Optional[list[Profile]] = None
) -> Union[RefutationWitness, Unrefuted]:
    """First probe at which equilibrium outcomes differ from the liberal rule.

    ``probes`` defaults to :func:`probe_profiles`.
    """
    m = max(gf.m, assign.max_outcome)
    if probes is None:
        probes = probe_profiles(assign, m)
    rule = liberal(assign)
    for k, probe in enumerate(probes, start=1):
        verdict = check_implementation_at(gf, rule, probe)
        if not verdict.ok:
            attainers = find_universal_attainers(gf, assign.members)
            dictators = [p for p in (1, 2) if all(p in who for who in attainers.values())]
            return RefutationWitness(gf, verdict, k, attainers, dictators[0] if len(dictators) == 1 else None)
    return Unrefuted(gf, len(probes))


# -- bounded exhaustive search --------------------------------------------------------


@dataclass
class SearchReport:
    rows: int
    cols: int
    m: int
    assign: PairAssignment
    enumerated: int = 0
    refuted: int = 0
    max_probes: int = 0
    unrefuted: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def complete(self) -> bool:
        return self.refuted == self.enumerated

    def summary_line(self) -> str:
        return (f"rows={self.rows} cols={self.cols} m={self.m} enumerated={self.enumerated} "
                f"refuted={self.refuted} unrefuted={len(self.unrefuted)} max_probes={self.max_probes}")

    def format(self) -> str:
        lines = [
            f"two-player search over {self.rows}x{self.cols} grids, m={self.m}, pairs {self.assign}",
            f"forms enumerated: {self.enumerated}",
            f"forms refuted:    {self.refuted}",
            f"max probes used per form: {self.max_probes}",
        ]
        if self.unrefuted:
            lines.append(f"UNREFUTED FORMS AT THIS BOUND: {len(self.unrefuted)}")
            lines += [f"  {g}" for g in self.unrefuted[:20]]
        else:
            lines.append("every form refuted (bounded evidence, not a proof)")
        return "\n".join(lines)


def grids_from_indices(indices: np.ndarray, rows: int, cols: int, m: int) -> np.ndarray:
    """Row-major grids with cells in ``1..m``; index 0 is all ones, lexicographic."""
    cells = rows * cols
    powers = m ** np.arange(cells - 1, -1, -1, dtype=np.int64)
    digits = (indices[:, None] // powers[None, :]) % m
    return (digits + 1).reshape(-1, rows, cols)


def first_failing_probe(grids: np.ndarray, probes: list[Profile], rule_sets: list[frozenset]) -> np.ndarray:
    """1-based index of the first probe refuting each grid, 0 if none does."""
    first = np.zeros(len(grids), dtype=np.int64)
    active = np.arange(len(grids))
    bits = np.int64(1) << grids.astype(np.int64)
    for k, (probe, chosen) in enumerate(zip(probes, rule_sets), start=1):
        if active.size == 0:
            break
        g = grids[active]
        mask = np.ones(g.shape, dtype=bool)
        tiers = tier_arrays(probe)
        # axis 0 is the batch; row player moves along axis 1, column along axis 2
        for player, axis in ((0, 1), (1, 2)):
            t = tiers[player][g]
            mask &= t == t.min(axis=axis, keepdims=True)
        got = np.bitwise_or.reduce(np.where(mask, bits[active], 0).reshape(len(active), -1), axis=1)
        want = sum(1 << w for w in chosen)
        failed = got != want
        first[active[failed]] = k
        active = active[~failed]
    return first


def _search_chunk(args):
    start, stop, rows, cols, m, probes, rule_sets = args
    grids = grids_from_indices(np.arange(start, stop, dtype=np.int64), rows, cols, m)
    first = first_failing_probe(grids, probes, rule_sets)
    bad = [grids[k].tolist() for k in np.flatnonzero(first == 0)]
    return stop - start, int((first > 0).sum()), int(first.max(initial=0)), bad


def search_two_player(
    rows: int,
    cols: int,
    m: int,
    assign: PairAssignment,
    *,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
    threads: int = 1,
    progress: Optional[TextIO] = None,
) -> SearchReport:
    """Try to refute every ``rows x cols`` outcome grid over ``m`` outcomes."""
    _check_two_player(assign, m)
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    total = m ** (rows * cols)
    if total > guard_limit:
        raise GuardLimitError(f"{m}^{rows * cols} = {total} forms exceed guard limit {guard_limit}")
    t0 = time.perf_counter()
    probes = probe_profiles(assign, m)
    rule_sets = [liberal_rule(assign, p) for p in probes]
    report = SearchReport(rows, cols, m, assign)
    jobs = [
        (start, min(start + PROGRESS_EVERY, total), rows, cols, m, probes, rule_sets)
        for start in range(0, total, PROGRESS_EVERY)
    ]
    if threads > 1:
        pool = ProcessPoolExecutor(max_workers=threads)
        results = pool.map(_search_chunk, jobs)
    else:
        pool = None
        results = map(_search_chunk, jobs)
    try:
        for done, refuted, used, bad in results:
            report.enumerated += done
            report.refuted += refuted
            report.max_probes = max(report.max_probes, used)
            report.unrefuted.extend(bad)
            if progress is not None:
                print(f"searched {report.enumerated}/{total} forms", file=progress, flush=True)
    finally:
        if pool is not None:
            pool.shutdown()
    report.elapsed = time.perf_counter() - t0
    return report
