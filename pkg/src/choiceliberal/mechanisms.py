"""Finite game forms.

Strategy profiles are tuples of 0-based strategy indices, one per player;
players themselves are numbered from 1.  Every form can tabulate its outcome
function into an integer array of shape ``sizes``, which is what the
equilibrium solver consumes.
"""

from __future__ import annotations

import itertools
import math
import re
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .rules import AssignmentError, PairAssignment


class GameFormError(ValueError):
    pass


class ConsensusError(AssertionError):
    """Two different players each collected all-but-one of the votes."""


class GameForm:
    """Strategy sets plus a total outcome function."""

    n: int
    sizes: tuple[int, ...]

    def outcome(self, s: Sequence[int]) -> int:
        raise NotImplementedError

    def strategy_label(self, player: int, index: int) -> str:
        return str(index + 1)

    @cached_property
    def outcomes_used(self) -> frozenset:
        return frozenset(int(x) for x in np.unique(self.table()))

    @property
    def num_profiles(self) -> int:
        return math.prod(self.sizes)

    def profiles(self):
        return itertools.product(*(range(k) for k in self.sizes))

    def table(self) -> np.ndarray:
        cached = getattr(self, "_table", None)
        if cached is None:
            cached = np.empty(self.sizes, dtype=np.int64)
            for s in self.profiles():
                cached[s] = self.outcome(s)
            cached.setflags(write=False)
            self._table = cached
        return cached

    def format_profile(self, s: Sequence[int]) -> str:
        return "(" + ", ".join(self.strategy_label(i, k) for i, k in enumerate(s, start=1)) + ")"


class LiberalStrategy(NamedTuple):
    """Name ``z`` from your own pair and vote for player ``a``."""

    z: int
    a: int


class LiberalGameForm(GameForm):
    """Everyone names a member of their pair and a player.

    If some player ``k`` gets the votes of at least all but one players, the
    outcome is what ``k`` named; otherwise it is what player 1 named.
    """

    def __init__(self, assign: PairAssignment):
        if assign.n < 3:
            raise GameFormError("the liberal mechanism needs at least three players")
        if not assign.disjoint:
            raise AssignmentError("the liberal mechanism needs pairwise disjoint pairs")
        self.assign = assign
        self.n = assign.n
        self.strategies = tuple(
            tuple(LiberalStrategy(z, a) for z in sorted(pair) for a in range(1, self.n + 1))
            for pair in assign.pairs
        )
        self.sizes = tuple(len(s) for s in self.strategies)

    def evaluate(self, s: Sequence[LiberalStrategy]) -> int:
        votes = [0] * (self.n + 1)
        for _, a in s:
            votes[a] += 1
        winners = [k for k in range(1, self.n + 1) if votes[k] >= self.n - 1]
        if len(winners) > 1:
            raise ConsensusError(f"players {winners} all hold a consensus in {s}")
        if winners:
            return s[winners[0] - 1].z
        return s[0].z

    def outcome(self, s: Sequence[int]) -> int:
        return self.evaluate([self.strategies[i][k] for i, k in enumerate(s)])

    def index_of(self, player: int, strategy: LiberalStrategy) -> int:
        try:
            return self.strategies[player - 1].index(tuple(strategy))
        except ValueError:
            raise GameFormError(f"{strategy} is not a strategy of player {player}") from None

    def indices(self, s: Sequence[LiberalStrategy]) -> tuple[int, ...]:
        return tuple(self.index_of(i, st) for i, st in enumerate(s, start=1))

    def strategy_label(self, player: int, index: int) -> str:
        z, a = self.strategies[player - 1][index]
        return f"w{z}->{a}"


def liberal_game_form(assign: PairAssignment, n: int | None = None) -> LiberalGameForm:
    if n is not None and n != assign.n:
        raise GameFormError(f"assignment has {assign.n} pairs but n={n}")
    return LiberalGameForm(assign)


def eval_liberal(gf: LiberalGameForm, s: Sequence[LiberalStrategy]) -> int:
    return gf.evaluate([LiberalStrategy(*x) for x in s])


class MatrixGameForm(GameForm):
    """Two-player form: the row player is player 1, the column player is player 2."""

    n = 2

    def __init__(self, grid: Sequence[Sequence[int]], m: int | None = None):
        rows = [list(r) for r in grid]
        if not rows or not rows[0]:
            raise GameFormError("grid must have at least one row and one column")
        width = len(rows[0])
        for r, row in enumerate(rows, start=1):
            if len(row) != width:
                raise GameFormError(f"ragged grid: row {r} has {len(row)} cells, expected {width}")
        cells = [int(x) for row in rows for x in row]
        if m is None:
            m = max(cells)
        for x in cells:
            if not 1 <= x <= m:
                raise GameFormError(f"cell value {x} out of range 1..{m}")
        self.m = m
        self.grid = np.array(rows, dtype=np.int64)
        self.grid.setflags(write=False)
        self.sizes = self.grid.shape
        self._table = self.grid

    @property
    def rows(self) -> int:
        return self.sizes[0]

    @property
    def cols(self) -> int:
        return self.sizes[1]

    def outcome(self, s: Sequence[int]) -> int:
        r, c = s
        return int(self.grid[r, c])

    def constant_rows(self, outcome: int) -> list[int]:
        """0-based rows filled entirely with ``outcome``."""
        return [r for r in range(self.rows) if bool((self.grid[r] == outcome).all())]

    def format(self) -> str:
        lines = [f"outcomes: {self.m}", f"rows: {self.rows}", f"cols: {self.cols}"]
        lines += [f"row {r + 1}: " + " ".join(map(str, row)) for r, row in enumerate(self.grid.tolist())]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"MatrixGameForm({self.grid.tolist()}, m={self.m})"


def matrix_game_form(grid: Sequence[Sequence[int]], m: int | None = None) -> MatrixGameForm:
    return MatrixGameForm(grid, m)


_MATRIX_KEY = re.compile(r"^(outcomes|rows|cols)\s*:\s*(\S+)$")
_MATRIX_ROW = re.compile(r"^row\s+(\S+)\s*:\s*(.*)$")


def parse_matrix(text: str) -> MatrixGameForm:
    """Parse the ``outcomes/rows/cols/row <r>:`` text format."""
    header: dict[str, int] = {}
    rows: dict[int, list[int]] = {}
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if (match := _MATRIX_KEY.match(line)) is not None:
            key, value = match.groups()
            if key in header or not value.isdigit() or int(value) < 1:
                raise GameFormError(f"line {lineno}: bad or duplicate {key!r}")
            header[key] = int(value)
        elif (match := _MATRIX_ROW.match(line)) is not None:
            if len(header) < 3:
                raise GameFormError(f"line {lineno}: row before outcomes/rows/cols header")
            idx, body = match.groups()
            if not idx.isdigit() or not 1 <= int(idx) <= header["rows"] or int(idx) in rows:
                raise GameFormError(f"line {lineno}: bad or duplicate row index {idx!r}")
            cells = body.replace(",", " ").split()
            if not all(c.isdigit() for c in cells):
                raise GameFormError(f"line {lineno}: non-integer cell")
            if len(cells) != header["cols"]:
                raise GameFormError(f"line {lineno}: expected {header['cols']} cells, got {len(cells)}")
            rows[int(idx)] = [int(c) for c in cells]
        else:
            raise GameFormError(f"line {lineno}: unknown key or malformed line {line!r}")
    if len(header) < 3:
        raise GameFormError("missing outcomes/rows/cols header")
    if len(rows) != header["rows"]:
        raise GameFormError(f"expected {header['rows']} rows, got {len(rows)}")
    try:
        return MatrixGameForm([rows[r] for r in range(1, header["rows"] + 1)], header["outcomes"])
    except GameFormError as exc:
        raise GameFormError(f"line {lineno}: {exc}") from None


def attainable_set(gf: GameForm, player: int, others: Sequence[int]) -> frozenset:
    """Outcomes ``player`` can reach when the others play ``others``.

    ``others`` holds the other players' strategy indices in player order.
    """
    if len(others) != gf.n - 1:
        raise GameFormError(f"expected {gf.n - 1} opposing strategies, got {len(others)}")
    out = set()
    for k in range(gf.sizes[player - 1]):
        s = list(others)
        s.insert(player - 1, k)
        out.add(gf.outcome(s))
    return frozenset(out)
