"""Exact winners for tiny instances by backward induction on the game graph.

Positions are (sorted cop multiset, robber square, side to move).  Starting
from the capture positions, buffered sweeps mark a cop-to-move position
winning when some joint cop move reaches a marked robber-to-move position,
and a robber-to-move position winning when every reachable robber square
leads to a marked cop-to-move position.  Unmarked positions are robber wins.
The pass at which a position is first marked is stored as its depth: it
strictly decreases along optimal play, which makes table-driven play-outs
terminate.
"""

from __future__ import annotations

import itertools
import json
import pickle
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .game import (
    Coord,
    GameState,
    GridSpec,
    MatchResult,
    Walk,
    reachable_set,
    run_match,
    witness_walk,
)

DEFAULT_BUDGET = 10**8


class BudgetExceededError(Exception):
    """The instance is too large for the configured solver budget."""


def _ball_size(n: int, speed: int) -> int:
    return min(n * n, 2 * speed * speed + 2 * speed + 1)


def check_budget(n: int, speed: int, cops: int, budget: int) -> None:
    encodings = (n * n) ** cops * n * n * 2
    work = (encodings // 2) * (5**cops + _ball_size(n, speed))
    if encodings > budget or work > budget:
        raise BudgetExceededError(
            f"instance n={n} speed={speed} cops={cops} needs about "
            f"{max(encodings, work)} units, budget is {budget}"
        )


@dataclass
class WinTable:
    """Cop-win positions of one instance, with first-marked pass depths."""

    n: int
    speed: int
    cops: int
    ctm: dict  # (multiset, robber) -> pass depth, cops to move
    rtm: dict  # (multiset, robber) -> pass depth, robber to move
    passes: int
    cop_succ: dict = field(repr=False, default_factory=dict)

    def _key(self, cops, robber) -> tuple:
        enc = tuple(sorted(self._sq(c) for c in cops))
        return (enc, self._sq(robber))

    def _sq(self, p) -> int:
        if isinstance(p, int):
            return p
        return (p[1] - 1) * self.n + (p[0] - 1)

    def coord(self, sq: int) -> Coord:
        return (sq % self.n + 1, sq // self.n + 1)

    def is_cop_win(self, cops, robber, to_move: str) -> bool:
        table = self.ctm if to_move == "cops" else self.rtm
        return self._key(cops, robber) in table

    def depth(self, cops, robber, to_move: str) -> Optional[int]:
        table = self.ctm if to_move == "cops" else self.rtm
        return table.get(self._key(cops, robber))

    def winning_placements(self) -> list[tuple]:
        """Cop multisets that win against every robber placement off them."""
        squares = range(self.n * self.n)
        out = []
        for P in itertools.combinations_with_replacement(squares, self.cops):
            if all((P, r) in self.ctm for r in squares if r not in P):
                out.append(P)
        return out

    def save(self, path: str | Path) -> None:
        """Binary table plus a JSON summary next to it."""
        path = Path(path)
        with open(path, "wb") as fh:
            pickle.dump(
                {
                    "n": self.n,
                    "speed": self.speed,
                    "cops": self.cops,
                    "ctm": self.ctm,
                    "rtm": self.rtm,
                    "passes": self.passes,
                },
                fh,
            )
        summary = {
            "n": self.n,
            "R": self.speed,
            "c": self.cops,
            "copWin": {
                ",".join(map(str, P)): all(
                    (P, r) in self.ctm for r in range(self.n * self.n) if r not in P
                )
                for P in itertools.combinations_with_replacement(
                    range(self.n * self.n), self.cops
                )
            },
        }
        with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
            json.dump(summary, fh, sort_keys=True, indent=2)

    @classmethod
    def load(cls, path: str | Path) -> "WinTable":
        with open(path, "rb") as fh:
            raw = pickle.load(fh)
        return cls(
            n=raw["n"],
            speed=raw["speed"],
            cops=raw["cops"],
            ctm=raw["ctm"],
            rtm=raw["rtm"],
            passes=raw["passes"],
        )


def _neighbors(n: int) -> list[list[int]]:
    out = []
    for sq in range(n * n):
        x, y = sq % n, sq // n
        opts = [sq]
        if x > 0:
            opts.append(sq - 1)
        if x < n - 1:
            opts.append(sq + 1)
        if y > 0:
            opts.append(sq - n)
        if y < n - 1:
            opts.append(sq + n)
        out.append(opts)
    return out


def _reach(n: int, speed: int, neighbors, P: tuple, r: int) -> tuple:
    blocked = set(P)
    seen = {r}
    frontier = [r]
    for _ in range(speed):
        nxt = []
        for sq in frontier:
            for q in neighbors[sq]:
                if q not in seen and q not in blocked:
                    seen.add(q)
                    nxt.append(q)
        if not nxt:
            break
        frontier = nxt
    return tuple(sorted(seen))


def solve(n: int, speed: int, cops: int, budget: int = DEFAULT_BUDGET) -> WinTable:
    """Least fixed point of the win equations for one instance."""
    check_budget(n, speed, cops, budget)
    neighbors = _neighbors(n)
    squares = range(n * n)
    multisets = list(itertools.combinations_with_replacement(squares, cops))

    cop_succ: dict[tuple, list[tuple]] = {}
    for P in multisets:
        succ = {tuple(sorted(t)) for t in itertools.product(*(neighbors[c] for c in P))}
        cop_succ[P] = sorted(succ)

    ctm: dict[tuple, int] = {}
    rtm: dict[tuple, int] = {}
    for P in multisets:
        occupied = set(P)
        for r in occupied:
            ctm[(P, r)] = 0
            rtm[(P, r)] = 0

    reach_cache: dict[tuple, tuple] = {}
    passes = 0
    while True:
        passes += 1
        new_ctm = []
        new_rtm = []
        for P in multisets:
            occupied = set(P)
            for r in squares:
                if r in occupied:
                    continue
                s = (P, r)
                if s not in ctm and any((Q, r) in rtm for Q in cop_succ[P]):
                    new_ctm.append(s)
                if s not in rtm:
                    targets = reach_cache.get(s)
                    if targets is None:
                        targets = _reach(n, speed, neighbors, P, r)
                        reach_cache[s] = targets
                    if all((P, q) in ctm for q in targets):
                        new_rtm.append(s)
        if not new_ctm and not new_rtm:
            passes -= 1
            break
        for s in new_ctm:
            ctm[s] = passes
        for s in new_rtm:
            rtm[s] = passes

    return WinTable(
        n=n, speed=speed, cops=cops, ctm=ctm, rtm=rtm, passes=passes, cop_succ=cop_succ
    )


def one_more_pass_changes(table: WinTable) -> bool:
    """True if another backward-induction sweep would mark anything new."""
    n = table.n
    neighbors = _neighbors(n)
    squares = range(n * n)
    for P in itertools.combinations_with_replacement(squares, table.cops):
        occupied = set(P)
        succ = table.cop_succ.get(P) or sorted(
            {tuple(sorted(t)) for t in itertools.product(*(neighbors[c] for c in P))}
        )
        for r in squares:
            if r in occupied:
                continue
            s = (P, r)
            if s not in table.ctm and any((Q, r) in table.rtm for Q in succ):
                return True
            if s not in table.rtm and all(
                (P, q) in table.ctm
                for q in _reach(n, table.speed, neighbors, P, r)
            ):
                return True
    return False


def cop_number(
    n: int, speed: int, max_cops: int, budget: int = DEFAULT_BUDGET
) -> Optional[int]:
    """Least team size up to max_cops with a placement that wins against
    every robber placement, or None when max_cops is not enough."""
    for c in range(1, max_cops + 1):
        table = solve(n, speed, c, budget)
        if table.winning_placements():
            return c
    return None


# ---------------------------------------------------------------------------
# Table-driven play
# ---------------------------------------------------------------------------


class TableCops:
    """Cop side playing the table: minimize the marked depth each move."""

    name = "table-optimal-cops"

    def __init__(self, table: WinTable):
        self.table = table

    def place(self, spec: GridSpec, count: int, rng) -> list[Coord]:
        if count != self.table.cops:
            raise ValueError("table was solved for a different team size")
        wins = self.table.winning_placements()
        P = wins[0] if wins else tuple([0] * count)
        return [self.table.coord(sq) for sq in P]

    def move(self, state: GameState, rng) -> list[Coord]:
        t = self.table
        P = tuple(sorted(t._sq(c) for c in state.cops))
        r = t._sq(state.robber)
        succ = t.cop_succ.get(P)
        if succ is None:
            neighbors = _neighbors(t.n)
            succ = sorted(
                {tuple(sorted(m)) for m in itertools.product(*(neighbors[c] for c in P))}
            )
        best, best_depth = None, None
        for Q in succ:
            d = t.rtm.get((Q, r))
            if d is not None and (best_depth is None or d < best_depth):
                best, best_depth = Q, d
        if best is None:
            best = P  # not winnable from here; hold position
        assignment = _assign_moves(t.n, [t._sq(c) for c in state.cops], best)
        return [t.coord(sq) for sq in assignment]


class TableRobber:
    """Robber side playing the table: stay in the unmarked region when
    possible, otherwise maximize the marked depth."""

    name = "table-optimal-robber"

    def __init__(self, table: WinTable):
        self.table = table

    def place(self, state: GameState, rng) -> Coord:
        t = self.table
        P = tuple(sorted(t._sq(c) for c in state.cops))
        occupied = set(P)
        best, best_depth = None, -1
        for r in range(t.n * t.n):
            if r in occupied:
                continue
            d = t.ctm.get((P, r))
            if d is None:
                return t.coord(r)
            if d > best_depth:
                best, best_depth = r, d
        return t.coord(best)

    def walk(self, state: GameState, rng) -> Walk:
        t = self.table
        P = tuple(sorted(t._sq(c) for c in state.cops))
        best, best_depth = None, -1
        for sq in sorted(reachable_set(state)):
            d = t.ctm.get((P, t._sq(sq)))
            if d is None:
                return witness_walk(state, sq)
            if d > best_depth:
                best, best_depth = sq, d
        return witness_walk(state, best)


def _assign_moves(n: int, sources: list[int], target_multiset: tuple) -> list[int]:
    """Per-cop destinations realizing a successor multiset."""
    neighbors = _neighbors(n)
    remaining = list(target_multiset)

    def backtrack(i: int) -> Optional[list[int]]:
        if i == len(sources):
            return []
        tried = set()
        for j, dest in enumerate(remaining):
            if dest in tried or dest not in neighbors[sources[i]]:
                continue
            tried.add(dest)
            rest = remaining[:j] + remaining[j + 1 :]
            saved = remaining[:]
            remaining[:] = rest
            tail = backtrack(i + 1)
            remaining[:] = saved
            if tail is not None:
                return [dest] + tail
        return None

    out = backtrack(0)
    if out is None:
        raise ValueError("target multiset is not reachable from the cop positions")
    return out


@dataclass
class VerifyReport:
    applicable: bool
    start_cop_win: Optional[bool]
    outcome: Optional[str]
    rounds: Optional[int]
    region_preserved: Optional[bool]
    notes: str
    result: Optional[MatchResult] = None


def verify_strategy_against_table(
    table: WinTable,
    cop_strategy=None,
    robber_strategy=None,
    max_rounds: Optional[int] = None,
    seed: int = 0,
) -> VerifyReport:
    """Play a strategy against the table's optimal adversary.

    Exactly one side must be provided; the table plays the other.  Reports
    whether the strategy held its winning region along the visited states.
    """
    if (cop_strategy is None) == (robber_strategy is None):
        raise ValueError("provide exactly one side; the table plays the other")
    from .evasion import HypothesisError  # deferred: avoids an import cycle

    spec = GridSpec(n=table.n, speed=table.speed)
    side_is_cops = robber_strategy is None
    cops = cop_strategy if cop_strategy is not None else TableCops(table)
    robber = robber_strategy if robber_strategy is not None else TableRobber(table)
    rounds_cap = max_rounds if max_rounds is not None else 10 * table.n * table.n
    try:
        result = run_match(spec, table.cops, cops, robber, rounds_cap, seed)
    except HypothesisError as exc:
        return VerifyReport(
            applicable=False,
            start_cop_win=None,
            outcome=None,
            rounds=None,
            region_preserved=None,
            notes=f"not applicable: {exc}",
        )

    start = next(rec for rec in result.trace if rec["actor"] == "robber")
    P = [tuple(p) for p in start["cops"]]
    start_win = table.is_cop_win(P, tuple(start["robber"]), "cops")
    preserved = True
    for rec in result.trace:
        if rec["robber"] is None or rec["event"] == "placement":
            continue
        to_move = "robber" if rec["actor"] == "cops" else "cops"
        if rec["event"] == "capture":
            continue
        win = table.is_cop_win(
            [tuple(p) for p in rec["cops"]], tuple(rec["robber"]), to_move
        )
        if side_is_cops and start_win and not win:
            preserved = False
        if not side_is_cops and not start_win and win:
            preserved = False
    return VerifyReport(
        applicable=True,
        start_cop_win=start_win,
        outcome=result.outcome,
        rounds=result.rounds,
        region_preserved=preserved,
        notes="",
        result=result,
    )
