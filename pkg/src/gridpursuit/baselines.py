"""Simple adversaries: cops to hunt the evader, robbers to feed the sweep.

Tie-breaking rules are fixed so that traces are reproducible; randomized
strategies draw only from the generator handed in by the match runner.
"""

from __future__ import annotations

from .game import (
    Coord,
    GameState,
    GridSpec,
    Walk,
    adjacent,
    reachable_set,
    witness_walk,
)

INF = float("inf")


def _spread_columns(n: int, count: int) -> list[int]:
    return [max(1, min(n, ((i + 1) * n) // (count + 1))) for i in range(count)]


def _spread_placement(spec: GridSpec, count: int) -> list[Coord]:
    y = (spec.n + 1) // 2
    return [(x, y) for x in _spread_columns(spec.n, count)]


def _min_cop_distance(sq: Coord, cops: tuple[Coord, ...]):
    if not cops:
        return INF
    return min(abs(sq[0] - c[0]) + abs(sq[1] - c[1]) for c in cops)


class GreedyPursuer:
    """Each cop steps to reduce grid distance to the robber; ties prefer the
    vertical step, then left."""

    name = "greedy-pursuer"

    def place(self, spec: GridSpec, count: int, rng) -> list[Coord]:
        return _spread_placement(spec, count)

    def move(self, state: GameState, rng) -> list[Coord]:
        n = state.spec.n
        rx, ry = state.robber
        dests = []
        for x, y in state.cops:
            sy = (ry > y) - (ry < y)
            candidates = [
                (x, y + sy),
                (x, y - sy),
                (x - 1, y),
                (x + 1, y),
                (x, y),
            ]
            legal = [
                c
                for c in candidates
                if 1 <= c[0] <= n and 1 <= c[1] <= n and (c == (x, y) or adjacent((x, y), c))
            ]
            best = min(abs(c[0] - rx) + abs(c[1] - ry) for c in legal)
            dests.append(next(c for c in legal if abs(c[0] - rx) + abs(c[1] - ry) == best))
        return dests


class ShadowPursuer:
    """Each cop matches the robber's column before closing vertically."""

    name = "shadow-pursuer"

    def place(self, spec: GridSpec, count: int, rng) -> list[Coord]:
        return _spread_placement(spec, count)

    def move(self, state: GameState, rng) -> list[Coord]:
        rx, ry = state.robber
        dests = []
        for x, y in state.cops:
            if x != rx:
                dests.append((x + ((rx > x) - (rx < x)), y))
            elif y != ry:
                dests.append((x, y + ((ry > y) - (ry < y))))
            else:  # co-located is impossible mid-game; stand still defensively
                dests.append((x, y))
        return dests


class RandomCops:
    """Uniformly random placement and unit steps (including staying put)."""

    name = "random-cop"

    def place(self, spec: GridSpec, count: int, rng) -> list[Coord]:
        return [
            (rng.randrange(1, spec.n + 1), rng.randrange(1, spec.n + 1))
            for _ in range(count)
        ]

    def move(self, state: GameState, rng) -> list[Coord]:
        n = state.spec.n
        dests = []
        for x, y in state.cops:
            options = [(x, y)] + [
                c
                for c in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))
                if 1 <= c[0] <= n and 1 <= c[1] <= n
            ]
            dests.append(options[rng.randrange(len(options))])
        return dests


class ScriptedCops:
    """Replays a fixed list of cop position lists, then holds position.

    The script is a list whose first entry is the placement and whose later
    entries are the full cop lists after each cop turn; illegal entries abort
    the match attributed to the cops.
    """

    name = "ambush-script"

    def __init__(self, script: list[list[Coord]]):
        if not script:
            raise ValueError("script needs at least a placement entry")
        self.script = [[(int(x), int(y)) for x, y in row] for row in script]
        self._step = 0

    def place(self, spec: GridSpec, count: int, rng) -> list[Coord]:
        self._step = 0
        return list(self.script[0])

    def move(self, state: GameState, rng) -> list[Coord]:
        self._step += 1
        if self._step < len(self.script):
            return list(self.script[self._step])
        return list(state.cops)


class StationaryRobber:
    """Places as far from the cops as possible, then never moves."""

    name = "stationary"

    def place(self, state: GameState, rng) -> Coord:
        return _max_min_distance_square(state)

    def walk(self, state: GameState, rng) -> Walk:
        return [state.robber]


class GreedyEvader:
    """Walks to the reachable square maximizing distance to the nearest cop;
    stays put unless that strictly improves, ties to the smallest coordinate."""

    name = "greedy-evader"

    def place(self, state: GameState, rng) -> Coord:
        return _max_min_distance_square(state)

    def walk(self, state: GameState, rng) -> Walk:
        current = _min_cop_distance(state.robber, state.cops)
        best_sq, best_val = None, current
        for sq in sorted(reachable_set(state)):
            val = _min_cop_distance(sq, state.cops)
            if val > best_val:
                best_sq, best_val = sq, val
        if best_sq is None:
            return [state.robber]
        return witness_walk(state, best_sq)


class RandomEvader:
    """Uniform random placement off the cops and uniform reachable targets."""

    name = "random-evader"

    def place(self, state: GameState, rng) -> Coord:
        cops = set(state.cops)
        while True:
            sq = (rng.randrange(1, state.spec.n + 1), rng.randrange(1, state.spec.n + 1))
            if sq not in cops:
                return sq

    def walk(self, state: GameState, rng) -> Walk:
        targets = sorted(reachable_set(state))
        return witness_walk(state, targets[rng.randrange(len(targets))])


def _max_min_distance_square(state: GameState) -> Coord:
    n = state.spec.n
    cops = set(state.cops)
    best_sq, best_val = None, -1
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            if (x, y) in cops:
                continue
            val = _min_cop_distance((x, y), state.cops)
            if val > best_val or (val == best_val and (x, y) < best_sq):
                best_sq, best_val = (x, y), val
    return best_sq
