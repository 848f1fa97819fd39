"""Board, turns, and move legality for the fast-robber pursuit game.

The game is played on an n x n grid of squares, adjacent iff they share an
edge.  A team of unit-speed cops plays against a single robber that may, on
its turn, take any walk of at most `speed` edges that never touches a
cop-occupied square.  Cops place first, then the robber, then the sides move
alternately starting with the cops.  The cops win by moving onto the
robber's square.

States are small immutable values holding only piece coordinates, never a
board array, so grids with sides in the millions are as cheap as tiny ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional

Coord = tuple[int, int]
Walk = list[Coord]

PHASE_COPS_PLACING = "cops-placing"
PHASE_ROBBER_PLACING = "robber-placing"
PHASE_COPS_TO_MOVE = "cops-to-move"
PHASE_ROBBER_TO_MOVE = "robber-to-move"
PHASE_CAPTURED = "captured"

OUTCOME_CAPTURE = "capture"
OUTCOME_SURVIVED = "survived"
OUTCOME_RESIGNED = "robber-resigned"


class RuleViolation(Exception):
    """A placement or move that breaks the rules, attributed to one side."""

    def __init__(self, actor: str, reason: str):
        self.actor = actor
        self.reason = reason
        super().__init__(f"{actor}: {reason}")


@dataclass(frozen=True)
class GridSpec:
    """Board geometry and robber speed."""

    n: int
    speed: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid side must be >= 2, got {self.n}")
        if self.speed < 1:
            raise ValueError(f"robber speed must be >= 1, got {self.speed}")

    def in_bounds(self, p: Coord) -> bool:
        return 1 <= p[0] <= self.n and 1 <= p[1] <= self.n


@dataclass(frozen=True)
class GameState:
    spec: GridSpec
    cops: tuple[Coord, ...]
    robber: Optional[Coord]
    phase: str
    round: int = 0


def adjacent(a: Coord, b: Coord) -> bool:
    """True iff the squares share an edge (not merely a corner)."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def initial_state(spec: GridSpec) -> GameState:
    return GameState(spec=spec, cops=(), robber=None, phase=PHASE_COPS_PLACING)


def place_cops(state: GameState, positions: Iterable[Coord]) -> GameState:
    """Put the cop team on the board.  Duplicate squares are allowed."""
    if state.phase != PHASE_COPS_PLACING:
        raise RuleViolation("cops", f"cannot place cops in phase {state.phase}")
    cops = tuple((int(x), int(y)) for x, y in positions)
    if not cops:
        raise RuleViolation("cops", "at least one cop is required")
    for p in cops:
        if not state.spec.in_bounds(p):
            raise RuleViolation("cops", f"placement {p} out of bounds")
    return replace(state, cops=cops, phase=PHASE_ROBBER_PLACING)


def place_robber(state: GameState, square: Coord) -> GameState:
    if state.phase != PHASE_ROBBER_PLACING:
        raise RuleViolation("robber", f"cannot place robber in phase {state.phase}")
    sq = (int(square[0]), int(square[1]))
    if not state.spec.in_bounds(sq):
        raise RuleViolation("robber", f"placement {sq} out of bounds")
    if sq in state.cops:
        raise RuleViolation("robber", f"placement {sq} is cop-occupied")
    return replace(state, robber=sq, phase=PHASE_COPS_TO_MOVE)


def apply_cop_move(state: GameState, dests: list[Coord]) -> GameState:
    """Move every cop one square (or keep it still); capture by co-location."""
    if state.phase != PHASE_COPS_TO_MOVE:
        raise RuleViolation("cops", f"cops cannot move in phase {state.phase}")
    if len(dests) != len(state.cops):
        raise RuleViolation(
            "cops", f"expected {len(state.cops)} destinations, got {len(dests)}"
        )
    new = []
    for src, dst in zip(state.cops, dests):
        d = (int(dst[0]), int(dst[1]))
        if not state.spec.in_bounds(d):
            raise RuleViolation("cops", f"destination {d} out of bounds")
        if d != src and not adjacent(src, d):
            raise RuleViolation("cops", f"cop at {src} cannot reach {d} in one step")
        new.append(d)
    cops = tuple(new)
    captured = state.robber in cops
    return replace(
        state,
        cops=cops,
        phase=PHASE_CAPTURED if captured else PHASE_ROBBER_TO_MOVE,
    )


def apply_robber_walk(state: GameState, walk: Walk) -> GameState:
    """Apply a robber walk: at most `speed` edges, never touching a cop square."""
    if state.phase != PHASE_ROBBER_TO_MOVE:
        raise RuleViolation("robber", f"robber cannot move in phase {state.phase}")
    if not walk:
        raise RuleViolation("robber", "walk must contain at least the current square")
    if walk[0] != state.robber:
        raise RuleViolation(
            "robber", f"walk starts at {walk[0]}, robber is at {state.robber}"
        )
    if len(walk) - 1 > state.spec.speed:
        raise RuleViolation(
            "robber",
            f"walk of {len(walk) - 1} edges exceeds speed {state.spec.speed}",
        )
    n = state.spec.n
    cops = frozenset(state.cops)
    px, py = walk[0]
    for x, y in walk:
        if not (1 <= x <= n and 1 <= y <= n):
            raise RuleViolation("robber", f"walk square ({x},{y}) out of bounds")
        if (x, y) in cops:
            raise RuleViolation("robber", f"walk passes through cop at ({x},{y})")
    for x, y in walk[1:]:
        if abs(x - px) + abs(y - py) != 1:
            raise RuleViolation(
                "robber", f"walk jumps from ({px},{py}) to ({x},{y})"
            )
        px, py = x, y
    return replace(
        state,
        robber=walk[-1],
        phase=PHASE_COPS_TO_MOVE,
        round=state.round + 1,
    )


def reachable_set(state: GameState) -> frozenset[Coord]:
    """Squares the robber can end a legal walk on: breadth-first expansion up
    to `speed` layers treating cop squares as forbidden."""
    if state.phase != PHASE_ROBBER_TO_MOVE:
        raise RuleViolation("robber", f"no robber move pending in phase {state.phase}")
    n = state.spec.n
    cops = frozenset(state.cops)
    frontier = {state.robber}
    seen = {state.robber}
    for _ in range(state.spec.speed):
        nxt = set()
        for x, y in frontier:
            for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if q in seen or q in cops:
                    continue
                if 1 <= q[0] <= n and 1 <= q[1] <= n:
                    seen.add(q)
                    nxt.add(q)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def witness_walk(state: GameState, target: Coord) -> Walk:
    """A legal walk from the robber's square to `target`, which must be in
    reachable_set(state).  Parent-tracking BFS, deterministic."""
    if target == state.robber:
        return [state.robber]
    n = state.spec.n
    cops = frozenset(state.cops)
    parent: dict[Coord, Coord] = {state.robber: state.robber}
    frontier = [state.robber]
    for _ in range(state.spec.speed):
        nxt = []
        for p in frontier:
            x, y = p
            for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if q in parent or q in cops:
                    continue
                if 1 <= q[0] <= n and 1 <= q[1] <= n:
                    parent[q] = p
                    nxt.append(q)
        if target in parent:
            break
        frontier = nxt
    if target not in parent:
        raise ValueError(f"{target} is not reachable")
    path = [target]
    while path[-1] != state.robber:
        path.append(parent[path[-1]])
    path.reverse()
    return path


@dataclass
class MatchResult:
    outcome: str
    rounds: int
    trace: list[dict]
    final_state: GameState


def _diagnostics(strategy) -> Optional[dict]:
    hook = getattr(strategy, "diagnostics", None)
    if hook is None:
        return None
    return hook()


def run_match(
    spec: GridSpec,
    cop_count: int,
    cop_strategy,
    robber_strategy,
    max_rounds: int,
    seed: int = 0,
) -> MatchResult:
    """Play one match between two strategy objects.

    Strategies are stateful callbacks with perfect information: cop side
    exposes place(spec, count, rng) and move(state, rng); robber side exposes
    place(state, rng) and walk(state, rng).  Every returned placement or move
    is validated before it is applied; an illegal one aborts the match with a
    RuleViolation attributed to the offending side.  A robber walk of None
    means resignation.  All randomness must come from the passed generator,
    so a fixed seed reproduces the trace bit for bit.
    """
    rng = random.Random(seed)
    trace: list[dict] = []
    state = initial_state(spec)

    placements = list(cop_strategy.place(spec, cop_count, rng) or [])
    if len(placements) != cop_count:
        raise RuleViolation("cops", f"placement must list exactly {cop_count} squares")
    state = place_cops(state, placements)
    trace.append(
        {
            "round": 0,
            "actor": "cops",
            "event": "placement",
            "cops": [list(p) for p in state.cops],
            "robber": None,
        }
    )

    square = robber_strategy.place(state, rng)
    state = place_robber(state, square)
    rec = {
        "round": 0,
        "actor": "robber",
        "event": "placement",
        "cops": [list(p) for p in state.cops],
        "robber": list(state.robber),
    }
    meta = _diagnostics(robber_strategy)
    if meta is not None:
        rec["meta"] = meta
    trace.append(rec)

    from .trace import encode_walk  # local import to avoid a cycle

    rounds_played = 0
    outcome = OUTCOME_SURVIVED
    for rnd in range(1, max_rounds + 1):
        dests = cop_strategy.move(state, rng)
        state = apply_cop_move(state, dests)
        captured = state.phase == PHASE_CAPTURED
        trace.append(
            {
                "round": rnd,
                "actor": "cops",
                "event": "capture" if captured else "move",
                "cops": [list(p) for p in state.cops],
                "robber": list(state.robber),
            }
        )
        if captured:
            rounds_played = rnd
            outcome = OUTCOME_CAPTURE
            break

        walk = robber_strategy.walk(state, rng)
        if walk is None:
            rounds_played = state.round
            outcome = OUTCOME_RESIGNED
            break
        state = apply_robber_walk(state, walk)
        rec = {
            "round": rnd,
            "actor": "robber",
            "event": "move",
            "cops": [list(p) for p in state.cops],
            "robber": list(state.robber),
            "walk": encode_walk(walk),
        }
        meta = _diagnostics(robber_strategy)
        if meta is not None:
            rec["meta"] = meta
        trace.append(rec)
        rounds_played = rnd

    return MatchResult(
        outcome=outcome, rounds=rounds_played, trace=trace, final_state=state
    )
