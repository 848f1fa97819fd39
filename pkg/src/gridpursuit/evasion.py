"""The recursive robber strategy: cell-to-cell traversal with dynamic detours.

A level-k traversal carries the robber from a landing square of one level-k
cell into the entry landing zone of an adjacent one within the level-k step
budget, never getting caught, provided the target cell has a wide enough
safety margin and fewer than 2^k cops oppose him.  Level 1 is a single-turn
dash along one of `base` interchangeable corridor paths; higher levels run a
column of child traversals with at most one ring detour around a cell that
turned unsafe, then cross the boundary along one of five candidate routes.
The full strategy loops clockwise around a fixed 2x2 array of top-level
cells forever.

The traversal is written once for the "exit upward" orientation and
conjugated by rotations for the other three exits.  Every margin the
strategy relies on is checked at runtime and raises instead of being
assumed, so a match doubles as a mechanical audit of the case analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .game import Coord, GameState, GridSpec, Walk
from .hierarchy import (
    Cell,
    HierarchyParams,
    SafetyContext,
    array_side,
    cell_of,
    cell_rect,
    cell_side,
    choose_safe_of_pair,
    is_completely_k_safe,
    is_k_safe,
    is_landing_square,
    is_safe_for,
    landing_zone,
    step_budget,
    subcell_origin,
    validate_params,
    zone_side_of,
)

SIDES = ("bottom", "top", "left", "right")


class HypothesisError(Exception):
    """The strategy's working hypotheses do not hold (too many cops, grid
    too small, invalid parameters, no safe starting square)."""


class SafetyInvariantError(Exception):
    """A margin the traversal analysis guarantees failed at runtime.

    This signals a parameter or implementation defect, never a condition to
    be swallowed."""


# ---------------------------------------------------------------------------
# Orientation frames: map a virtual plane, in which every traversal exits
# upward, onto the real grid.  Matrices are the four rotations; translations
# keep the cell lattice aligned at every level at or below the frame's cell.
# ---------------------------------------------------------------------------

_ORIENTATIONS = {
    (0, 1): (1, 0, 0, 1),
    (1, 0): (0, 1, -1, 0),
    (0, -1): (-1, 0, 0, -1),
    (-1, 0): (0, -1, 1, 0),
}


@dataclass(frozen=True)
class Frame:
    a: int
    b: int
    c: int
    d: int
    tx: int
    ty: int

    def to_abs(self, p: Coord) -> Coord:
        x, y = p
        return (self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def to_virtual(self, p: Coord) -> Coord:
        x = p[0] - self.tx
        y = p[1] - self.ty
        det = self.a * self.d - self.b * self.c
        return (det * (self.d * x - self.b * y), det * (self.a * y - self.c * x))


def build_frame(from_cell: Cell, to_cell: Cell, params: HierarchyParams) -> Frame:
    """Frame whose virtual cell (0,0) is `from_cell` and whose virtual cell
    (0,1), directly above, is the adjacent `to_cell`."""
    if from_cell.level != to_cell.level:
        raise ValueError("cells must share a level")
    d = (to_cell.col - from_cell.col, to_cell.row - from_cell.row)
    if d not in _ORIENTATIONS:
        raise ValueError(f"cells {from_cell} and {to_cell} are not adjacent")
    a, b, c, dd = _ORIENTATIONS[d]
    side = cell_side(from_cell.level, params)
    ix = min(a + b, a * side + b * side)
    iy = min(c + dd, c * side + dd * side)
    rect = cell_rect(from_cell, params)
    frame = Frame(a, b, c, dd, rect[0] - ix, rect[1] - iy)
    # Cheap self-check: the virtual target cell must land exactly on to_cell.
    want = cell_rect(to_cell, params)
    p1 = frame.to_abs((1, side + 1))
    p2 = frame.to_abs((side, 2 * side))
    got = (
        min(p1[0], p2[0]),
        min(p1[1], p2[1]),
        max(p1[0], p2[0]),
        max(p1[1], p2[1]),
    )
    if got != want:
        raise AssertionError(f"frame misaligned: {got} != {want}")
    return frame


def map_cell(frame: Frame, cell: Cell, params: HierarchyParams) -> Cell:
    """The absolute cell a virtual cell corresponds to under `frame`."""
    r = cell_rect(cell, params)
    p1 = frame.to_abs((r[0], r[1]))
    p2 = frame.to_abs((r[2], r[3]))
    x1 = min(p1[0], p2[0])
    y1 = min(p1[1], p2[1])
    side = cell_side(cell.level, params)
    return Cell(cell.level, (x1 - 1) // side, (y1 - 1) // side)


# ---------------------------------------------------------------------------
# Dash corridor family: `base` interchangeable paths between two level-0
# cells, one per column of each cell, kept vertex-disjoint by giving every
# path its own crossover row.  With at most two cops inside the two host
# cells, at most two paths can be blocked.
# ---------------------------------------------------------------------------


def dash_corners(
    index: int, p_rect: tuple[int, int, int, int], q_rect: tuple[int, int, int, int]
) -> list[Coord]:
    """Corner squares of corridor path `index` from the top row of cell
    rectangle P to the bottom row of cell rectangle Q (Q strictly above P)."""
    px1, _, px2, ptop = p_rect
    qx1, qbot, _, _ = q_rect
    width = px2 - px1 + 1
    if not 0 <= index < width:
        raise ValueError(f"path index {index} out of range 0..{width - 1}")
    if qbot <= ptop:
        raise ValueError("target cell must lie strictly above the source cell")
    src = (px1 + index, ptop)
    dst = (qx1 + index, qbot)
    shift = qx1 - px1
    if shift == 0:
        return [src, dst]
    if qbot - ptop - 1 < width:
        raise ValueError("vertical gap too small for disjoint crossovers")
    row = ptop + width - index if shift > 0 else ptop + 1 + index
    return [src, (src[0], row), (dst[0], row), dst]


def materialize(corners: list[Coord]) -> Walk:
    """Expand an axis-aligned corner list into the full square sequence."""
    walk = [corners[0]]
    for cx, cy in corners[1:]:
        x, y = walk[-1]
        if x != cx and y != cy:
            raise ValueError(f"corners ({x},{y}) -> ({cx},{cy}) not axis-aligned")
        while x != cx:
            x += 1 if cx > x else -1
            walk.append((x, y))
        while y != cy:
            y += 1 if cy > y else -1
            walk.append((x, y))
    return walk


def dash_path(
    index: int, p_rect: tuple[int, int, int, int], q_rect: tuple[int, int, int, int]
) -> Walk:
    return materialize(dash_corners(index, p_rect, q_rect))


def blocked_dash_indices(
    cops: tuple[Coord, ...],
    p_rect: tuple[int, int, int, int],
    q_rect: tuple[int, int, int, int],
) -> set[int]:
    """Indices of corridor paths that touch a cop square (closed-form, no
    path materialization)."""
    px1, _, px2, ptop = p_rect
    qx1, qbot, _, _ = q_rect
    width = px2 - px1 + 1
    shift = qx1 - px1
    blocked: set[int] = set()

    def row_of(i: int) -> int:
        return ptop + width - i if shift > 0 else ptop + 1 + i

    for cx, cy in cops:
        if shift == 0:
            i = cx - px1
            if 0 <= i < width and ptop <= cy <= qbot:
                blocked.add(i)
            continue
        i = cx - px1
        if 0 <= i < width and ptop <= cy <= row_of(i):
            blocked.add(i)
        i = cx - qx1
        if 0 <= i < width and row_of(i) <= cy <= qbot:
            blocked.add(i)
        i = cy - ptop - 1 if shift < 0 else ptop + width - cy
        if 0 <= i < width:
            lo = min(px1 + i, qx1 + i)
            hi = max(px1 + i, qx1 + i)
            if lo <= cx <= hi and cy == row_of(i):
                blocked.add(i)
    return blocked


def _cop_on_corners(cops: tuple[Coord, ...], corners: list[Coord]) -> Optional[Coord]:
    for cop in cops:
        cx, cy = cop
        for (x1, y1), (x2, y2) in zip(corners, corners[1:]):
            if x1 == x2:
                if cx == x1 and min(y1, y2) <= cy <= max(y1, y2):
                    return cop
            elif cy == y1 and min(x1, x2) <= cx <= max(x1, x2):
                return cop
        if corners and cop == corners[0]:
            return cop
    return None


# ---------------------------------------------------------------------------
# Detour rings and boundary-crossing routes, in child-cell index coordinates
# of the current traversal (source cell spans indices 0..h-1 on both axes,
# the target cell sits directly above).
# ---------------------------------------------------------------------------


def ring_options(
    p: tuple[int, int], d: tuple[int, int]
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """The two seven-cell detours around the blocked cell p+d, each ending
    two cells past it; the first leans left of the travel direction."""
    px, py = p
    dx, dy = d

    def path(sx: int, sy: int) -> list[tuple[int, int]]:
        return [
            (px + sx, py + sy),
            (px + 2 * sx, py + 2 * sy),
            (px + 2 * sx + dx, py + 2 * sy + dy),
            (px + 2 * sx + 2 * dx, py + 2 * sy + 2 * dy),
            (px + 2 * sx + 3 * dx, py + 2 * sy + 3 * dy),
            (px + sx + 3 * dx, py + sy + 3 * dy),
            (px + 3 * dx, py + 3 * dy),
        ]

    return path(-dy, dx), path(dy, -dx)


def boundary_routes(m: int, h: int, f_row: int) -> list[list[tuple[int, int]]]:
    """Five candidate child-cell routes from the top-zone cell (m, f_row) of
    the current cell into the entry zone of the cell above (rows h..2h-1).

    The routes end on the zone cells (m, h) and (m, h+2) and fan out over
    columns m, m+-2 and m+-4, far enough apart that the two tight clusters
    of unsafe cells a safe parent can tolerate never block all five.
    """
    direct = [(m, y) for y in range(f_row + 1, h + 1)]

    def ring(offset: int, top: int) -> list[tuple[int, int]]:
        col = m + offset
        step = 1 if offset > 0 else -1
        out = [(m + i * step, f_row) for i in range(1, abs(offset) + 1)]
        out += [(col, y) for y in range(f_row + 1, top + 1)]
        out += [(m + i * step, top) for i in range(abs(offset) - 1, -1, -1)]
        return out

    return [direct, ring(-2, h), ring(2, h), ring(-4, h + 2), ring(4, h + 2)]


# ---------------------------------------------------------------------------
# Placement
# ---------------------------------------------------------------------------


def landing_squares(cell: Cell, params: HierarchyParams) -> Iterator[Coord]:
    """All squares of `cell` that are landing squares at every level down to
    the squares, in a fixed deterministic scan order."""
    if cell.level == 0:
        x1, y1, x2, y2 = cell_rect(cell, params)
        for y in range(y1, y2 + 1):
            for x in range(x1, x2 + 1):
                yield (x, y)
        return
    seen = set()
    subs = []
    for side in SIDES:
        for sub in landing_zone(cell, side):
            if sub not in seen:
                seen.add(sub)
                subs.append(sub)
    for sub in sorted(subs, key=lambda s: (s.row, s.col)):
        yield from landing_squares(sub, params)


def placement_square(
    params: HierarchyParams, level: int, n: int, cops: tuple[Coord, ...]
) -> Coord:
    """First safe landing square scanning the fixed 2x2 array of top-level
    cells at the grid origin: the bottom-left cell first, then the other
    three clockwise."""
    if len(cops) >= 2**level:
        raise HypothesisError(
            f"evasion at level {level} needs fewer than {2 ** level} cops, "
            f"got {len(cops)}"
        )
    side = cell_side(level, params)
    if n < 2 * side:
        raise HypothesisError(
            f"grid side {n} is below twice the level-{level} cell side {side}"
        )
    ctx = SafetyContext(cops, params)
    for col, row in ((0, 0), (0, 1), (1, 1), (1, 0)):
        for sq in landing_squares(Cell(level, col, row), params):
            if is_k_safe(sq, level, ctx):
                return sq
    raise HypothesisError("no safe landing square in the starting array")


# ---------------------------------------------------------------------------
# The strategy
# ---------------------------------------------------------------------------

_CYCLE = ((0, 0), (0, 1), (1, 1), (1, 0))


class HierarchicalEvader:
    """Robber strategy: place on a safe landing square, then loop clockwise
    around the 2x2 array of top-level cells forever, one traversal per leg.
    """

    name = "hierarchical"

    def __init__(self, params: HierarchyParams, level: Optional[int] = None):
        violations = validate_params(params)
        if violations:
            raise HypothesisError(
                "invalid parameters:\n  " + "\n  ".join(violations)
            )
        self.params = params
        self.level = params.k_max if level is None else level
        if not 1 <= self.level <= params.k_max:
            raise ValueError(f"level must be in 1..{params.k_max}")
        self._gen = None
        self._meta: Optional[dict] = None
        self._stack: list[list] = []
        self._trip = 0
        self._detours = 0

    # -- strategy interface -------------------------------------------------

    def place(self, state: GameState, rng) -> Coord:
        return placement_square(
            self.params, self.level, state.spec.n, state.cops
        )

    def walk(self, state: GameState, rng) -> Walk:
        if self._gen is None:
            self._gen = self._loop()
            next(self._gen)
        return self._gen.send(state)

    def diagnostics(self) -> Optional[dict]:
        return self._meta

    # -- internals -----------------------------------------------------------

    def _loop(self):
        state = yield
        params = self.params
        k = self.level
        budget = step_budget(k, params.slack)
        while True:
            ctx = SafetyContext(state.cops, params)
            here = cell_of(state.robber, k, params)
            key = (here.col, here.row)
            if key not in _CYCLE:
                raise SafetyInvariantError(
                    f"robber left the traversal array: cell {here}"
                )
            nxt = _CYCLE[(_CYCLE.index(key) + 1) % 4]
            target = Cell(k, nxt[0], nxt[1])
            if len(state.cops) >= 2**k:
                raise HypothesisError(
                    f"opposed by {len(state.cops)} cops, needs fewer than {2 ** k}"
                )
            if not is_k_safe(state.robber, k, ctx):
                raise SafetyInvariantError("leg start square lost its safety")
            if not is_landing_square(state.robber, k, params):
                raise SafetyInvariantError("leg start square is not a landing square")
            if not is_safe_for(target, 2 * budget + 1, ctx):
                raise HypothesisError(
                    f"leg target {target} unsafe for {2 * budget + 1} steps"
                )
            frame = build_frame(here, target, params)
            self._trip += 1
            state = yield from self._traverse(k, state, frame, k)

    def _traverse(self, k: int, state: GameState, frame: Frame, assert_level: int):
        """Carry the robber from its current cell into the entry zone of the
        frame's target cell; yields one walk per robber turn and returns the
        state observed after the final walk."""
        if k == 1:
            return (yield from self._dash(state, frame, assert_level))

        params = self.params
        T = step_budget(k - 1, params.slack)
        h = array_side(k)
        m = (h - 1) // 2
        start_round = state.round
        entry = self._stack_push(k, "first")

        def vctx() -> SafetyContext:
            return SafetyContext(
                tuple(frame.to_virtual(c) for c in state.cops), params
            )

        def vcell(idx: tuple[int, int]) -> Cell:
            return Cell(k - 1, idx[0], idx[1])

        v = frame.to_virtual(state.robber)
        if cell_of(v, k, params) != Cell(k, 0, 0):
            raise SafetyInvariantError("traversal started outside its source cell")
        side = zone_side_of(v, k, params)
        if side is None:
            raise SafetyInvariantError("traversal start square is not a landing square")
        start = cell_of(v, k - 1, params)
        cur = (start.col, start.row)

        if side == "top":
            waypoints: list[tuple[int, int]] = []
        elif side == "bottom":
            waypoints = [(m, h - 3)]
        else:
            waypoints = [(m, m), (m, h - 3)]
        detoured = False

        while waypoints:
            tgt = waypoints[0]
            if cur == tgt:
                waypoints.pop(0)
                continue
            dx = (tgt[0] > cur[0]) - (tgt[0] < cur[0])
            dy = (tgt[1] > cur[1]) - (tgt[1] < cur[1])
            if dx != 0 and dy != 0:
                raise SafetyInvariantError("plan segment is not axis-aligned")
            step = (dx, dy)
            nxt = (cur[0] + dx, cur[1] + dy)
            if is_safe_for(vcell(nxt), 2 * T + 1, vctx()):
                state = yield from self._child(k, state, frame, cur, nxt, k - 1)
                cur = nxt
                continue
            if detoured:
                raise SafetyInvariantError(
                    "a second detour became necessary within one traversal"
                )
            detoured = True
            self._detours += 1
            ring = self._choose_ring(cur, step, T, k, h, vctx())
            for idx in ring:
                if not is_safe_for(vcell(idx), 2 * T + 1, vctx()):
                    raise SafetyInvariantError(
                        f"detour cell {idx} lost its margin mid-ring"
                    )
                state = yield from self._child(k, state, frame, cur, idx, k - 1)
                cur = idx
            if step[1] != 0:
                if cur[1] >= h - 3:
                    waypoints = []  # the detour delivered us into the top zone
            elif (tgt[0] - cur[0]) * step[0] < 0:
                # Overshot the turn column: climb this column, then slide over.
                waypoints = [(cur[0], h - 3), (m, h - 3)]

        if not (cur[1] >= h - 3 and cur[0] == m):
            raise SafetyInvariantError(f"first leg ended off the top zone at {cur}")
        first_rounds = state.round - start_round
        first_cap = (h + 3) * T if side in ("bottom", "top") else (h + 5) * T
        if first_rounds > first_cap:
            raise SafetyInvariantError(
                f"first leg used {first_rounds} rounds, cap {first_cap}"
            )

        entry[1] = "second"
        second_start = state.round
        threshold = 14 * T + 1
        chosen = None
        for route in boundary_routes(m, h, cur[1]):
            if all(is_safe_for(vcell(idx), threshold, vctx()) for idx in route):
                chosen = route
                break
        if chosen is None:
            raise SafetyInvariantError(
                f"no boundary route is safe for {threshold} steps"
            )
        for pos, idx in enumerate(chosen):
            if not is_safe_for(vcell(idx), 2 * T + 1, vctx()):
                raise SafetyInvariantError(
                    f"boundary route cell {idx} lost its margin"
                )
            final = pos == len(chosen) - 1
            state = yield from self._child(
                k, state, frame, cur, idx, assert_level if final else k - 1
            )
            cur = idx
        second_rounds = state.round - second_start
        if second_rounds > 13 * T:
            raise SafetyInvariantError(
                f"second leg used {second_rounds} rounds, cap {13 * T}"
            )
        total = state.round - start_round
        if total > step_budget(k, params.slack):
            raise SafetyInvariantError(
                f"traversal used {total} rounds, budget {step_budget(k, params.slack)}"
            )
        self._stack_pop()
        return state

    def _child(
        self,
        k: int,
        state: GameState,
        frame: Frame,
        cur: tuple[int, int],
        nxt: tuple[int, int],
        assert_level: int,
    ):
        params = self.params
        a = map_cell(frame, Cell(k - 1, cur[0], cur[1]), params)
        b = map_cell(frame, Cell(k - 1, nxt[0], nxt[1]), params)
        child_frame = build_frame(a, b, params)
        state = yield from self._traverse(k - 1, state, child_frame, assert_level)
        landed = map_cell(child_frame, Cell(k - 1, 0, 1), params)
        if cell_of(state.robber, k - 1, params) != landed:
            raise SafetyInvariantError("child traversal delivered the wrong cell")
        return state

    def _choose_ring(
        self,
        cur: tuple[int, int],
        step: tuple[int, int],
        T: int,
        k: int,
        h: int,
        ctx: SafetyContext,
    ) -> list[tuple[int, int]]:
        margin = 8 * T + 1
        first, second = ring_options(cur, step)
        for ring in (first, second):
            for idx in ring:
                if not (0 <= idx[0] < h and 0 <= idx[1] < h):
                    raise SafetyInvariantError(f"detour cell {idx} leaves the cell")
            for idx in ring[1:]:
                if not is_safe_for(Cell(k - 1, idx[0], idx[1]), margin, ctx):
                    raise SafetyInvariantError(
                        f"outer detour cell {idx} unsafe for {margin} steps"
                    )
        if is_safe_for(Cell(k - 1, first[0][0], first[0][1]), margin, ctx):
            return first
        if is_safe_for(Cell(k - 1, second[0][0], second[0][1]), margin, ctx):
            return second
        raise SafetyInvariantError(
            f"both detour entry cells unsafe for {margin} steps"
        )

    def _dash(self, state: GameState, frame: Frame, assert_level: int):
        """One-turn corridor dash from the current level-1 cell into the
        entry zone of the level-1 cell above (in frame coordinates)."""
        params = self.params
        N = params.base
        T1 = step_budget(1, params.slack)
        v_rob = frame.to_virtual(state.robber)
        v_cops = tuple(frame.to_virtual(c) for c in state.cops)
        ctx = SafetyContext(v_cops, params)

        if cell_of(v_rob, 1, params) != Cell(1, 0, 0):
            raise SafetyInvariantError("dash started outside its source cell")
        if zone_side_of(v_rob, 1, params) is None:
            raise SafetyInvariantError("dash start square is not a landing square")
        if not is_k_safe(v_rob, 1, ctx):
            raise SafetyInvariantError("dash start square is not level-1 safe")
        target_cell = Cell(1, 0, 1)
        if not is_safe_for(target_cell, 2 * T1 + 1, ctx):
            raise SafetyInvariantError(
                f"dash target cell unsafe for {2 * T1 + 1} steps"
            )

        h1 = array_side(1)
        m1 = (h1 - 1) // 2
        ox, oy = subcell_origin(target_cell)
        z0 = Cell(0, ox + m1, oy)
        z2 = Cell(0, ox + m1, oy + 2)
        pick = choose_safe_of_pair(z0, z2, 2, ctx)
        q = z0 if pick in ("first", "both") else z2

        p_rect = cell_rect(cell_of(v_rob, 0, params), params)
        q_rect = cell_rect(q, params)
        blocked = blocked_dash_indices(v_cops, p_rect, q_rect)
        index = next((i for i in range(N) if i not in blocked), None)
        if index is None:
            raise SafetyInvariantError("every corridor path is blocked")

        body = dash_corners(index, p_rect, q_rect)
        src = body[0]
        center = ((q_rect[0] + q_rect[2]) // 2, (q_rect[1] + q_rect[3]) // 2)
        corners = [v_rob, (src[0], v_rob[1])] + body + [
            (center[0], body[-1][1]),
            center,
        ]
        offender = _cop_on_corners(v_cops, corners)
        if offender is not None:
            raise SafetyInvariantError(f"dash path crosses a cop at {offender}")
        walk_v = materialize(corners)
        if len(walk_v) - 1 > 36 * N:
            raise SafetyInvariantError(
                f"dash of {len(walk_v) - 1} edges exceeds the 36N bound"
            )
        if len(walk_v) - 1 > params.speed:
            raise SafetyInvariantError("dash exceeds the robber speed")

        a, b, c, d, tx, ty = (
            frame.a,
            frame.b,
            frame.c,
            frame.d,
            frame.tx,
            frame.ty,
        )
        walk = [(a * x + b * y + tx, c * x + d * y + ty) for x, y in walk_v]
        arrival = walk[-1]
        abs_ctx = SafetyContext(state.cops, params)
        if not is_landing_square(arrival, assert_level, params):
            raise SafetyInvariantError(
                f"arrival {arrival} is not a level-{assert_level} landing square"
            )
        if not is_completely_k_safe(arrival, assert_level, abs_ctx):
            raise SafetyInvariantError(
                f"arrival {arrival} is not completely level-{assert_level} safe"
            )

        self._meta = {
            "trip": self._trip,
            "stack": [list(e) for e in self._stack] + [[1, "dash"]],
            "detours": self._detours,
            "dash": index,
            "dash_target": list(map_cell(frame, q, params))[1:],
        }
        new_state = yield walk
        return new_state

    def _stack_push(self, level: int, leg: str) -> list:
        entry = [level, leg]
        self._stack.append(entry)
        return entry

    def _stack_pop(self) -> None:
        self._stack.pop()
