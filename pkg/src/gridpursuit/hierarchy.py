"""Recursive cell structure over the grid and all of its safety arithmetic.

The grid is tiled by square cells organized in levels: a level-0 cell is a
`base x base` block of squares anchored at (1,1), and a level-k cell is a
(2k+1)^2 x (2k+1)^2 array of level-(k-1) cells.  Each level-k cell of side
base*level_scale(k) carries a per-level step budget step_budget(k), four
3-cell landing zones at its edge midpoints, and counting-based safety
predicates ("fewer than 2^k cops within distance t").  Everything here is a
pure function on unbounded integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .game import Coord

# Two-sided rational bounds on Euler's number, used to settle strict
# inequalities against e^slack with exact arithmetic.
E_LOWER = Fraction(2_718_281_828, 10**9)
E_UPPER = Fraction(27_182_818_285, 10**10)

SIDES = ("bottom", "top", "left", "right")


class Cell(NamedTuple):
    """One level-k cell, addressed by its column/row in the level-k tiling."""

    level: int
    col: int
    row: int


@dataclass(frozen=True)
class HierarchyParams:
    """Constants governing the cell structure.

    slack: per-level budget headroom; base: side of a level-0 cell in
    squares; speed: robber speed the structure is used with.  Canonical mode
    demands the asymptotic constraints; relaxed mode demands exactly the
    per-level inequalities the traversal logic relies on, which makes small
    desk-scale instances runnable.
    """

    slack: int
    base: int
    speed: int
    k_max: int
    mode: str = "relaxed"

    def __post_init__(self):
        if self.mode not in ("canonical", "relaxed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.k_max < 0:
            raise ValueError("k_max must be nonnegative")

    def to_text(self) -> str:
        return (
            f"C = {self.slack}\nN = {self.base}\nR = {self.speed}\n"
            f"k_max = {self.k_max}\nmode = {self.mode}\n"
        )

    @classmethod
    def from_text(cls, text: str) -> "HierarchyParams":
        fields: dict[str, str] = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
        return cls.from_mapping(fields)

    @classmethod
    def from_mapping(cls, fields: dict) -> "HierarchyParams":
        try:
            return cls(
                slack=parse_exact_int(fields["C"]),
                base=parse_exact_int(fields["N"]),
                speed=parse_exact_int(fields["R"]),
                k_max=parse_exact_int(fields["k_max"]),
                mode=str(fields.get("mode", "relaxed")),
            )
        except KeyError as exc:
            raise ValueError(f"missing parameter key {exc.args[0]!r}") from None


CANONICAL_PARAMS = HierarchyParams(
    slack=40, base=10**20, speed=10**25, k_max=3, mode="canonical"
)


def parse_exact_int(text) -> int:
    """Parse '123' or power notation '1e20' as an exact integer (no floats)."""
    if isinstance(text, int):
        return text
    s = str(text).strip()
    m = re.fullmatch(r"(\d+)[eE](\d+)", s)
    if m:
        return int(m.group(1)) * 10 ** int(m.group(2))
    if re.fullmatch(r"-?\d+", s):
        return int(s)
    raise ValueError(f"not an exact integer: {text!r}")


def array_side(k: int) -> int:
    """Side of the sub-cell array inside one level-k cell: (2k+1)^2."""
    return (2 * k + 1) ** 2


def level_scale(k: int) -> int:
    """Side of a level-k cell measured in level-0 cells."""
    if k < 0:
        raise ValueError("level must be nonnegative")
    out = 1
    for j in range(k + 1):
        out *= (2 * j + 1) ** 2
    return out


def step_budget(k: int, slack: int) -> int:
    """Round budget for one level-k traversal: budget(0)=1 and
    budget(k) = ((2k+1)^2 + slack) * budget(k-1)."""
    if k < 0:
        raise ValueError("level must be nonnegative")
    out = 1
    for j in range(1, k + 1):
        out *= (2 * j + 1) ** 2 + slack
    return out


def cell_side(k: int, params: HierarchyParams) -> int:
    """Side of a level-k cell in squares."""
    return params.base * level_scale(k)


def validate_params(params: HierarchyParams) -> list[str]:
    """Return the list of violated constraints (empty means valid).

    Canonical mode: slack >= 40, N > 100*e^slack, R > 50N.  Relaxed mode:
    slack >= 40, R > 50N, 36N <= R, N > 4, and per level 1 <= j <= k_max the
    exact counting inequalities the traversal relies on.
    """
    C, N, R = params.slack, params.base, params.speed
    violations = []
    if C < 40:
        violations.append(f"C >= 40 violated (C = {C})")
    if params.mode == "canonical":
        # Strict N > 100*e^C confirmed through rational bounds on e.
        if not (Fraction(N) > 100 * E_UPPER**C):
            violations.append(f"N > 100*e^C violated (N = {N})")
        if not (R > 50 * N):
            violations.append(f"R > 50N violated (R = {R}, N = {N})")
        return violations
    if not (R > 50 * N):
        violations.append(f"R > 50N violated (R = {R}, N = {N})")
    if not (36 * N <= R):
        violations.append(f"36N <= R violated (R = {R}, N = {N})")
    if not (N > 4):
        violations.append(f"N > 4 violated (N = {N})")
    for j in range(1, params.k_max + 1):
        T = step_budget(j - 1, C)
        NL = N * level_scale(j - 1)
        for label, lhs in (
            (f"2*(8*T({j - 1})+1) < N*L({j - 1})", 2 * (8 * T + 1)),
            (f"2*(2*T({j - 1})+1) < N*L({j - 1})", 2 * (2 * T + 1)),
            (f"100*T({j - 1}) < N*L({j - 1})", 100 * T),
            (f"2*(14*T({j - 1})+1) < N*L({j - 1})", 2 * (14 * T + 1)),
        ):
            if not (lhs < NL):
                violations.append(f"{label} violated ({lhs} >= {NL})")
    return violations


def cell_of(p: Coord, k: int, params: HierarchyParams) -> Cell:
    """The level-k cell containing square p (hierarchy anchored at (1,1))."""
    side = cell_side(k, params)
    return Cell(k, (p[0] - 1) // side, (p[1] - 1) // side)


def cell_rect(cell: Cell, params: HierarchyParams) -> tuple[int, int, int, int]:
    """Inclusive square range (x1, y1, x2, y2) covered by the cell."""
    side = cell_side(cell.level, params)
    x1 = cell.col * side + 1
    y1 = cell.row * side + 1
    return (x1, y1, x1 + side - 1, y1 + side - 1)


def subcell_origin(cell: Cell) -> tuple[int, int]:
    """Index of the cell's bottom-left child in the level-(k-1) tiling."""
    h = array_side(cell.level)
    return cell.col * h, cell.row * h


def landing_zone(cell: Cell, side: str) -> list[Cell]:
    """The three level-(k-1) cells forming the landing zone on one side.

    Each zone is one sub-cell wide and three deep, centered on the edge; the
    first entry touches the edge and the list walks inward.
    """
    if cell.level < 1:
        raise ValueError("level-0 cells have no landing zones")
    h = array_side(cell.level)
    m = (h - 1) // 2
    ox, oy = subcell_origin(cell)
    k1 = cell.level - 1
    if side == "bottom":
        rel = [(m, 0), (m, 1), (m, 2)]
    elif side == "top":
        rel = [(m, h - 1), (m, h - 2), (m, h - 3)]
    elif side == "left":
        rel = [(0, m), (1, m), (2, m)]
    elif side == "right":
        rel = [(h - 1, m), (h - 2, m), (h - 3, m)]
    else:
        raise ValueError(f"unknown side {side!r}")
    return [Cell(k1, ox + i, oy + j) for i, j in rel]


def zone_side_of(p: Coord, k: int, params: HierarchyParams) -> Optional[str]:
    """Which landing zone of p's level-k cell contains p, if any."""
    if k < 1:
        raise ValueError("zones exist for levels >= 1")
    sub = cell_of(p, k - 1, params)
    h = array_side(k)
    m = (h - 1) // 2
    ri, rj = sub.col % h, sub.row % h
    if ri == m:
        if rj <= 2:
            return "bottom"
        if rj >= h - 3:
            return "top"
    if rj == m:
        if ri <= 2:
            return "left"
        if ri >= h - 3:
            return "right"
    return None


def is_landing_square(p: Coord, k: int, params: HierarchyParams) -> bool:
    """True iff p sits in a landing zone of each of its cells at levels 1..k."""
    return all(zone_side_of(p, j, params) is not None for j in range(1, k + 1))


def is_separated(a: Cell, b: Cell) -> bool:
    """Same-level cells sharing neither an edge nor a corner."""
    if a.level != b.level:
        raise ValueError(f"level mismatch: {a.level} vs {b.level}")
    return max(abs(a.col - b.col), abs(a.row - b.row)) >= 2


def rect_distance(p: Coord, rect: tuple[int, int, int, int]) -> int:
    """Grid (L1) distance from a square to an axis-aligned rectangle."""
    x1, y1, x2, y2 = rect
    dx = x1 - p[0] if p[0] < x1 else (p[0] - x2 if p[0] > x2 else 0)
    dy = y1 - p[1] if p[1] < y1 else (p[1] - y2 if p[1] > y2 else 0)
    return dx + dy


def cell_distance(p: Coord, cell: Cell, params: HierarchyParams) -> int:
    """Grid distance from a square to the nearest square of a cell."""
    return rect_distance(p, cell_rect(cell, params))


@dataclass(frozen=True)
class SafetyContext:
    """A cop configuration against which safety predicates are evaluated."""

    cops: tuple[Coord, ...]
    params: HierarchyParams

    def cops_within(self, rect: tuple[int, int, int, int], t: int) -> int:
        return sum(1 for c in self.cops if rect_distance(c, rect) <= t)


def is_safe_for(cell: Cell, t: int, ctx: SafetyContext) -> bool:
    """Fewer than 2^level cops lie within distance t of the cell."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    threshold = 2**cell.level
    rect = cell_rect(cell, ctx.params)
    count = 0
    for c in ctx.cops:
        if rect_distance(c, rect) <= t:
            count += 1
            if count >= threshold:
                return False
    return True


def is_k_safe(p: Coord, k: int, ctx: SafetyContext) -> bool:
    """Every containing cell at levels 0..k is safe for its own step budget."""
    return all(
        is_safe_for(cell_of(p, j, ctx.params), step_budget(j, ctx.params.slack), ctx)
        for j in range(k + 1)
    )


def is_completely_k_safe(p: Coord, k: int, ctx: SafetyContext) -> bool:
    """Still k-safe no matter how the cops answer with one move.

    One cop turn shrinks each cop's distance to a fixed cell by at most 1,
    so widening every budget check by one step is exactly equivalent.
    """
    return all(
        is_safe_for(
            cell_of(p, j, ctx.params), step_budget(j, ctx.params.slack) + 1, ctx
        )
        for j in range(k + 1)
    )


def choose_safe_of_pair(a: Cell, b: Cell, t: int, ctx: SafetyContext) -> str:
    """For separated sibling cells inside a common safe parent, report which
    of the two is safe for t steps: 'first', 'second', or 'both'.

    The counting argument: the two t-neighborhoods are disjoint whenever
    2t is less than the sibling cell side, so fewer than 2^(level+1) cops
    near the parent cannot make both cells unsafe.  Violated preconditions
    are errors because callers rely on the guarantee.
    """
    if a.level != b.level:
        raise ValueError("cells must be at the same level")
    if not is_separated(a, b):
        raise ValueError(f"cells {a} and {b} are not separated")
    parent_level = a.level + 1
    pa = Cell(parent_level, a.col // array_side(parent_level), a.row // array_side(parent_level))
    pb = Cell(parent_level, b.col // array_side(parent_level), b.row // array_side(parent_level))
    if pa != pb:
        raise ValueError(f"cells {a} and {b} are not siblings in one parent cell")
    if not (2 * t < cell_side(a.level, ctx.params)):
        raise ValueError(
            f"2t < cell side violated (t = {t}, side = {cell_side(a.level, ctx.params)})"
        )
    if not is_safe_for(pa, t, ctx):
        raise ValueError(f"parent cell {pa} is not safe for {t} steps")
    a_safe = is_safe_for(a, t, ctx)
    b_safe = is_safe_for(b, t, ctx)
    if a_safe and b_safe:
        return "both"
    if a_safe:
        return "first"
    if b_safe:
        return "second"
    raise AssertionError(
        f"separated siblings {a} and {b} both unsafe for {t} steps under a safe parent"
    )
