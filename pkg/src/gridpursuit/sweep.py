"""Line-sweep cop strategy: a row of 2L+1 cops that walks the grid downward.

The formation slides left or right toward the robber's column and steps down
one row whenever the robber is horizontally within reach or the formation is
flush against the wall it is being baited toward.  Once it has descended
past the robber, the robber can never get back above it, and the sweep
corners him against the bottom edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from .game import Coord, GameState, GridSpec


class FormationError(Exception):
    """The formation cannot be built or an internal invariant broke."""


def sweep_half_width(n: int, speed: int) -> int:
    """Smallest proven half-width: ceil(n*(speed-1)/(2*speed-1)) + 2."""
    num = n * (speed - 1)
    den = 2 * speed - 1
    return -(-num // den) + 2


def sweep_cop_count(n: int, speed: int) -> int:
    """Cops needed for the sweep at the proven half-width: 2L+1."""
    count = 2 * sweep_half_width(n, speed) + 1
    if count > n:
        raise FormationError(
            f"formation of {count} cops does not fit a grid of side {n}"
        )
    return count


def sweep_placement(n: int, half_width: int) -> list[Coord]:
    """Initial line on the top row, flushed to the left wall."""
    count = 2 * half_width + 1
    if count > n:
        raise FormationError(
            f"formation of {count} cops does not fit a grid of side {n}"
        )
    return [(x, n) for x in range(1, count + 1)]


class LineSweep:
    """Cop strategy 'line-sweep'.

    half_width overrides the proven bound for experiments below it.  The
    strategy asserts its own progress invariants on every decision: the
    formation row never rises, after the first descent the robber stays
    strictly below the formation, and a sign flip of the center-to-robber
    column offset forces a descent.
    """

    name = "line-sweep"

    def __init__(self, half_width: int | None = None):
        self.half_width = half_width
        self.center_col = 0
        self.row = 0
        self._descended = False
        self._prev_sign = 0
        self._n = 0

    def place(self, spec: GridSpec, count: int, rng) -> list[Coord]:
        L = self.half_width
        if L is None:
            L = sweep_half_width(spec.n, spec.speed)
            self.half_width = L
        if count != 2 * L + 1:
            raise FormationError(
                f"line sweep with half-width {L} needs {2 * L + 1} cops, got {count}"
            )
        placement = sweep_placement(spec.n, L)
        self._n = spec.n
        self.center_col = L + 1
        self.row = spec.n
        self._descended = False
        self._prev_sign = 0
        return placement

    def state_key(self) -> tuple:
        """Hashable snapshot of the decision-relevant internal state."""
        return (self.center_col, self.row, self._descended, self._prev_sign)

    def move(self, state: GameState, rng) -> list[Coord]:
        n = state.spec.n
        speed = state.spec.speed
        L = self.half_width
        xc, yc = self.center_col, self.row
        expected = tuple((x, yc) for x in range(xc - L, xc + L + 1))
        if state.cops != expected:
            raise FormationError("formation drifted from its expected shape")
        xr, yr = state.robber

        if self._descended and yr >= yc:
            raise FormationError(
                f"robber at row {yr} is not below the formation row {yc}"
            )

        # The left stop keeps column 1 covered; the right stop mirrors it so
        # column n stays covered when the formation is baited rightward.
        left_stop = L + 1
        right_stop = n - L
        down = (
            abs(xc - xr) <= speed
            or (xc <= left_stop and xr < xc - speed)
            or (xc >= right_stop and xr > xc + speed)
        )

        sign = (xc > xr) - (xc < xr)
        if self._prev_sign and sign and sign != self._prev_sign and not down:
            raise FormationError(
                "center-to-robber offset flipped sign without a descent"
            )
        self._prev_sign = sign

        if down:
            if yc == 1:
                raise FormationError("formation asked to descend below row 1")
            self.row = yc - 1
            self._descended = True
        elif xc > xr:
            self.center_col = xc - 1
        else:
            self.center_col = xc + 1
        xc, yc = self.center_col, self.row
        return [(x, yc) for x in range(xc - L, xc + L + 1)]
