"""Line-sweep tests: sizing, placement, the step rules, match invariants."""

import pytest

from gridpursuit.baselines import GreedyEvader, RandomEvader, StationaryRobber
from gridpursuit.game import GameState, GridSpec, run_match
from gridpursuit.sweep import (
    FormationError,
    LineSweep,
    sweep_cop_count,
    sweep_half_width,
    sweep_placement,
)


class TestSizing:
    def test_half_width_and_count_n50_r2(self):
        assert sweep_half_width(50, 2) == 19
        assert sweep_cop_count(50, 2) == 39

    def test_count_n100_r2(self):
        assert sweep_cop_count(100, 2) == 73

    def test_unit_speed_needs_five(self):
        assert sweep_half_width(7, 1) == 2
        assert sweep_cop_count(7, 1) == 5

    def test_too_small_grid_rejected(self):
        with pytest.raises(FormationError):
            sweep_cop_count(6, 25)


class TestPlacement:
    def test_left_flushed_line_on_top_row(self):
        cops = sweep_placement(9, 3)
        assert cops == [(x, 9) for x in range(1, 8)]

    def test_exact_fit(self):
        cops = sweep_placement(7, 3)
        assert cops == [(x, 7) for x in range(1, 8)]

    def test_formation_wider_than_grid_rejected(self):
        with pytest.raises(FormationError):
            sweep_placement(6, 3)


def _sweep_in_state(n, speed, half_width, center, row, robber, descended=False):
    s = LineSweep(half_width=half_width)
    s._n = n
    s.center_col = center
    s.row = row
    s._descended = descended
    cops = tuple((x, row) for x in range(center - half_width, center + half_width + 1))
    state = GameState(
        spec=GridSpec(n, speed), cops=cops, robber=robber, phase="cops-to-move"
    )
    return s, state


class TestStepRules:
    def test_step_down_when_robber_in_horizontal_reach(self):
        s, state = _sweep_in_state(50, 3, 19, 20, 30, (22, 5))
        dests = s.move(state, None)
        assert all(y == 29 for _, y in dests)

    def test_step_down_at_left_wall_when_baited_left(self):
        # center at L+1, robber beyond speed reach to the left
        s, state = _sweep_in_state(50, 2, 19, 20, 30, (1, 5))
        dests = s.move(state, None)
        assert all(y == 29 for _, y in dests)

    def test_step_down_at_right_wall_when_baited_right(self):
        s, state = _sweep_in_state(50, 2, 19, 31, 30, (50, 5))
        dests = s.move(state, None)
        assert all(y == 29 for _, y in dests)
        assert max(x for x, _ in state.cops) == 50  # far wall column is covered

    def test_default_lateral_step_right(self):
        s, state = _sweep_in_state(50, 2, 19, 20, 30, (40, 5))
        dests = s.move(state, None)
        assert dests == [(x, 30) for x in range(2, 41)]

    def test_default_lateral_step_left(self):
        s, state = _sweep_in_state(50, 2, 19, 25, 30, (2, 28))
        dests = s.move(state, None)
        assert dests == [(x, 30) for x in range(5, 44)]

    def test_row_never_rises_and_descents_are_single_steps(self):
        res = run_match(GridSpec(30, 2), sweep_cop_count(30, 2), LineSweep(), GreedyEvader(), 9000, seed=4)
        assert res.outcome == "capture"
        rows = [rec["cops"][0][1] for rec in res.trace if rec["actor"] == "cops" and rec["event"] != "placement"]
        for a, b in zip(rows, rows[1:]):
            assert b in (a, a - 1)

    def test_robber_stays_below_after_first_descent(self):
        res = run_match(GridSpec(30, 3), sweep_cop_count(30, 3), LineSweep(), GreedyEvader(), 9000, seed=9)
        assert res.outcome == "capture"
        descended = False
        top = 30
        for rec in res.trace:
            if rec["event"] == "placement":
                continue
            row = rec["cops"][0][1]
            if row < top:
                descended = True
                top = row
            if descended and rec["event"] != "capture" and rec["actor"] == "robber":
                assert rec["robber"][1] < row

    def test_broken_formation_detected(self):
        s, state = _sweep_in_state(50, 2, 19, 20, 30, (40, 5))
        bent = state.cops[:-1] + ((50, 50),)
        bad = GameState(spec=state.spec, cops=bent, robber=state.robber, phase=state.phase)
        with pytest.raises(FormationError):
            s.move(bad, None)

    def test_invariant_violation_detected(self):
        # robber above the line after a descent must trip the internal check
        s, state = _sweep_in_state(50, 2, 19, 20, 10, (20, 30), descended=True)
        with pytest.raises(FormationError):
            s.move(state, None)


class TestCaptures:
    @pytest.mark.parametrize("speed", [2, 3])
    @pytest.mark.parametrize("robber", [GreedyEvader, RandomEvader, StationaryRobber])
    def test_sweep_captures_quickly(self, speed, robber):
        n = 30
        res = run_match(
            GridSpec(n, speed),
            sweep_cop_count(n, speed),
            LineSweep(),
            robber(),
            10 * n * n,
            seed=13,
        )
        assert res.outcome == "capture"
        assert res.rounds <= 10 * n * n
