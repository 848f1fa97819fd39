"""Baseline adversary tests: fixed tie-breaks and blanket move legality."""

import random

import pytest

from gridpursuit.baselines import (
    GreedyEvader,
    GreedyPursuer,
    RandomCops,
    RandomEvader,
    ScriptedCops,
    ShadowPursuer,
    StationaryRobber,
)
from gridpursuit.game import (
    GameState,
    GridSpec,
    RuleViolation,
    reachable_set,
    run_match,
)


def state_of(n, speed, cops, robber):
    return GameState(
        spec=GridSpec(n, speed), cops=tuple(cops), robber=robber, phase="cops-to-move"
    )


def robber_state(n, speed, cops, robber):
    return GameState(
        spec=GridSpec(n, speed), cops=tuple(cops), robber=robber, phase="robber-to-move"
    )


class TestGreedyPursuer:
    def test_vertical_preference_on_diagonal(self):
        s = state_of(9, 2, [(1, 1)], (5, 5))
        assert GreedyPursuer().move(s, None) == [(1, 2)]

    def test_capture_move_when_adjacent(self):
        s = state_of(9, 2, [(5, 4)], (5, 5))
        assert GreedyPursuer().move(s, None) == [(5, 5)]

    def test_horizontal_step_when_co_row(self):
        s = state_of(9, 2, [(2, 5)], (7, 5))
        assert GreedyPursuer().move(s, None) == [(3, 5)]


class TestShadowPursuer:
    def test_aligns_column_first(self):
        s = state_of(9, 2, [(2, 2)], (6, 8))
        assert ShadowPursuer().move(s, None) == [(3, 2)]

    def test_closes_vertically_once_aligned(self):
        s = state_of(9, 2, [(6, 2)], (6, 8))
        assert ShadowPursuer().move(s, None) == [(6, 3)]


class TestGreedyEvader:
    def test_stays_when_nothing_improves(self):
        # fully boxed in: neighbors blocked by cops
        s = robber_state(3, 2, [(1, 2), (2, 1)], (1, 1))
        assert GreedyEvader().walk(s, None) == [(1, 1)]

    def test_full_speed_retreat_from_adjacent_cop(self):
        s = robber_state(9, 3, [(4, 5)], (5, 5))
        walk = GreedyEvader().walk(s, None)
        # oracle: best reachable min-distance and the smallest such square
        values = {}
        for sq in reachable_set(s):
            values[sq] = abs(sq[0] - 4) + abs(sq[1] - 5)
        best = max(values.values())
        expect = min(sq for sq, v in values.items() if v == best)
        assert len(walk) - 1 == 3
        assert walk[-1] == expect

    def test_placement_prefers_far_corner(self):
        spec = GridSpec(2, 1)
        s = GameState(spec=spec, cops=((1, 1),), robber=None, phase="robber-placing")
        assert GreedyEvader().place(s, None) == (2, 2)


class TestScriptedCops:
    def test_empty_tail_means_stationary(self):
        script = [[(3, 3)]]
        s = state_of(9, 2, [(3, 3)], (7, 7))
        cops = ScriptedCops(script)
        cops.place(GridSpec(9, 2), 1, None)
        assert cops.move(s, None) == [(3, 3)]
        assert cops.move(s, None) == [(3, 3)]

    def test_script_replay_in_order(self):
        script = [[(3, 3)], [(3, 4)], [(4, 4)]]
        cops = ScriptedCops(script)
        assert cops.place(GridSpec(9, 2), 1, None) == [(3, 3)]
        s = state_of(9, 2, [(3, 3)], (7, 7))
        assert cops.move(s, None) == [(3, 4)]
        s = state_of(9, 2, [(3, 4)], (7, 7))
        assert cops.move(s, None) == [(4, 4)]

    def test_illegal_entry_aborts_attributed_to_cops(self):
        script = [[(3, 3)], [(6, 6)]]
        with pytest.raises(RuleViolation) as err:
            run_match(GridSpec(9, 2), 1, ScriptedCops(script), StationaryRobber(), 3, 0)
        assert err.value.actor == "cops"


class TestBlanketLegality:
    def test_thousand_randomized_matches_stay_legal(self):
        # run_match validates every placement and move, so completing the
        # match is the legality assertion
        cop_types = [GreedyPursuer, ShadowPursuer, RandomCops]
        robber_types = [GreedyEvader, RandomEvader, StationaryRobber]
        rng = random.Random(0)
        played = 0
        for seed in range(1000):
            n = rng.choice((4, 5, 6))
            speed = rng.choice((1, 2, 3))
            cops = rng.choice((1, 2, 3))
            cop = cop_types[seed % 3]()
            robber = robber_types[(seed // 3) % 3]()
            res = run_match(GridSpec(n, speed), cops, cop, robber, 6, seed=seed)
            assert res.outcome in ("capture", "survived")
            played += 1
        assert played == 1000
