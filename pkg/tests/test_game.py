"""Rules-level tests: adjacency, move validation, reachability, match runner."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gridpursuit.game import (
    GameState,
    GridSpec,
    PHASE_CAPTURED,
    PHASE_COPS_TO_MOVE,
    PHASE_ROBBER_TO_MOVE,
    RuleViolation,
    adjacent,
    apply_cop_move,
    apply_robber_walk,
    initial_state,
    place_cops,
    place_robber,
    reachable_set,
    run_match,
    witness_walk,
)
from gridpursuit.baselines import GreedyPursuer, ScriptedCops, StationaryRobber
from gridpursuit.trace import replay


def make_state(n, speed, cops, robber, phase):
    return GameState(
        spec=GridSpec(n, speed), cops=tuple(cops), robber=robber, phase=phase
    )


def enumerate_accepted_endpoints(state):
    """Independent oracle: endpoints of every move sequence the validator
    accepts, by brute enumeration of direction strings up to the speed."""
    dirs = ((1, 0), (-1, 0), (0, 1), (0, -1))
    endpoints = set()
    for length in range(state.spec.speed + 1):
        for seq in itertools.product(dirs, repeat=length):
            walk = [state.robber]
            for dx, dy in seq:
                walk.append((walk[-1][0] + dx, walk[-1][1] + dy))
            try:
                endpoints.add(apply_robber_walk(state, walk).robber)
            except RuleViolation:
                pass
    return endpoints


class TestAdjacency:
    def test_unit_vertical_step(self):
        assert adjacent((2, 2), (2, 3))

    def test_diagonal_is_not_adjacent(self):
        assert not adjacent((2, 2), (3, 3))

    def test_identical_squares_are_not_adjacent(self):
        assert not adjacent((2, 2), (2, 2))


class TestCopMove:
    def test_ordinary_step(self):
        s = make_state(9, 2, [(1, 1)], (5, 5), PHASE_COPS_TO_MOVE)
        s2 = apply_cop_move(s, [(1, 2)])
        assert s2.cops == ((1, 2),) and s2.phase == PHASE_ROBBER_TO_MOVE

    def test_capture_by_colocation(self):
        s = make_state(9, 2, [(4, 5)], (5, 5), PHASE_COPS_TO_MOVE)
        s2 = apply_cop_move(s, [(5, 5)])
        assert s2.phase == PHASE_CAPTURED

    def test_speed_one_violation(self):
        s = make_state(9, 2, [(1, 1)], (5, 5), PHASE_COPS_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_cop_move(s, [(3, 1)])

    def test_wrong_arity(self):
        s = make_state(9, 2, [(1, 1), (2, 2)], (5, 5), PHASE_COPS_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_cop_move(s, [(1, 2)])

    def test_wrong_phase(self):
        s = make_state(9, 2, [(1, 1)], (5, 5), PHASE_ROBBER_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_cop_move(s, [(1, 2)])

    def test_out_of_bounds(self):
        s = make_state(9, 2, [(1, 1)], (5, 5), PHASE_COPS_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_cop_move(s, [(0, 1)])


class TestRobberWalk:
    def test_stay_walk_is_legal(self):
        s = make_state(9, 3, [(9, 9)], (1, 1), PHASE_ROBBER_TO_MOVE)
        s2 = apply_robber_walk(s, [(1, 1)])
        assert s2.robber == (1, 1) and s2.round == 1

    def test_walk_through_cop_rejected(self):
        s = make_state(9, 3, [(1, 2)], (1, 1), PHASE_ROBBER_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_robber_walk(s, [(1, 1), (1, 2), (1, 3)])

    def test_walk_ending_on_cop_rejected(self):
        s = make_state(9, 3, [(1, 3)], (1, 1), PHASE_ROBBER_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_robber_walk(s, [(1, 1), (1, 2), (1, 3)])

    def test_overlong_walk_rejected(self):
        s = make_state(9, 2, [(9, 9)], (1, 1), PHASE_ROBBER_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_robber_walk(s, [(1, 1), (1, 2), (1, 3), (1, 4)])

    def test_wrong_start_rejected(self):
        s = make_state(9, 2, [(9, 9)], (1, 1), PHASE_ROBBER_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_robber_walk(s, [(2, 1), (2, 2)])

    def test_jump_rejected(self):
        s = make_state(9, 2, [(9, 9)], (1, 1), PHASE_ROBBER_TO_MOVE)
        with pytest.raises(RuleViolation):
            apply_robber_walk(s, [(1, 1), (3, 1)])


class TestReachableSet:
    def test_closed_unit_ball(self):
        s = make_state(3, 1, [(3, 3)], (2, 2), PHASE_ROBBER_TO_MOVE)
        # the parked cop is far enough not to block the ball
        s = make_state(5, 1, [(5, 5)], (2, 2), PHASE_ROBBER_TO_MOVE)
        assert reachable_set(s) == {(2, 2), (1, 2), (3, 2), (2, 1), (2, 3)}

    def test_whole_grid_when_speed_exceeds_diameter(self):
        s = make_state(3, 9, [(3, 3)], (1, 1), PHASE_ROBBER_TO_MOVE)
        expect = {(x, y) for x in range(1, 4) for y in range(1, 4)} - {(3, 3)}
        assert reachable_set(s) == expect | set()

    def test_blocked_in_corner(self):
        s = make_state(3, 2, [(1, 2), (2, 1)], (1, 1), PHASE_ROBBER_TO_MOVE)
        assert reachable_set(s) == {(1, 1)}

    def test_matches_walk_enumeration_exhaustively(self):
        # Cross-check against accepted-walk endpoints on all small instances.
        for n in (2, 3, 4):
            squares = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
            for speed in (1, 2, 3):
                for cops in itertools.combinations_with_replacement(squares, 2):
                    for robber in squares:
                        if robber in cops:
                            continue
                        s = make_state(n, speed, cops, robber, PHASE_ROBBER_TO_MOVE)
                        assert reachable_set(s) == enumerate_accepted_endpoints(s), (
                            n,
                            speed,
                            cops,
                            robber,
                        )

    def test_witness_walks_are_legal_and_end_on_target(self):
        s = make_state(4, 3, [(2, 2)], (1, 1), PHASE_ROBBER_TO_MOVE)
        for target in sorted(reachable_set(s)):
            walk = witness_walk(s, target)
            assert apply_robber_walk(s, walk).robber == target


class TestCaptureInvariant:
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=60, deadline=None)
    def test_captured_iff_colocated(self, cx, cy, rx, ry):
        s = make_state(4, 2, [(cx, cy)], (rx, ry) if (rx, ry) != (cx, cy) else None,
                       PHASE_COPS_TO_MOVE)
        if s.robber is None:
            return
        s2 = apply_cop_move(s, [(cx, cy)])
        assert (s2.phase == PHASE_CAPTURED) == (s2.robber in s2.cops)


class TestPlacement:
    def test_robber_cannot_place_on_cop(self):
        s = place_cops(initial_state(GridSpec(3, 1)), [(2, 2)])
        with pytest.raises(RuleViolation):
            place_robber(s, (2, 2))

    def test_duplicate_cop_squares_allowed(self):
        s = place_cops(initial_state(GridSpec(3, 1)), [(2, 2), (2, 2)])
        assert s.cops == ((2, 2), (2, 2))


class _StationaryCops:
    def place(self, spec, count, rng):
        return [(1, spec.n)] * count

    def move(self, state, rng):
        return list(state.cops)


class TestRunMatch:
    def test_stationary_sides_survive(self):
        res = run_match(
            GridSpec(6, 2), 1, _StationaryCops(), StationaryRobber(), 10, seed=0
        )
        assert res.outcome == "survived" and res.rounds == 10

    def test_greedy_cop_catches_stationary_robber_on_2x2(self):
        # Placement puts the cop at (1,1); the robber takes the free diagonal
        # square (2,2); the cop walks over in two moves.
        res = run_match(
            GridSpec(2, 1), 1, GreedyPursuer(), StationaryRobber(), 10, seed=0
        )
        assert res.outcome == "capture" and res.rounds == 2

    def test_illegal_script_aborts_with_attribution(self):
        script = [[(1, 6)], [(3, 6)]]  # second entry teleports
        with pytest.raises(RuleViolation) as err:
            run_match(GridSpec(6, 2), 1, ScriptedCops(script), StationaryRobber(), 5, 0)
        assert err.value.actor == "cops"

    def test_round_counter_is_monotone_and_trace_replays(self):
        res = run_match(
            GridSpec(6, 2), 2, GreedyPursuer(), StationaryRobber(), 50, seed=3
        )
        rounds = [rec["round"] for rec in res.trace]
        assert rounds == sorted(rounds)
        robber_moves = [r for r in res.trace if r["actor"] == "robber" and r["event"] == "move"]
        assert [r["round"] for r in robber_moves] == list(
            range(1, len(robber_moves) + 1)
        )
        assert replay(res.trace, GridSpec(6, 2)).valid
