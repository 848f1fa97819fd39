"""gridpursuit: cops versus a fast robber on square grids.

A match engine with validated moves and replayable JSON-lines traces, a
recursive cell-to-cell evasion strategy for the robber, a descending
line-sweep strategy for the cops, simple baseline adversaries, and an exact
backward-induction solver for tiny instances.
"""

from .game import (
    GameState,
    GridSpec,
    MatchResult,
    RuleViolation,
    adjacent,
    apply_cop_move,
    apply_robber_walk,
    reachable_set,
    run_match,
)
from .hierarchy import (
    CANONICAL_PARAMS,
    Cell,
    HierarchyParams,
    SafetyContext,
    cell_of,
    is_completely_k_safe,
    is_k_safe,
    is_landing_square,
    landing_zone,
    level_scale,
    step_budget,
    validate_params,
)
from .evasion import HierarchicalEvader, HypothesisError, SafetyInvariantError
from .registry import make_cop_strategy, make_robber_strategy
from .solver import WinTable, cop_number, solve, verify_strategy_against_table
from .sweep import LineSweep, sweep_cop_count, sweep_half_width
from .trace import read_jsonl, replay, replay_file, write_jsonl

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_PARAMS",
    "Cell",
    "GameState",
    "GridSpec",
    "HierarchicalEvader",
    "HierarchyParams",
    "HypothesisError",
    "LineSweep",
    "MatchResult",
    "RuleViolation",
    "SafetyContext",
    "SafetyInvariantError",
    "WinTable",
    "adjacent",
    "apply_cop_move",
    "apply_robber_walk",
    "cell_of",
    "cop_number",
    "is_completely_k_safe",
    "is_k_safe",
    "is_landing_square",
    "landing_zone",
    "level_scale",
    "make_cop_strategy",
    "make_robber_strategy",
    "reachable_set",
    "replay",
    "replay_file",
    "read_jsonl",
    "run_match",
    "solve",
    "step_budget",
    "sweep_cop_count",
    "sweep_half_width",
    "validate_params",
    "verify_strategy_against_table",
    "write_jsonl",
]
