"""Strategy lookup by the names the command line and configs use."""

from __future__ import annotations

from typing import Optional

from .baselines import (
    GreedyEvader,
    GreedyPursuer,
    RandomCops,
    RandomEvader,
    ScriptedCops,
    ShadowPursuer,
    StationaryRobber,
)
from .evasion import HierarchicalEvader
from .hierarchy import HierarchyParams
from .sweep import LineSweep

COP_STRATEGIES = (
    "greedy-pursuer",
    "shadow-pursuer",
    "random-cop",
    "ambush-script",
    "line-sweep",
)

ROBBER_STRATEGIES = (
    "greedy-evader",
    "random-evader",
    "stationary",
    "hierarchical",
)


def make_cop_strategy(
    name: str,
    script: Optional[list] = None,
    half_width: Optional[int] = None,
):
    if name == "greedy-pursuer":
        return GreedyPursuer()
    if name == "shadow-pursuer":
        return ShadowPursuer()
    if name == "random-cop":
        return RandomCops()
    if name == "ambush-script":
        if script is None:
            raise ValueError("ambush-script needs a script")
        return ScriptedCops(script)
    if name == "line-sweep":
        return LineSweep(half_width=half_width)
    raise ValueError(f"unknown cop strategy {name!r}; known: {', '.join(COP_STRATEGIES)}")


def make_robber_strategy(
    name: str,
    params: Optional[HierarchyParams] = None,
    level: Optional[int] = None,
):
    if name == "greedy-evader":
        return GreedyEvader()
    if name == "random-evader":
        return RandomEvader()
    if name == "stationary":
        return StationaryRobber()
    if name == "hierarchical":
        if params is None:
            raise ValueError("hierarchical needs a parameter block")
        return HierarchicalEvader(params, level=level)
    raise ValueError(
        f"unknown robber strategy {name!r}; known: {', '.join(ROBBER_STRATEGIES)}"
    )
