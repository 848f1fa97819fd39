"""JSON-lines match traces: writing, reading, and replay validation.

One record per placement or move, fields {round, actor, cops, robber, walk?,
event} plus an optional per-turn "meta" extension emitted by strategies.
Long straight dashes are run-length encoded as {"from": [x,y], "to": [x,y]}
segments; from and to must be collinear along one axis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .game import (
    PHASE_CAPTURED,
    Coord,
    GameState,
    GridSpec,
    RuleViolation,
    Walk,
    apply_cop_move,
    apply_robber_walk,
    initial_state,
    place_cops,
    place_robber,
)

_RLE_THRESHOLD = 8  # raw square lists stay readable for short walks


def encode_walk(walk: Walk) -> list:
    """Encode a walk for a trace record, compressing long straight runs."""
    if len(walk) <= _RLE_THRESHOLD:
        return [list(p) for p in walk]
    segments = []
    start = walk[0]
    prev = walk[0]
    direction = None
    for cur in walk[1:]:
        d = (cur[0] - prev[0], cur[1] - prev[1])
        if direction is None:
            direction = d
        elif d != direction:
            segments.append({"from": list(start), "to": list(prev)})
            start = prev
            direction = d
        prev = cur
    segments.append({"from": list(start), "to": list(prev)})
    return segments


def decode_walk(encoded: list) -> Walk:
    """Expand a trace walk field back into the full square sequence."""
    if not encoded:
        return []
    if isinstance(encoded[0], dict):
        walk: Walk = []
        for seg in encoded:
            fx, fy = seg["from"]
            tx, ty = seg["to"]
            if fx != tx and fy != ty:
                raise ValueError(f"segment {seg} is not axis-aligned")
            step = _segment_squares((fx, fy), (tx, ty))
            if walk:
                if walk[-1] != step[0]:
                    raise ValueError(f"segment {seg} does not continue the walk")
                walk.extend(step[1:])
            else:
                walk.extend(step)
        return walk
    return [(int(p[0]), int(p[1])) for p in encoded]


def _segment_squares(a: Coord, b: Coord) -> Walk:
    if a == b:
        return [a]
    if a[0] == b[0]:
        step = 1 if b[1] > a[1] else -1
        return [(a[0], y) for y in range(a[1], b[1] + step, step)]
    step = 1 if b[0] > a[0] else -1
    return [(x, a[1]) for x in range(a[0], b[0] + step, step)]


def dumps_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def write_jsonl(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(dumps_record(rec) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


@dataclass
class ReplayReport:
    valid: bool
    records: int
    first_bad_index: Optional[int] = None
    reason: Optional[str] = None


_REQUIRED_FIELDS = {"round", "actor", "cops", "robber", "event"}


def replay(records: list[dict], spec: GridSpec) -> ReplayReport:
    """Re-validate a trace by replaying every record through the rule checks.

    Returns the index of the first offending record when the trace is not a
    legal game under `spec`.
    """
    state = initial_state(spec)
    last_round = 0
    for idx, rec in enumerate(records):
        try:
            missing = _REQUIRED_FIELDS - rec.keys()
            if missing:
                raise ValueError(f"missing fields {sorted(missing)}")
            rnd = rec["round"]
            if rnd < last_round:
                raise ValueError(f"round went backwards: {last_round} -> {rnd}")
            actor = rec["actor"]
            cops = [tuple(p) for p in rec["cops"]]
            event = rec["event"]
            if event == "placement":
                if rnd != 0:
                    raise ValueError("placement record with nonzero round")
                if actor == "cops":
                    state = place_cops(state, cops)
                elif actor == "robber":
                    if rec["robber"] is None:
                        raise ValueError("robber placement without a square")
                    state = place_robber(state, tuple(rec["robber"]))
                    if cops != list(state.cops):
                        raise ValueError("cop list changed on robber placement")
                else:
                    raise ValueError(f"unknown actor {actor!r}")
            elif actor == "cops":
                if rnd != state.round + 1:
                    raise ValueError(f"cop move at round {rnd}, expected {state.round + 1}")
                state = apply_cop_move(state, cops)
                captured = state.phase == PHASE_CAPTURED
                if event != ("capture" if captured else "move"):
                    raise ValueError(f"event {event!r} does not match the position")
                if tuple(rec["robber"]) != state.robber:
                    raise ValueError("robber square changed on a cop move")
            elif actor == "robber":
                if event != "move":
                    raise ValueError(f"unexpected robber event {event!r}")
                if "walk" not in rec:
                    raise ValueError("robber move without a walk")
                walk = decode_walk(rec["walk"])
                if rnd != state.round + 1:
                    raise ValueError(f"robber move at round {rnd}, expected {state.round + 1}")
                state = apply_robber_walk(state, walk)
                if tuple(rec["robber"]) != state.robber:
                    raise ValueError("recorded robber square does not match the walk")
                if cops != [tuple(p) for p in state.cops]:
                    raise ValueError("cop list changed on a robber move")
            else:
                raise ValueError(f"unknown actor {actor!r}")
            last_round = rnd
        except (RuleViolation, ValueError, KeyError, TypeError) as exc:
            return ReplayReport(
                valid=False, records=len(records), first_bad_index=idx, reason=str(exc)
            )
    return ReplayReport(valid=True, records=len(records))


def replay_file(path: str | Path, spec: GridSpec) -> ReplayReport:
    return replay(read_jsonl(path), spec)
