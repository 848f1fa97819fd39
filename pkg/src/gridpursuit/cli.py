"""Command-line front end: solve, simulate, sweep, validate-params, bounds,
replay.

Numeric flags accept exact power notation like 1e20.  An optional config
file supplies the same keys as the long flags (dashes or underscores);
explicit flags win.  Exit status is 0 on a completed command and nonzero
exactly on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .evasion import HypothesisError, SafetyInvariantError
from .game import GridSpec, RuleViolation, run_match
from .hierarchy import (
    CANONICAL_PARAMS,
    HierarchyParams,
    cell_side,
    level_scale,
    parse_exact_int,
    validate_params,
)
from .registry import make_cop_strategy, make_robber_strategy
from .solver import BudgetExceededError, DEFAULT_BUDGET, cop_number, solve
from .sweep import FormationError, sweep_cop_count, sweep_half_width
from .trace import read_jsonl, replay, write_jsonl

_ERRORS = (
    RuleViolation,
    HypothesisError,
    SafetyInvariantError,
    FormationError,
    BudgetExceededError,
    ValueError,
    OSError,
)


def _parse_params(text: str) -> HierarchyParams:
    fields = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        if not key.strip():
            continue
        fields[key.strip()] = value.strip()
    return HierarchyParams.from_mapping(fields)


def _load_config(path: str) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(args: argparse.Namespace, parser_defaults: dict) -> None:
    if not getattr(args, "config", None):
        return
    cfg = _load_config(args.config)
    for key, raw in cfg.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) == parser_defaults.get(key):
            current_default = parser_defaults.get(key)
            if isinstance(current_default, bool):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(current_default, int) or key in (
                "n",
                "speed",
                "cops",
                "rounds",
                "seed",
                "max_cops",
                "budget",
                "half_width",
                "level",
                "parallel",
            ):
                value = parse_exact_int(raw)
            else:
                value = raw
            setattr(args, key, value)


def _emit(args, human: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _cmd_solve(args) -> int:
    budget = args.budget if args.budget is not None else DEFAULT_BUDGET
    c = cop_number(args.n, args.speed, args.max_cops, budget)
    if args.export is not None and c is not None:
        solve(args.n, args.speed, c, budget).save(args.export)
    if c is None:
        _emit(
            args,
            f"f_{args.speed}({args.n}) exceeds {args.max_cops}",
            {"n": args.n, "speed": args.speed, "cop_number": None, "max_cops": args.max_cops},
        )
    else:
        _emit(
            args,
            f"f_{args.speed}({args.n}) = {c}",
            {"n": args.n, "speed": args.speed, "cop_number": c},
        )
    return 0


def _run_one_match(packed):
    (n, speed, cops, cop_name, robber_name, params_text, level, script, half_width,
     rounds, seed, trace_path) = packed
    params = _parse_params(params_text) if params_text else None
    cop = make_cop_strategy(cop_name, script=script, half_width=half_width)
    robber = make_robber_strategy(robber_name, params=params, level=level)
    result = run_match(GridSpec(n, speed), cops, cop, robber, rounds, seed)
    if trace_path:
        write_jsonl(result.trace, trace_path)
    return seed, result.outcome, result.rounds


def _simulate_common(args, cop_name: str) -> int:
    params = None
    if args.params:
        params = _parse_params(args.params)
        violations = validate_params(params)
        if violations:
            print("invalid parameters:", file=sys.stderr)
            for v in violations:
                print(f"  {v}", file=sys.stderr)
            return 1
    script = None
    if getattr(args, "script", None):
        script = [rec["cops"] for rec in read_jsonl(args.script)]

    if cop_name == "line-sweep" and args.cops is None:
        half = args.half_width
        args.cops = (2 * half + 1) if half is not None else sweep_cop_count(args.n, args.speed)
    if args.cops is None:
        print("error: --cops is required", file=sys.stderr)
        return 1

    seeds = [args.seed + i for i in range(args.parallel)]
    jobs = []
    for s in seeds:
        tpath = args.trace
        if tpath and len(seeds) > 1:
            p = Path(tpath)
            tpath = str(p.with_name(f"{p.stem}.s{s}{p.suffix}"))
        jobs.append(
            (
                args.n,
                args.speed,
                args.cops,
                cop_name,
                args.robber_strategy,
                args.params,
                args.level,
                script,
                args.half_width,
                args.rounds,
                s,
                tpath,
            )
        )
    if len(jobs) == 1:
        results = [_run_one_match(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=min(len(jobs), 8)) as pool:
            results = list(pool.map(_run_one_match, jobs))

    payload = {
        "n": args.n,
        "speed": args.speed,
        "cops": args.cops,
        "matches": [
            {"seed": s, "outcome": outcome, "rounds": rounds}
            for s, outcome, rounds in results
        ],
    }
    lines = [
        f"seed {s}: {outcome} after {rounds} rounds" for s, outcome, rounds in results
    ]
    _emit(args, "\n".join(lines), payload)
    return 0


def _cmd_simulate(args) -> int:
    return _simulate_common(args, args.cop_strategy)


def _cmd_sweep(args) -> int:
    args.cop_strategy = "line-sweep"
    return _simulate_common(args, "line-sweep")


def _cmd_validate_params(args) -> int:
    params = _parse_params(args.params)
    violations = validate_params(params)
    payload = {
        "params": {
            "C": params.slack,
            "N": params.base,
            "R": params.speed,
            "k_max": params.k_max,
            "mode": params.mode,
        },
        "valid": not violations,
        "violations": violations,
    }
    if violations:
        human = "invalid:\n  " + "\n  ".join(violations)
        _emit(args, human, payload)
        return 1
    _emit(args, "valid", payload)
    return 0


def _cmd_bounds(args) -> int:
    params = _parse_params(args.params) if args.params else CANONICAL_PARAMS
    level = 0
    for k in range(1, params.k_max + 1):
        if 2 * cell_side(k, params) <= args.n:
            level = k
    lower = 2**level
    lines = []
    if level:
        lines.append(
            f"evasion: level {level} fits (2*N*L_{level} = "
            f"{2 * cell_side(level, params)} <= n = {args.n}); "
            f"any team smaller than {lower} cops is evaded"
        )
    else:
        lines.append(
            f"evasion: no level fits a grid of side {args.n} with these parameters"
        )
    payload = {"n": args.n, "evasion_level": level, "cop_lower_bound": lower}
    if args.speed is not None:
        try:
            half = sweep_half_width(args.n, args.speed)
            count = sweep_cop_count(args.n, args.speed)
            lines.append(f"sweep: half-width {half}, cop count {count}")
            payload["sweep_half_width"] = half
            payload["sweep_cop_count"] = count
        except FormationError as exc:
            lines.append(f"sweep: {exc}")
            payload["sweep_error"] = str(exc)
    _emit(args, "\n".join(lines), payload)
    return 0


def _cmd_replay(args) -> int:
    records = read_jsonl(args.trace)
    report = replay(records, GridSpec(args.n, args.speed))
    payload = {
        "trace": args.trace,
        "records": report.records,
        "valid": report.valid,
        "first_bad_index": report.first_bad_index,
        "reason": report.reason,
    }
    if report.valid:
        _emit(args, f"valid ({report.records} records)", payload)
        return 0
    _emit(
        args,
        f"invalid at record {report.first_bad_index}: {report.reason}",
        payload,
    )
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridpursuit",
        description="Pursuit-evasion engine for cops and a fast robber on square grids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="file with key = value lines, flags win")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("solve", help="exact cop number on a tiny grid")
    p.add_argument("--n", type=parse_exact_int, required=True)
    p.add_argument("--speed", type=parse_exact_int, required=True)
    p.add_argument("--max-cops", type=parse_exact_int, required=True)
    p.add_argument("--budget", type=parse_exact_int, default=None)
    p.add_argument("--export", help="write the solved table (binary + JSON summary)")
    add_common(p)
    p.set_defaults(func=_cmd_solve)

    for name, helptext in (
        ("simulate", "run one or more matches between named strategies"),
        ("sweep", "run the line-sweep cops against a named robber"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n", type=parse_exact_int, required=True)
        p.add_argument("--speed", type=parse_exact_int, required=True)
        p.add_argument("--cops", type=parse_exact_int, default=None)
        if name == "simulate":
            p.add_argument("--cop-strategy", required=True)
        p.add_argument("--robber-strategy", required=True)
        p.add_argument("--params", help="C=..,N=..,R=..,k_max=..,mode=..")
        p.add_argument("--level", type=parse_exact_int, default=None)
        p.add_argument("--script", help="JSON-lines cop script for ambush-script")
        p.add_argument("--half-width", type=parse_exact_int, default=None)
        p.add_argument("--rounds", type=parse_exact_int, default=1000)
        p.add_argument("--seed", type=parse_exact_int, default=0)
        p.add_argument("--trace", help="write the JSON-lines trace here")
        p.add_argument(
            "--parallel",
            type=parse_exact_int,
            default=1,
            help="fan out this many independently seeded matches",
        )
        add_common(p)
        p.set_defaults(func=_cmd_simulate if name == "simulate" else _cmd_sweep)

    p = sub.add_parser("validate-params", help="check a parameter block")
    p.add_argument("--params", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_validate_params)

    p = sub.add_parser("bounds", help="evasion threshold and sweep size arithmetic")
    p.add_argument("--n", type=parse_exact_int, required=True)
    p.add_argument("--speed", type=parse_exact_int, default=None)
    p.add_argument("--params", help="defaults to the canonical block")
    add_common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("replay", help="validate a trace file")
    p.add_argument("--trace", required=True)
    p.add_argument("--n", type=parse_exact_int, required=True)
    p.add_argument("--speed", type=parse_exact_int, required=True)
    add_common(p)
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {
        a.dest: a.default
        for a in parser._subparsers._group_actions[0]
        .choices[args.command]
        ._actions
    }
    try:
        _merge_config(args, defaults)
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
