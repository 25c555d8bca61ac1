"""Command-line front end.

Exit status: 0 when a plan is found, 1 when the horizon bound is exhausted,
2 on unreadable input or an invalid domain.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .errors import EplanError
from .estate import EState, canonicalize
from .initial import build_initial_state, describe
from .language import classify_initially, parse_domain
from .planner import NoPlan, Plan, SearchConfig, plan_bfs, replay


def export_dot(s: EState, name: str = "estate") -> str:
    """Graphviz text for ``s``: one node per world, one edge per agent link.

    The pointed world gets a double border. Nodes and edges are listed in
    world-id order, so a canonical state always renders identically.
    """
    lines = [f"digraph {name} {{"]
    for i, w in enumerate(s.worlds):
        true = ", ".join(f for f in s.fluents if f in w)
        extra = ", peripheries=2" if i == s.pointed else ""
        lines.append(f'  w{i} [label="w{i} [{true}]"{extra}];')
    for u, ag, v in sorted(s.edges, key=lambda e: (e[0], e[2], e[1])):
        lines.append(f'  w{u} -> w{v} [label="{ag}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eplan", description="Multi-agent epistemic planner.")
    p.add_argument("input", type=Path, help="domain description file")
    p.add_argument("--max-horizon", type=int, default=20, metavar="N", help="longest plan to search for (default 20)")
    p.add_argument("--no-visited", action="store_true", help="disable pruning of repeated (bisimilar) states")
    p.add_argument("--all-plans", action="store_true", help="report every optimal plan")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--stats", action="store_true", help="print initial-state and search statistics")
    p.add_argument("--dot", type=Path, metavar="DIR", help="write the state after each plan step as a .dot file")
    p.add_argument("--trace", action="store_true", help="report each horizon on stderr")
    return p


def _ms(seconds: float) -> int:
    return int(round(seconds * 1000))


def result_json(result: Plan | NoPlan, all_plans: bool = False) -> dict:
    stats = result.stats
    out = {
        "plan": result.steps if isinstance(result, Plan) else None,
        "length": result.length if isinstance(result, Plan) else None,
        "horizons": stats.horizons,
        "states_expanded": stats.states_expanded,
        "states_pruned": stats.states_pruned,
        "time_ms": {"setup": _ms(stats.setup_time), "search": _ms(stats.search_time)},
    }
    if isinstance(result, NoPlan):
        out["bound"] = result.bound
    elif all_plans:
        out["all_plans"] = result.alternatives
    return out


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.max_horizon < 0:
        print("eplan: --max-horizon must be non-negative", file=stderr)
        return 2
    try:
        text = args.input.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"eplan: cannot read {args.input}: {exc.strerror or exc}", file=stderr)
        return 2

    cfg = SearchConfig(args.max_horizon, not args.no_visited, args.all_plans)

    def trace(horizon, frontier):
        print(f"horizon {horizon}: {frontier} states", file=stderr)

    try:
        started = time.perf_counter()
        domain = parse_domain(text)
        _, report = build_initial_state(domain, classify_initially(domain))
        parse_time = time.perf_counter() - started
        result = plan_bfs(domain, cfg, on_horizon=trace if args.trace else None)
        # parsing belongs to the setup phase as well
        result.stats.setup_time += parse_time
        trace_states = replay(domain, result.steps) if isinstance(result, Plan) and args.dot else []
    except EplanError as exc:
        print(f"eplan: {args.input}: {exc}", file=stderr)
        return 2

    if args.dot:
        args.dot.mkdir(parents=True, exist_ok=True)
        for i, state in enumerate(trace_states):
            (args.dot / f"step_{i:03d}.dot").write_text(export_dot(canonicalize(state).state, f"step_{i}"))

    if args.output == "json":
        print(json.dumps(result_json(result, args.all_plans)), file=stdout)
    elif isinstance(result, Plan):
        print(f"plan: [{', '.join(result.steps)}] (length {result.length})", file=stdout)
        if args.all_plans:
            for alt in result.alternatives:
                print(f"  optimal: [{', '.join(alt)}]", file=stdout)
    else:
        print(f"no plan within {result.bound} steps (bound exhausted; a longer plan may exist)", file=stdout)

    if args.stats:
        # keep stdout a single JSON document in json mode
        out = stderr if args.output == "json" else stdout
        s = result.stats
        print(f"initial state: {describe(report)}", file=out)
        print(
            f"horizons: {s.horizons}, expanded: {s.states_expanded}, pruned: {s.states_pruned}, "
            f"setup: {_ms(s.setup_time)} ms, search: {_ms(s.search_time)} ms",
            file=out,
        )
    return 0 if isinstance(result, Plan) else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
