"""Breadth-first search for shortest plans, one horizon at a time."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .estate import CanonicalForm, EState, canonicalize, entails
from .formula import Formula
from .initial import InitialBuildReport, build_initial_state
from .language import ActionInstance, Domain, classify_initially, ground_action_instances
from .transition import apply_canonical


@dataclass(frozen=True)
class SearchConfig:
    max_horizon: int = 20
    visited_check: bool = True
    all_plans: bool = False

    def __post_init__(self):
        if self.max_horizon < 0:
            raise ValueError("max_horizon must be non-negative")


@dataclass
class SearchStats:
    states_expanded: int = 0
    states_pruned: int = 0
    horizons: int = 0
    setup_time: float = 0.0
    search_time: float = 0.0

    @property
    def wall_time(self) -> float:
        return self.setup_time + self.search_time


@dataclass
class Plan:
    steps: list[str]
    stats: SearchStats = field(default_factory=SearchStats)
    alternatives: list[list[str]] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.steps)


@dataclass
class NoPlan:
    """The horizon bound ran out.

    This says nothing about whether a longer plan exists: plan existence is
    undecidable for epistemic planning in general.
    """

    bound: int
    stats: SearchStats = field(default_factory=SearchStats)


def goal_satisfied(s: EState, g: Formula) -> bool:
    return entails(s, s.pointed, g)


@dataclass
class _Node:
    form: CanonicalForm
    steps: tuple[str, ...]


class _Visited:
    """Canonical states seen so far, bucketed by digest.

    Buckets hold full canonical text, so a digest collision never prunes a
    new state.
    """

    def __init__(self):
        self._seen: dict[str, dict[str, int]] = {}

    def horizon_of(self, form: CanonicalForm) -> int | None:
        return self._seen.get(form.digest, {}).get(form.text)

    def add(self, form: CanonicalForm, horizon: int):
        self._seen.setdefault(form.digest, {}).setdefault(form.text, horizon)


def plan_bfs(
    d: Domain,
    cfg: SearchConfig | None = None,
    on_horizon: Callable[[int, int], None] | None = None,
) -> Plan | NoPlan:
    """Shortest plan for ``d`` by breadth-first search over horizons.

    Horizon ``t`` holds every state reachable by ``t`` actions (minus
    pruned repeats), in leftmost-first order of action declaration. The goal
    is checked on a whole horizon before the next is built, so the first
    goal state found is the leftmost among the shortest plans.
    ``on_horizon(t, frontier_size)`` is called before each horizon is
    checked.
    """
    cfg = cfg or SearchConfig()
    stats = SearchStats()
    started = time.perf_counter()
    initial, _ = build_initial_state(d, classify_initially(d))
    actions = ground_action_instances(d)
    goal = d.goal
    stats.setup_time = time.perf_counter() - started

    started = time.perf_counter()
    frontier = [_Node(canonicalize(initial), ())]
    visited = _Visited()
    visited.add(frontier[0].form, 0)
    horizon = 0
    try:
        while True:
            stats.horizons = horizon + 1
            if on_horizon:
                on_horizon(horizon, len(frontier))
            winners = [node.steps for node in frontier if goal_satisfied(node.form.state, goal)]
            if winners:
                plan = Plan(list(winners[0]), stats)
                if cfg.all_plans:
                    plan.alternatives = [list(w) for w in winners]
                return plan
            if horizon >= cfg.max_horizon:
                return NoPlan(cfg.max_horizon, stats)
            frontier = _expand(frontier, actions, visited, horizon + 1, cfg, stats)
            horizon += 1
            if not frontier:
                stats.horizons = horizon
                return NoPlan(cfg.max_horizon, stats)
    finally:
        stats.search_time = time.perf_counter() - started


def _expand(
    frontier: list[_Node],
    actions: list[ActionInstance],
    visited: _Visited,
    horizon: int,
    cfg: SearchConfig,
    stats: SearchStats,
) -> list[_Node]:
    successors = []
    for node in frontier:
        stats.states_expanded += 1
        for a in actions:
            form = apply_canonical(node.form.state, a)
            if form is None:
                continue
            if cfg.visited_check:
                seen_at = visited.horizon_of(form)
                # all-plans mode keeps same-horizon repeats: they are distinct optimal prefixes
                if seen_at is not None and (seen_at < horizon or not cfg.all_plans):
                    stats.states_pruned += 1
                    continue
                visited.add(form, horizon)
            successors.append(_Node(form, node.steps + (a.name,)))
    return successors


def replay(d: Domain, steps: list[str]) -> list[EState]:
    """States along ``steps`` starting from the initial state.

    Raises ``ValueError`` if a step is unknown or not executable.
    """
    state, _ = build_initial_state(d, classify_initially(d))
    by_name = {a.name: a for a in ground_action_instances(d)}
    trace = [state]
    for name in steps:
        if name not in by_name:
            raise ValueError(f"unknown action {name!r}")
        form = apply_canonical(state, by_name[name])
        if form is None:
            raise ValueError(f"action {name!r} is not executable")
        state = form.state
        trace.append(state)
    return trace


def initial_report(d: Domain) -> InitialBuildReport:
    return build_initial_state(d, classify_initially(d))[1]
