import pytest

from eplan.estate import EState
from eplan.formula import And, Atom, Believes, Not
from eplan.initial import build_initial_state
from eplan.language import ground_action_instances, parse_domain
from eplan.planner import NoPlan, Plan, SearchConfig, goal_satisfied, plan_bfs, replay
from oracles import oracle_shortest_plan
from support import BENCHMARKS, SMALL, load_domain

EXPECTED = {
    "coin_in_the_box": 4,
    "selective_communication": 3,
    "grapevine": 3,
    "collaboration_communication": 3,
    "assembly_line": 5,
    "goal_at_start": 0,
    "one_step": 1,
}


def test_goal_satisfied():
    s = EState(("p",), ("a",), ({"p"}, set()), {(0, "a", 0), (0, "a", 1), (1, "a", 1)}, 0)
    assert goal_satisfied(s, Atom("p"))
    assert goal_satisfied(s, And(Not(Believes("a", Atom("p"))), Not(Believes("a", Not(Atom("p"))))))
    assert not goal_satisfied(s, Believes("a", Atom("p")))


def test_goal_at_start_gives_empty_plan():
    result = plan_bfs(load_domain("goal_at_start"))
    assert isinstance(result, Plan)
    assert result.steps == []
    assert result.stats.states_expanded == 0


def test_one_step():
    result = plan_bfs(load_domain("one_step"))
    assert result.steps == ["set"]


def test_config_rejects_negative_horizon():
    with pytest.raises(ValueError):
        SearchConfig(max_horizon=-1)


@pytest.mark.parametrize("name", BENCHMARKS + SMALL)
def test_plan_is_optimal(name):
    d = load_domain(name)
    result = plan_bfs(d)
    assert isinstance(result, Plan)
    s, _ = build_initial_state(d)
    assert result.length == oracle_shortest_plan(s, ground_action_instances(d), d.goal) == EXPECTED[name]
    assert goal_satisfied(replay(d, result.steps)[-1], d.goal)


@pytest.mark.parametrize("name", BENCHMARKS)
def test_visited_check_keeps_optimality(name):
    d = load_domain(name)
    on = plan_bfs(d, SearchConfig(visited_check=True))
    off = plan_bfs(d, SearchConfig(visited_check=False))
    assert on.length == off.length
    assert off.stats.states_pruned == 0
    assert on.stats.states_expanded <= off.stats.states_expanded


def test_some_fixture_prunes():
    assert any(plan_bfs(load_domain(n)).stats.states_pruned > 0 for n in BENCHMARKS)


@pytest.mark.parametrize("name", BENCHMARKS)
def test_search_is_deterministic(name):
    d = load_domain(name)
    first, second = plan_bfs(d), plan_bfs(d)
    assert first.steps == second.steps
    assert first.stats.states_expanded == second.stats.states_expanded
    assert first.stats.states_pruned == second.stats.states_pruned


def test_bound_exhaustion():
    result = plan_bfs(load_domain("coin_in_the_box"), SearchConfig(max_horizon=2))
    assert isinstance(result, NoPlan)
    assert result.bound == 2
    assert result.stats.horizons == 3


def test_unreachable_goal_exhausts_frontier():
    d = parse_domain("fluent p; agent a; initially C([a], not p); goal p;")
    result = plan_bfs(d, SearchConfig(max_horizon=5))
    assert isinstance(result, NoPlan)


def test_visited_check_closes_finite_space():
    # toggling p forever: with repeats pruned the frontier empties quickly
    d = parse_domain(
        "fluent p, q; agent a; action on, off; on causes p; off causes not p; a observes on; a observes off;"
        "initially C([a], not p); initially C([a], not q); goal q;"
    )
    result = plan_bfs(d, SearchConfig(max_horizon=50))
    assert isinstance(result, NoPlan)
    assert result.stats.horizons <= 3


def test_on_horizon_callback():
    calls = []
    plan_bfs(load_domain("selective_communication"), on_horizon=lambda t, n: calls.append((t, n)))
    assert [t for t, _ in calls] == [0, 1, 2, 3]
    assert calls[0] == (0, 1)


def test_all_plans_lists_leftmost_first():
    d = parse_domain(
        "fluent p, q; agent a; action x, y; x causes p; y causes q; a observes x; a observes y;"
        "initially C([a], not p); initially C([a], not q); goal p or q;"
    )
    result = plan_bfs(d, SearchConfig(all_plans=True))
    assert result.steps == ["x"]
    assert result.alternatives == [["x"], ["y"]]


def test_all_plans_keeps_same_horizon_repeats():
    d = parse_domain(
        "fluent p, q; agent a; action x, y; x causes p; y causes q; a observes x; a observes y;"
        "initially C([a], not p); initially C([a], not q); goal p and q;"
    )
    result = plan_bfs(d, SearchConfig(all_plans=True))
    assert result.alternatives == [["x", "y"], ["y", "x"]]
    assert plan_bfs(d).steps == ["x", "y"]


def test_replay_errors():
    d = load_domain("one_step")
    with pytest.raises(ValueError, match="unknown action"):
        replay(d, ["nope"])
    blocked = parse_domain("fluent p; agent a; action x; executable x if p; x causes p; initially C([a], not p); goal p;")
    with pytest.raises(ValueError, match="not executable"):
        replay(blocked, ["x"])
