"""Shared fixtures: domain files, the four-world example state, the coin."""
from __future__ import annotations

from pathlib import Path

from eplan.estate import make_state
from eplan.initial import build_initial_state
from eplan.language import classify_initially, parse_domain

DOMAINS = Path(__file__).resolve().parent.parent / "domains"

BENCHMARKS = [
    "coin_in_the_box",
    "selective_communication",
    "grapevine",
    "collaboration_communication",
    "assembly_line",
]
SMALL = ["goal_at_start", "one_step"]

# initially-unknown coin, a and b both ignorant, pointed world shows heads
COIN_TEXT = """
fluent heads;
agent a, b;
action peek;
peek determines heads;
a observes peek;
initially heads;
"""


def domain_path(name: str) -> Path:
    return DOMAINS / f"{name}.epl"


def load_domain(name: str):
    return parse_domain(domain_path(name).read_text())


def four_world():
    """The four-world possibility w: w={f,g,h}, w'={g,h}, v={f,h}, v'={h}."""
    everyone_vv = {"A": ["v", "v2"], "B": ["v", "v2"], "C": ["v", "v2"]}
    state, names = make_state(
        ("f", "g", "h"),
        ("A", "B", "C"),
        {"w": {"f", "g", "h"}, "w2": {"g", "h"}, "v": {"f", "h"}, "v2": {"h"}},
        {
            "w": {"A": ["w", "w2"], "B": ["w", "w2"], "C": ["v", "v2"]},
            "w2": {"A": ["w", "w2"], "B": ["w", "w2"], "C": ["v", "v2"]},
            "v": everyone_vv,
            "v2": everyone_vv,
        },
        "w",
    )
    return state, names


def coin_initial(extra: str = ""):
    d = parse_domain(COIN_TEXT + extra)
    return build_initial_state(d, classify_initially(d, require_coverage=False))


def transition_agrees(rng, formulas: int = 15) -> bool:
    """One random (state, action) case: does ``apply`` match the straight-line oracle?

    Both must reject the same inputs; otherwise the results must agree on
    ``formulas`` random formulas of depth at most 3.
    """
    import warnings

    from eplan.errors import TransitionError
    from eplan.transition import apply
    from oracles import OracleError, brute_entails, kripke_of, oracle_apply, random_action, random_formula, random_state

    s = random_state(rng, max_worlds=5, fluents=("p", "q"))
    a = random_action(rng, s.fluents, s.agents)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            expected = oracle_apply(kripke_of(s), a, "new")
        except OracleError:
            expected = OracleError
        try:
            got = apply(s, a)
        except TransitionError:
            got = OracleError
    if expected is OracleError or got is OracleError or expected is None or got is None:
        return expected is got
    for _ in range(formulas):
        phi = random_formula(rng, s.fluents, s.agents, depth=rng.randint(0, 3))
        if brute_entails(got, got.pointed, phi) != brute_entails(expected, expected.pointed, phi):
            return False
    return True
