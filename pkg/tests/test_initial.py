import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eplan.errors import InitialStateError
from eplan.estate import canonicalize, entails, is_s5
from eplan.formula import And, Atom, Believes, Not
from eplan.initial import build_initial_state
from eplan.language import classify_initially, parse_domain
from oracles import brute_entails, random_theory
from support import coin_initial

heads = Atom("heads")


def test_coin_everyone_ignorant():
    s, report = coin_initial()
    assert (report.uk, report.candidate_count, report.good_worlds) == (1, 2, 2)
    assert s.worlds == (frozenset(), frozenset({"heads"}))
    assert s.pointed == 1
    for ag in ("a", "b"):
        assert {(u, v) for u, x, v in s.edges if x == ag} == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert entails(s, s.pointed, heads)
    assert entails(s, s.pointed, Not(Believes("a", heads)))


def test_coin_knows_whether_cuts_edges():
    s, _ = coin_initial("initially C([a, b], B(a, heads) or B(a, not heads));")
    assert {(u, v) for u, x, v in s.edges if x == "a"} == {(0, 0), (1, 1)}
    assert {(u, v) for u, x, v in s.edges if x == "b"} == {(0, 0), (0, 1), (1, 0), (1, 1)}
    goal = And(And(Believes("a", heads), Not(Believes("b", heads))), Not(Believes("b", Not(heads))))
    assert entails(s, s.pointed, goal)


def test_all_known_gives_single_world():
    d = parse_domain("fluent p, q; agent a, b; initially C([a, b], p); initially C([a, b], not q);")
    s, report = build_initial_state(d, classify_initially(d))
    assert report.uk == 0 and report.candidate_count == 1
    assert s.worlds == (frozenset({"p"}),)
    assert s.edges == {(0, "a", 0), (0, "b", 0)}
    assert s.pointed == 0


def test_type_3_filters_worlds():
    d = parse_domain(
        "fluent p, q; agent a; initially p; initially not q;"
        "initially C([a], p or q);"
        "initially C([a], not B(a, p) and not B(a, not p));"
    )
    s, report = build_initial_state(d, classify_initially(d))
    assert report.candidate_count == 4
    assert report.good_worlds == 3
    assert frozenset() not in s.worlds


def test_no_good_world():
    d = parse_domain("fluent p; agent a; initially p; initially C([a], p and not p);")
    with pytest.raises(InitialStateError, match="no initial world"):
        build_initial_state(d, classify_initially(d))


def test_unsatisfiable_pointed():
    d = parse_domain("fluent p; agent a; initially not p; initially C([a], p);")
    with pytest.raises(InitialStateError, match="pointed"):
        build_initial_state(d, classify_initially(d))


def test_underdetermined_pointed():
    d = parse_domain("fluent p, q; agent a; initially p; initially C([a], B(a, q) or B(a, not q)); initially C([a], B(a, p) or B(a, not p));")
    with pytest.raises(InitialStateError, match="2 candidate worlds"):
        build_initial_state(d, classify_initially(d))


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=150)
@given(seeds)
def test_initial_state_satisfies_theory(seed):
    text, kinds = random_theory(random.Random(seed))
    d = parse_domain(text)
    s, report = build_initial_state(d, classify_initially(d))
    for phi in d.initially:
        assert brute_entails(s, s.pointed, phi)
    assert is_s5(s)
    assert s.size == report.good_worlds <= report.candidate_count == 2**report.uk
    assert len(set(s.worlds)) == s.size


@settings(max_examples=50)
@given(seeds)
def test_initial_state_is_deterministic(seed):
    text, _ = random_theory(random.Random(seed))
    first = build_initial_state(parse_domain(text))[0]
    second = build_initial_state(parse_domain(text))[0]
    assert first == second
    assert canonicalize(first).digest == canonicalize(second).digest
