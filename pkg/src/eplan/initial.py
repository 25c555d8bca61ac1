"""Construction of the initial state from a finitary S5-theory."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InitialStateError
from .estate import EState
from .formula import evaluate_fluents
from .language import Domain, InitialClassification, classify_initially


@dataclass(frozen=True)
class InitialBuildReport:
    uk: int
    candidate_count: int
    good_worlds: int
    pointed: int


def candidate_worlds(d: Domain, c: InitialClassification) -> list[frozenset[str]]:
    """One valuation per truth assignment to the initially-unknown fluents.

    Assignments are enumerated as binary counters over the unknown fluents
    in declaration order, which fixes the world order of the initial state.
    """
    fixed = {f for f, value in c.known.items() if value}
    return [
        frozenset(fixed | {f for f, bit in zip(c.unknown, bits) if bit})
        for bits in itertools.product((False, True), repeat=c.uk)
    ]


def build_initial_state(d: Domain, c: InitialClassification | None = None) -> tuple[EState, InitialBuildReport]:
    if c is None:
        c = classify_initially(d)
    candidates = candidate_worlds(d, c)
    constraints = [e.body for e in c.of_kind(3)]
    good = [w for w in candidates if all(evaluate_fluents(psi, w) for psi in constraints)]
    if not good:
        raise InitialStateError("no initial world satisfies the common-belief constraints")

    pointed = [i for i, w in enumerate(good) if all(evaluate_fluents(e.body, w) for e in c.of_kind(1))]
    if not pointed:
        raise InitialStateError("no initial world satisfies the pointed-world conditions")
    if len(pointed) > 1:
        raise InitialStateError(
            f"pointed-world conditions leave {len(pointed)} candidate worlds; add initial literals to fix one"
        )

    # Each agent starts from the complete graph; knowing-whether constraints cut
    # the edges between worlds that disagree on the known formula.
    known_by: dict[str, list] = {ag: [] for ag in d.agents}
    for e in c.of_kind(4):
        known_by[e.agent].append(e.body)
    edges = set()
    for ag in d.agents:
        for u, wu in enumerate(good):
            for v, wv in enumerate(good):
                if all(evaluate_fluents(psi, wu) == evaluate_fluents(psi, wv) for psi in known_by[ag]):
                    edges.add((u, ag, v))

    state = EState(d.fluents, d.agents, tuple(good), frozenset(edges), pointed[0])
    report = InitialBuildReport(c.uk, len(candidates), len(good), pointed[0])
    return state, report


def describe(report: InitialBuildReport) -> str:
    return (
        f"unknown fluents: {report.uk}, candidate worlds: {report.candidate_count}, "
        f"good worlds: {report.good_worlds}, pointed: w{report.pointed}"
    )

