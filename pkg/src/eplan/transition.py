"""Transition function for ontic, sensing and announcement actions."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import TransitionError
from .estate import CanonicalForm, EState, canonicalize, entails, satisfying_worlds
from .formula import as_literal, to_text
from .language import ActionInstance, ActionType

__all__ = [
    "ActionInstance",
    "ObservabilityPartition",
    "UntruthfulAnnouncementWarning",
    "apply",
    "apply_canonical",
    "apply_epistemic",
    "apply_ontic",
    "is_executable",
    "resolve_observability",
]


class UntruthfulAnnouncementWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ObservabilityPartition:
    fully: frozenset[str]
    partial: frozenset[str]
    oblivious: frozenset[str]


def resolve_observability(s: EState, a: ActionInstance) -> ObservabilityPartition:
    fully, partial = set(), set()
    for obs in a.observers:
        if entails(s, s.pointed, obs.condition):
            (fully if obs.fully else partial).add(obs.agent)
    both = fully & partial
    if both:
        raise TransitionError(
            f"{a.name}: agents {sorted(both)} are both fully and partially observant"
        )
    oblivious = set(s.agents) - fully - partial
    return ObservabilityPartition(frozenset(fully), frozenset(partial), frozenset(oblivious))


def is_executable(s: EState, a: ActionInstance) -> bool:
    return entails(s, s.pointed, a.executability)


def _closure(s: EState, starts, labels) -> set[int]:
    """Worlds reachable from ``starts`` (inclusive) along edges labelled in ``labels``."""
    seen = set(starts)
    stack = list(starts)
    while stack:
        u = stack.pop()
        for ag in labels:
            for v in s.successors(u, ag):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return seen


def _assemble(
    s: EState,
    copies: list[int],
    valuations: dict[int, frozenset[str]],
    copied_edge,
    o: ObservabilityPartition,
) -> CanonicalForm:
    """Old state plus primed copies; copy edges chosen by ``copied_edge``.

    Oblivious agents keep pointing from a copy into the old worlds, which
    stay in place until pruning drops the unreachable ones.
    """
    n = s.size
    prime = {w: n + k for k, w in enumerate(copies)}
    worlds = list(s.worlds) + [valuations[w] for w in copies]
    edges = set(s.edges)
    for w1 in copies:
        for ag in s.agents:
            for w2 in s.successors(w1, ag):
                if ag in o.oblivious:
                    edges.add((prime[w1], ag, w2))
                elif w2 in prime and copied_edge(w1, ag, w2):
                    edges.add((prime[w1], ag, prime[w2]))
    result = EState(s.fluents, s.agents, tuple(worlds), frozenset(edges), prime[s.pointed])
    return canonicalize(result)


def _ontic(s: EState, a: ActionInstance, o: ObservabilityPartition) -> CanonicalForm:
    if o.partial:
        raise TransitionError(f"{a.name}: ontic actions admit no partially observant agents")
    updated = _closure(s, [s.pointed], sorted(o.fully))
    copies = sorted(updated)
    valuations = {}
    for w in copies:
        true = set(s.worlds[w])
        imposed: dict[str, bool] = {}
        for eff in a.effects:
            if not entails(s, w, eff.condition):
                continue
            fluent, value = as_literal(eff.payload)
            if imposed.get(fluent, value) != value:
                raise TransitionError(f"{a.name}: conflicting effects on fluent {fluent!r}")
            imposed[fluent] = value
        for fluent, value in imposed.items():
            (true.add if value else true.discard)(fluent)
        valuations[w] = frozenset(true)
    return _assemble(s, copies, valuations, lambda w1, ag, w2: True, o)


def _consistency(s: EState, a: ActionInstance) -> set[int]:
    """Worlds consistent with the effects that are active at the pointed world."""
    active = [eff for eff in a.effects if entails(s, s.pointed, eff.condition)]
    consistent = set(range(s.size))
    if a.type is ActionType.SENSING:
        if not active:
            raise TransitionError(f"{a.name}: no sensed fluent is active in the current state")
        for eff in active:
            fluent = eff.payload.fluent
            value = s.holds(s.pointed, fluent)
            consistent &= {w for w in range(s.size) if s.holds(w, fluent) == value}
    else:
        for eff in active:
            sat = satisfying_worlds(s, eff.payload)
            if s.pointed not in sat:
                warnings.warn(
                    f"{a.name}: announced formula {to_text(eff.payload)} is false in the pointed world",
                    UntruthfulAnnouncementWarning,
                    stacklevel=4,
                )
            consistent &= sat
    return consistent


def _epistemic(s: EState, a: ActionInstance, o: ObservabilityPartition) -> CanonicalForm:
    consistent = _consistency(s, a)
    fully, partial = sorted(o.fully), sorted(o.partial)
    on_fully_path = _closure(s, [s.pointed], fully)
    # paths whose first edge is partially observant and that avoid oblivious labels
    first_steps = {v for ag in partial for v in s.successors(s.pointed, ag)}
    via_partial = _closure(s, first_steps, fully + partial) if first_steps else set()
    updated = {s.pointed} | (on_fully_path & consistent) | via_partial
    copies = sorted(updated)

    def copied_edge(w1, ag, w2):
        if ag in o.fully:
            return (w1 in consistent) == (w2 in consistent)
        return True

    return _assemble(s, copies, {w: s.worlds[w] for w in copies}, copied_edge, o)


def apply_ontic(s: EState, a: ActionInstance, o: ObservabilityPartition) -> EState:
    return _ontic(s, a, o).state


def apply_epistemic(s: EState, a: ActionInstance, o: ObservabilityPartition) -> EState:
    return _epistemic(s, a, o).state


def apply_canonical(s: EState, a: ActionInstance) -> CanonicalForm | None:
    """Successor in canonical form, or ``None`` if ``a`` is not executable."""
    if not is_executable(s, a):
        return None
    o = resolve_observability(s, a)
    if a.type is ActionType.ONTIC:
        return _ontic(s, a, o)
    return _epistemic(s, a, o)


def apply(s: EState, a: ActionInstance) -> EState | None:
    result = apply_canonical(s, a)
    return None if result is None else result.state
