"""Epistemic states as finite pointed graphs of worlds.

A state is the picture of a possibility: worlds carry fluent valuations,
agent-labelled edges give each agent's information state, and one world is
designated as the real one.  Two states denote the same possibility iff
their pointed graphs are bisimilar, which :func:`canonicalize` decides by
computing the bisimulation quotient with a deterministic numbering.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import EplanError
from .formula import And, Atom, Believes, Common, Const, Everyone, Formula, Not, Or

Edge = tuple[int, str, int]


@dataclass(frozen=True, eq=False)
class EState:
    """Pointed labelled graph; world ids are indices into ``worlds``.

    ``worlds[i]`` is the set of fluents true in world ``i``; every other
    fluent of the signature is false there.
    """

    fluents: tuple[str, ...]
    agents: tuple[str, ...]
    worlds: tuple[frozenset[str], ...]
    edges: frozenset[Edge]
    pointed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(frozenset(w) for w in self.worlds))
        object.__setattr__(self, "edges", frozenset(self.edges))
        n = len(self.worlds)
        if not 0 <= self.pointed < n:
            raise ValueError(f"pointed world {self.pointed} not in state of {n} worlds")
        fluent_set, agent_set = set(self.fluents), set(self.agents)
        for w in self.worlds:
            if not w <= fluent_set:
                raise ValueError(f"valuation mentions unknown fluents {sorted(w - fluent_set)}")
        for u, ag, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {ag}, {v}) leaves the state")
            if ag not in agent_set:
                raise ValueError(f"edge labelled with unknown agent {ag!r}")

    def __eq__(self, other):
        """Structural equality; use :func:`bisimilar` for state equality."""
        if not isinstance(other, EState):
            return NotImplemented
        return (
            self.fluents == other.fluents
            and self.agents == other.agents
            and self.worlds == other.worlds
            and self.edges == other.edges
            and self.pointed == other.pointed
        )

    def __hash__(self):
        return hash((self.fluents, self.agents, self.worlds, self.edges, self.pointed))

    @cached_property
    def _succ(self) -> dict[tuple[int, str], frozenset[int]]:
        table: dict[tuple[int, str], set[int]] = {}
        for u, ag, v in self.edges:
            table.setdefault((u, ag), set()).add(v)
        return {k: frozenset(v) for k, v in table.items()}

    def successors(self, world: int, agent: str) -> frozenset[int]:
        """The information state ``world(agent)``."""
        return self._succ.get((world, agent), frozenset())

    def holds(self, world: int, fluent: str) -> bool:
        return fluent in self.worlds[world]

    @property
    def size(self) -> int:
        return len(self.worlds)

    def reachable(self, start: int | None = None) -> list[int]:
        """Worlds reachable from ``start`` (default: pointed), in BFS order."""
        start = self.pointed if start is None else start
        seen = {start}
        order = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for ag in self.agents:
                for v in sorted(self.successors(u, ag)):
                    if v not in seen:
                        seen.add(v)
                        order.append(v)
                        queue.append(v)
        return order

    def prune(self) -> "EState":
        """Drop worlds unreachable from the pointed world and renumber."""
        keep = self.reachable()
        if len(keep) == self.size:
            return self
        return self.restrict(keep)

    def restrict(self, keep: Iterable[int]) -> "EState":
        keep = list(keep)
        index = {w: i for i, w in enumerate(keep)}
        edges = {(index[u], ag, index[v]) for u, ag, v in self.edges if u in index and v in index}
        return EState(
            self.fluents, self.agents, tuple(self.worlds[w] for w in keep), frozenset(edges), index[self.pointed]
        )

    def with_pointed(self, pointed: int) -> "EState":
        return EState(self.fluents, self.agents, self.worlds, self.edges, pointed)


def make_state(
    fluents: Iterable[str],
    agents: Iterable[str],
    worlds: Mapping[str, Iterable[str]],
    edges: Mapping[str, Mapping[str, Iterable[str]]],
    pointed: str,
) -> tuple[EState, dict[str, int]]:
    """Build a state from named worlds.

    ``edges[world][agent]`` lists the worlds that agent considers possible
    from ``world``. Returns the state and the name-to-id mapping.
    """
    names = list(worlds)
    index = {name: i for i, name in enumerate(names)}
    edge_set = {
        (index[u], ag, index[v]) for u, by_agent in edges.items() for ag, targets in by_agent.items() for v in targets
    }
    state = EState(tuple(fluents), tuple(agents), tuple(frozenset(worlds[n]) for n in names), frozenset(edge_set), index[pointed])
    return state, index


# -- entailment ---------------------------------------------------------------


def reaches(s: EState, w: int, agents: Iterable[str]) -> frozenset[int]:
    """Worlds reachable from ``w`` by a non-empty path labelled in ``agents``."""
    group = tuple(agents)
    if not group:
        raise ValueError("reaches needs a non-empty agent set")
    found: set[int] = set()
    frontier = [w]
    while frontier:
        u = frontier.pop()
        for ag in group:
            for v in s.successors(u, ag):
                if v not in found:
                    found.add(v)
                    frontier.append(v)
    return frozenset(found)


def satisfying_worlds(s: EState, f: Formula, _cache: dict | None = None) -> frozenset[int]:
    """All worlds of ``s`` at which ``f`` holds."""
    cache = {} if _cache is None else _cache
    if f in cache:
        return cache[f]
    every = frozenset(range(s.size))
    if isinstance(f, Const):
        out = every if f.value else frozenset()
    elif isinstance(f, Atom):
        out = frozenset(i for i, w in enumerate(s.worlds) if f.fluent in w)
    elif isinstance(f, Not):
        out = every - satisfying_worlds(s, f.operand, cache)
    elif isinstance(f, And):
        out = satisfying_worlds(s, f.left, cache) & satisfying_worlds(s, f.right, cache)
    elif isinstance(f, Or):
        out = satisfying_worlds(s, f.left, cache) | satisfying_worlds(s, f.right, cache)
    elif isinstance(f, Believes):
        sat = satisfying_worlds(s, f.operand, cache)
        out = frozenset(u for u in every if s.successors(u, f.agent) <= sat)
    elif isinstance(f, Everyone):
        sat = satisfying_worlds(s, f.operand, cache)
        out = frozenset(u for u in every if all(s.successors(u, ag) <= sat for ag in f.agents))
    elif isinstance(f, Common):
        sat = satisfying_worlds(s, f.operand, cache)
        out = frozenset(u for u in every if reaches(s, u, f.agents) <= sat)
    else:
        raise TypeError(f"not a formula: {f!r}")
    cache[f] = out
    return out


def entails(s: EState, w: int, f: Formula) -> bool:
    return w in satisfying_worlds(s, f)


def holds_at_pointed(s: EState, f: Formula) -> bool:
    return entails(s, s.pointed, f)


# -- frame conditions -------------------------------------------------------


def _relation(s: EState, agent: str) -> set[tuple[int, int]]:
    return {(u, v) for u, ag, v in s.edges if ag == agent}


def is_serial(s: EState, agent: str) -> bool:
    return all(s.successors(u, agent) for u in range(s.size))


def is_reflexive(s: EState, agent: str) -> bool:
    return all(u in s.successors(u, agent) for u in range(s.size))


def is_symmetric(s: EState, agent: str) -> bool:
    rel = _relation(s, agent)
    return all((v, u) in rel for u, v in rel)


def is_transitive(s: EState, agent: str) -> bool:
    return all(s.successors(v, agent) <= s.successors(u, agent) for u, v in _relation(s, agent))


def is_euclidean(s: EState, agent: str) -> bool:
    # u->v and u->x imply v->x
    return all(s.successors(u, agent) <= s.successors(v, agent) for u, v in _relation(s, agent))


def is_kd45(s: EState) -> bool:
    return all(is_serial(s, a) and is_transitive(s, a) and is_euclidean(s, a) for a in s.agents)


def is_s5(s: EState) -> bool:
    return all(is_reflexive(s, a) and is_transitive(s, a) and is_symmetric(s, a) for a in s.agents)


# -- bisimulation -------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    state: EState
    text: str
    digest: str

    def __eq__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.digest == other.digest and self.text == other.text

    def __hash__(self):
        return hash(self.digest)


def bisimulation_classes(s: EState) -> list[int]:
    """Coarsest bisimulation of ``s`` as a class rank per world.

    Ranks are isomorphism invariant: each refinement round sorts the worlds'
    signatures (own rank, labelled successor ranks) and numbers them in that
    order, starting from the sorted valuations.
    """
    valuation = [tuple(f in w for f in sorted(s.fluents)) for w in s.worlds]
    ranks = _rank(valuation)
    count = len(set(ranks))
    agents = sorted(s.agents)
    while True:
        signatures = [
            (ranks[u], tuple((ag, tuple(sorted({ranks[v] for v in s.successors(u, ag)}))) for ag in agents))
            for u in range(s.size)
        ]
        ranks = _rank(signatures)
        new_count = len(set(ranks))
        if new_count == count:
            return ranks
        count = new_count


def _rank(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def canonicalize(s: EState) -> CanonicalForm:
    """Bisimulation quotient of ``s`` with a deterministic world numbering.

    Blocks are numbered in BFS order from the pointed block, visiting
    successors by agent name and then by invariant class rank.
    """
    s = s.prune()
    ranks = bisimulation_classes(s)
    agents = sorted(s.agents)
    block_succ: dict[tuple[int, str], set[int]] = {}
    block_val: dict[int, frozenset[str]] = {}
    for u in range(s.size):
        block_val[ranks[u]] = s.worlds[u]
        for ag in agents:
            block_succ.setdefault((ranks[u], ag), set()).update(ranks[v] for v in s.successors(u, ag))
    start = ranks[s.pointed]
    number = {start: 0}
    queue = deque([start])
    while queue:
        b = queue.popleft()
        for ag in agents:
            for c in sorted(block_succ.get((b, ag), ())):
                if c not in number:
                    number[c] = len(number)
                    queue.append(c)
    worlds = [None] * len(number)
    for b, i in number.items():
        worlds[i] = block_val[b]
    edges = frozenset((number[b], ag, number[c]) for (b, ag), cs in block_succ.items() for c in cs)
    state = EState(s.fluents, s.agents, tuple(worlds), edges, 0)
    text = serialize(state)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=16).hexdigest()
    return CanonicalForm(state, text, digest)


def serialize(s: EState) -> str:
    fluents = sorted(s.fluents)
    lines = [
        f"fluents: {','.join(fluents)}",
        f"agents: {','.join(sorted(s.agents))}",
        f"pointed: {s.pointed}",
    ]
    body = [f"world {i}: {''.join('1' if f in w else '0' for f in fluents)}" for i, w in enumerate(s.worlds)]
    body += [f"edge {u} {ag} {v}" for u, ag, v in s.edges]
    return "\n".join(lines + sorted(body)) + "\n"


def bisimilar(s1: EState, s2: EState) -> bool:
    if set(s1.fluents) != set(s2.fluents) or set(s1.agents) != set(s2.agents):
        raise EplanError("cannot compare states over different fluents or agents")
    c1, c2 = canonicalize(s1), canonicalize(s2)
    return c1.digest == c2.digest and c1.text == c2.text
