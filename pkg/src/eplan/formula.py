"""Belief formula syntax trees.

Formulas are immutable, hashable values. Conjunction and disjunction are
binary; the parser builds them left-associatively, and :func:`to_text`
prints them back so that parsing the output yields the same tree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    fluent: str


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Believes:
    agent: str
    operand: "Formula"


@dataclass(frozen=True)
class Everyone:
    agents: tuple[str, ...]
    operand: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "agents", _agent_group(self.agents))


@dataclass(frozen=True)
class Common:
    agents: tuple[str, ...]
    operand: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "agents", _agent_group(self.agents))


Formula = Union[Const, Atom, Not, And, Or, Believes, Everyone, Common]

TRUE = Const(True)
FALSE = Const(False)

_MODAL = (Believes, Everyone, Common)


def _agent_group(agents: Iterable[str]) -> tuple[str, ...]:
    group = tuple(sorted(set(agents)))
    if not group:
        raise ValueError("group operators need a non-empty agent set")
    return group


def lit(fluent: str, positive: bool = True) -> Formula:
    return Atom(fluent) if positive else Not(Atom(fluent))


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TRUE if result is None else result


def disjoin(formulas: Iterable[Formula]) -> Formula:
    result = None
    for f in formulas:
        result = f if result is None else Or(result, f)
    return FALSE if result is None else result


def depth(f: Formula) -> int:
    """Maximum nesting of modal operators."""
    if isinstance(f, (Const, Atom)):
        return 0
    if isinstance(f, Not):
        return depth(f.operand)
    if isinstance(f, (And, Or)):
        return max(depth(f.left), depth(f.right))
    return 1 + depth(f.operand)


def is_fluent_formula(f: Formula) -> bool:
    return depth(f) == 0


def as_literal(f: Formula) -> tuple[str, bool] | None:
    """Return ``(fluent, polarity)`` if ``f`` is a possibly negated atom."""
    if isinstance(f, Atom):
        return f.fluent, True
    if isinstance(f, Not) and isinstance(f.operand, Atom):
        return f.operand.fluent, False
    return None


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (Not, Believes, Everyone, Common)):
        yield from subformulas(f.operand)
    elif isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def fluents_of(f: Formula) -> set[str]:
    return {g.fluent for g in subformulas(f) if isinstance(g, Atom)}


def agents_of(f: Formula) -> set[str]:
    found: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Believes):
            found.add(g.agent)
        elif isinstance(g, (Everyone, Common)):
            found.update(g.agents)
    return found


def evaluate_fluents(f: Formula, true_fluents) -> bool:
    """Evaluate a modal-free formula against a set of true fluents."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return f.fluent in true_fluents
    if isinstance(f, Not):
        return not evaluate_fluents(f.operand, true_fluents)
    if isinstance(f, And):
        return evaluate_fluents(f.left, true_fluents) and evaluate_fluents(f.right, true_fluents)
    if isinstance(f, Or):
        return evaluate_fluents(f.left, true_fluents) or evaluate_fluents(f.right, true_fluents)
    raise ValueError(f"modal operator in fluent formula: {to_text(f)}")


# Binding strength used when printing: or < and < not/atoms/modal calls.
_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def _prec(f: Formula) -> int:
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    return _PREC_UNARY


def to_text(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.fluent
    if isinstance(f, Not):
        inner = to_text(f.operand)
        if _prec(f.operand) < _PREC_UNARY:
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(f, (And, Or)):
        p = _prec(f)
        word = "and" if isinstance(f, And) else "or"
        left = to_text(f.left)
        if _prec(f.left) < p:
            left = f"({left})"
        right = to_text(f.right)
        # right operand of a left-associative operator needs parens at equal strength
        if _prec(f.right) <= p:
            right = f"({right})"
        return f"{left} {word} {right}"
    if isinstance(f, Believes):
        return f"B({f.agent}, {to_text(f.operand)})"
    op = "E" if isinstance(f, Everyone) else "C"
    return f"{op}([{', '.join(f.agents)}], {to_text(f.operand)})"
