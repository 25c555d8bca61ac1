"""Domain description language: lexer, parser, printer and static checks.

A domain file is a sequence of semicolon-terminated declarations and
statements::

    fluent heads, looked;
    agent a, b;
    action peek;
    executable peek if not B(a, heads) and not B(a, not heads);
    peek determines heads;
    a observes peek;
    b aware_of peek if looked;
    initially heads;
    initially C([a, b], not B(a, heads) and not B(a, not heads));
    goal B(a, heads);

Line comments start with ``%`` or ``#``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from .errors import ClassificationError, DomainError, ParseError
from .formula import (
    TRUE,
    And,
    Atom,
    Believes,
    Common,
    Const,
    Everyone,
    Formula,
    Not,
    Or,
    agents_of,
    as_literal,
    conjoin,
    disjoin,
    fluents_of,
    is_fluent_formula,
    to_text,
)

KEYWORDS = frozenset(
    "fluent agent action executable if causes determines announces "
    "observes aware_of initially goal not and or true false".split()
)

EFFECT_KINDS = ("causes", "determines", "announces")
OBSERVE_KINDS = ("observes", "aware_of")


class ActionType(str, Enum):
    ONTIC = "ontic"
    SENSING = "sensing"
    ANNOUNCEMENT = "announcement"


_TYPE_OF_EFFECT = {
    "causes": ActionType.ONTIC,
    "determines": ActionType.SENSING,
    "announces": ActionType.ANNOUNCEMENT,
}


@dataclass(frozen=True)
class Statement:
    """One statement of a domain file.

    ``payload`` depends on ``kind``: a literal formula for ``causes``, a
    fluent name for ``determines``, a fluent formula for ``announces``, an
    agent name for ``observes``/``aware_of``, the formula itself for
    ``initially``/``goal`` and ``None`` for ``executable``.
    """

    kind: str
    action: str | None = None
    payload: Formula | str | None = None
    condition: Formula = TRUE


@dataclass(frozen=True)
class ActionDecl:
    name: str
    type: ActionType
    statements: tuple[Statement, ...] = ()


@dataclass(frozen=True)
class Domain:
    fluents: tuple[str, ...]
    agents: tuple[str, ...]
    actions: dict[str, ActionDecl]
    initially: tuple[Formula, ...] = ()
    goals: tuple[Formula, ...] = ()

    @property
    def goal(self) -> Formula:
        return conjoin(self.goals)

    @property
    def initial_condition(self) -> Formula:
        return conjoin(self.initially)


# -- lexing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>(?:%|\#)[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[()\[\],;])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "keyword", "punct" or "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            word = m.group()
            tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, line, pos - line_start + 1))
        elif kind == "punct":
            tokens.append(Token("punct", m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parsing --------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("keyword", "punct") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}")
        return self.advance().text

    def idlist(self, what: str) -> list[str]:
        names = [self.ident(what)]
        while self.at(","):
            self.advance()
            names.append(self.ident(what))
        return names

    # formulas

    def formula(self) -> Formula:
        f = self.conjunction()
        while self.at("or"):
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.at("and"):
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("not"):
            self.advance()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("true") or self.at("false"):
            self.advance()
            return Const(tok.text == "true")
        if tok.kind != "ident":
            raise self.error("expected a formula")
        nxt = self.peek()
        if tok.text in ("B", "E", "C") and nxt.kind == "punct" and nxt.text == "(":
            self.advance()
            self.advance()
            if tok.text == "B":
                agent = self.ident("agent name")
                self.expect(",")
                f = Believes(agent, self.formula())
            else:
                self.expect("[")
                group = self.idlist("agent name")
                self.expect("]")
                self.expect(",")
                cls = Everyone if tok.text == "E" else Common
                f = cls(tuple(group), self.formula())
            self.expect(")")
            return f
        self.advance()
        return Atom(tok.text)

    def fluent_formula(self) -> Formula:
        start = self.tok
        f = self.formula()
        if not is_fluent_formula(f):
            raise ParseError("expected a fluent formula without modal operators", start.line, start.column)
        return f

    def literal(self) -> Formula:
        start = self.tok
        f = self.unary()
        if as_literal(f) is None:
            raise ParseError("expected a fluent literal", start.line, start.column)
        return f

    def condition(self) -> Formula:
        if self.at("if"):
            self.advance()
            return self.formula()
        return TRUE

    # statements

    def program(self) -> Iterator[tuple[str, object, Token]]:
        while self.tok.kind != "eof":
            start = self.tok
            yield self.item(), start
            self.expect(";")

    def item(self):
        tok = self.tok
        if tok.kind == "keyword":
            if tok.text in ("fluent", "agent", "action"):
                self.advance()
                return ("decl", tok.text, self.idlist(f"{tok.text} name"))
            if tok.text == "executable":
                self.advance()
                action = self.ident("action name")
                self.expect("if")
                return Statement("executable", action, None, self.formula())
            if tok.text in ("initially", "goal"):
                self.advance()
                return Statement(tok.text, None, self.formula())
            raise self.error("expected a declaration or statement")
        if tok.kind != "ident":
            raise self.error("expected a declaration or statement")
        subject = self.advance().text
        verb = self.tok
        if verb.kind != "keyword" or verb.text not in EFFECT_KINDS + OBSERVE_KINDS:
            raise self.error("expected one of causes/determines/announces/observes/aware_of")
        self.advance()
        if verb.text == "causes":
            payload = self.literal()
            return Statement("causes", subject, payload, self.condition())
        if verb.text == "determines":
            payload = self.ident("fluent name")
            return Statement("determines", subject, payload, self.condition())
        if verb.text == "announces":
            payload = self.fluent_formula()
            return Statement("announces", subject, payload, self.condition())
        action = self.ident("action name")
        return Statement(verb.text, action, subject, self.condition())


def parse_domain(text: str) -> Domain:
    """Parse and validate a domain description."""
    parser = _Parser(text)
    declared: dict[str, list[str]] = {"fluent": [], "agent": [], "action": []}
    statements: list[tuple[Statement, Token]] = []
    for item, start in parser.program():
        if isinstance(item, Statement):
            statements.append((item, start))
            continue
        _, what, names = item
        for name in names:
            for other, seen in declared.items():
                if name in seen:
                    raise DomainError(f"line {start.line}: {name!r} already declared as {other}")
            declared[what].append(name)
    return _build_domain(declared, statements)


def _build_domain(declared: dict[str, list[str]], statements: list[tuple[Statement, Token]]) -> Domain:
    fluents, agents, actions = declared["fluent"], declared["agent"], declared["action"]
    if not fluents:
        raise DomainError("domain declares no fluents")
    if not agents:
        raise DomainError("domain declares no agents")
    fluent_set, agent_set, action_set = set(fluents), set(agents), set(actions)

    def check_formula(f: Formula, where: str):
        for name in sorted(fluents_of(f) - fluent_set):
            raise DomainError(f"{where}: undeclared fluent {name!r}")
        for name in sorted(agents_of(f) - agent_set):
            raise DomainError(f"{where}: undeclared agent {name!r}")

    per_action: dict[str, list[Statement]] = {a: [] for a in actions}
    initially, goals = [], []
    for st, start in statements:
        where = f"line {start.line}"
        check_formula(st.condition, where)
        if st.kind == "initially":
            check_formula(st.payload, where)
            initially.append(st.payload)
            continue
        if st.kind == "goal":
            check_formula(st.payload, where)
            goals.append(st.payload)
            continue
        if st.action not in action_set:
            raise DomainError(f"{where}: undeclared action {st.action!r}")
        if st.kind in ("causes", "announces"):
            check_formula(st.payload, where)
        elif st.kind == "determines" and st.payload not in fluent_set:
            raise DomainError(f"{where}: undeclared fluent {st.payload!r}")
        elif st.kind in OBSERVE_KINDS and st.payload not in agent_set:
            raise DomainError(f"{where}: undeclared agent {st.payload!r}")
        per_action[st.action].append(st)

    decls = {}
    for name in actions:
        kinds = {st.kind for st in per_action[name] if st.kind in EFFECT_KINDS}
        if len(kinds) > 1:
            raise DomainError(f"action {name!r} mixes effect kinds: {', '.join(sorted(kinds))}")
        # an action without effects only reshapes beliefs; treat it as ontic
        atype = _TYPE_OF_EFFECT[kinds.pop()] if kinds else ActionType.ONTIC
        decls[name] = ActionDecl(name, atype, tuple(per_action[name]))
    return Domain(tuple(fluents), tuple(agents), decls, tuple(initially), tuple(goals))


def format_statement(st: Statement) -> str:
    cond = "" if st.condition == TRUE else f" if {to_text(st.condition)}"
    if st.kind == "executable":
        return f"executable {st.action} if {to_text(st.condition)};"
    if st.kind in ("initially", "goal"):
        return f"{st.kind} {to_text(st.payload)};"
    if st.kind in OBSERVE_KINDS:
        return f"{st.payload} {st.kind} {st.action}{cond};"
    payload = st.payload if isinstance(st.payload, str) else to_text(st.payload)
    return f"{st.action} {st.kind} {payload}{cond};"


def format_domain(d: Domain) -> str:
    """Print a domain in the concrete syntax accepted by :func:`parse_domain`."""
    lines = [f"fluent {', '.join(d.fluents)};", f"agent {', '.join(d.agents)};"]
    if d.actions:
        lines.append(f"action {', '.join(d.actions)};")
    for decl in d.actions.values():
        lines.extend(format_statement(st) for st in decl.statements)
    lines.extend(format_statement(Statement("initially", None, f)) for f in d.initially)
    lines.extend(format_statement(Statement("goal", None, f)) for f in d.goals)
    return "\n".join(lines) + "\n"


# -- finitary S5 classification ---------------------------------------------


@dataclass(frozen=True)
class InitialFormula:
    """An initially-formula tagged with its shape.

    kind 1: fluent formula (true at the pointed world)
    kind 2: C(literal)
    kind 3: C(psi), psi a non-literal fluent formula
    kind 4: C(B_i psi or B_i not psi)
    kind 5: C(not B_i psi and not B_i not psi)
    """

    formula: Formula
    kind: int
    body: Formula
    agent: str | None = None


@dataclass(frozen=True)
class InitialClassification:
    entries: tuple[InitialFormula, ...]
    known: dict[str, bool]
    unknown: tuple[str, ...]

    @property
    def uk(self) -> int:
        return len(self.unknown)

    def of_kind(self, kind: int) -> list[InitialFormula]:
        return [e for e in self.entries if e.kind == kind]


def _belief_pair(left: Formula, right: Formula) -> tuple[str, Formula] | None:
    """Match ``B_i psi`` / ``B_i not psi`` in either order."""
    if not (isinstance(left, Believes) and isinstance(right, Believes)):
        return None
    if left.agent != right.agent:
        return None
    a, b = left.operand, right.operand
    if not (is_fluent_formula(a) and is_fluent_formula(b)):
        return None
    if b == Not(a):
        return left.agent, a
    if a == Not(b):
        return left.agent, b
    return None


def classify_formula(f: Formula, agents: Iterable[str]) -> InitialFormula:
    everyone = tuple(sorted(agents))
    if is_fluent_formula(f):
        return InitialFormula(f, 1, f)
    bad = ClassificationError(f"not a finitary S5 formula: {to_text(f)}")
    if not isinstance(f, Common):
        raise bad
    if f.agents != everyone:
        raise ClassificationError(
            f"common belief in initial conditions must range over all agents: {to_text(f)}"
        )
    body = f.operand
    if is_fluent_formula(body):
        return InitialFormula(f, 2 if as_literal(body) else 3, body)
    if isinstance(body, Or):
        pair = _belief_pair(body.left, body.right)
        if pair:
            return InitialFormula(f, 4, pair[1], pair[0])
    if isinstance(body, And) and isinstance(body.left, Not) and isinstance(body.right, Not):
        pair = _belief_pair(body.left.operand, body.right.operand)
        if pair:
            return InitialFormula(f, 5, pair[1], pair[0])
    raise bad


def classify_initially(d: Domain, require_coverage: bool = True) -> InitialClassification:
    """Tag each initially-formula with its finitary S5 shape.

    With ``require_coverage`` every fluent must occur in some formula of
    kind 2 to 5, as finitary S5-theories demand.
    """
    entries = tuple(classify_formula(f, d.agents) for f in d.initially)
    known: dict[str, bool] = {}
    for e in entries:
        if e.kind != 2:
            continue
        fluent, value = as_literal(e.body)
        if known.get(fluent, value) != value:
            raise ClassificationError(f"contradictory initial values for fluent {fluent!r}")
        known[fluent] = value
    if require_coverage:
        covered = set().union(*(fluents_of(e.body) for e in entries if e.kind >= 2))
        missing = [f for f in d.fluents if f not in covered]
        if missing:
            raise ClassificationError(
                f"fluents not covered by any common-belief initial condition: {', '.join(missing)}"
            )
    unknown = tuple(f for f in d.fluents if f not in known)
    return InitialClassification(entries, known, unknown)


# -- action instances -------------------------------------------------------


@dataclass(frozen=True)
class Effect:
    """An effect payload gated by a condition.

    The payload is a literal for ontic actions, the sensed fluent as an
    :class:`Atom` for sensing actions and a fluent formula for announcements.
    """

    payload: Formula
    condition: Formula = TRUE


@dataclass(frozen=True)
class Observer:
    agent: str
    fully: bool
    condition: Formula = TRUE


@dataclass(frozen=True)
class ActionInstance:
    name: str
    type: ActionType
    executability: Formula = TRUE
    effects: tuple[Effect, ...] = ()
    observers: tuple[Observer, ...] = field(default=())


def ground_action_instances(d: Domain) -> list[ActionInstance]:
    instances = []
    for decl in d.actions.values():
        executable = [st.condition for st in decl.statements if st.kind == "executable"]
        effects = []
        for st in decl.statements:
            if st.kind in EFFECT_KINDS:
                payload = Atom(st.payload) if st.kind == "determines" else st.payload
                effects.append(Effect(payload, st.condition))
        # several statements for the same (agent, class) pair are alternatives
        conditions: dict[tuple[str, bool], list[Formula]] = {}
        for st in decl.statements:
            if st.kind in OBSERVE_KINDS:
                conditions.setdefault((st.payload, st.kind == "observes"), []).append(st.condition)
        observers = tuple(
            Observer(agent, fully, TRUE if TRUE in conds else disjoin(conds))
            for (agent, fully), conds in conditions.items()
        )
        instances.append(
            ActionInstance(decl.name, decl.type, conjoin(executable), tuple(effects), observers)
        )
    return instances
