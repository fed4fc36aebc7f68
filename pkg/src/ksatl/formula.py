"""Formula AST, parser and desugaring.

Core connectives: propositions, ~, &, and the three coalition-temporal
operators <<G>> X / <<G>> G (always) / <<G>> _ U _.  Everything else is
surface sugar that desugars into the core:

    a | b        ~(~a & ~b)
    a -> b       ~(a & ~b)
    <<G>> F p    <<G>> true U p
    K{i} p       <<i>> p U p
    D{G} p       <<G>> p U p
    hat-duals    ~K{i}~p, ~D{G}~p

true/false are primitive constants so the eventually-desugaring does not
depend on the model's proposition set.

Grammar (precedence low to high: ->, |, &, unary):

    formula  := or ('->' formula)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | 'K' '{' name '}' unary | 'D' '{' names '}' unary
              | '<<' names '>>' temporal | primary
    temporal := 'X' unary | 'G' unary | 'F' unary | unary 'U' unary
    primary  := 'true' | 'false' | name | '(' formula ')'

U is non-associative; nest it through parentheses.  Coalition lists are
canonicalized (sorted, deduplicated) so structural equality is syntactic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, ResolutionError
from .model import Model


class Formula:
    """Base class; core and sugar nodes are frozen dataclasses below."""


def _canonical(agents) -> tuple[str, ...]:
    names = tuple(sorted(set(agents)))
    if not names:
        raise ValueError("empty coalition")
    return names


# --- core ----------------------------------------------------------------------

@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class CoalitionNext(Formula):
    agents: tuple[str, ...]
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", _canonical(self.agents))


@dataclass(frozen=True)
class CoalitionAlways(Formula):
    agents: tuple[str, ...]
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", _canonical(self.agents))


@dataclass(frozen=True)
class CoalitionUntil(Formula):
    agents: tuple[str, ...]
    left: Formula
    right: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", _canonical(self.agents))


CORE_NODES = (Prop, Top, Bot, Not, And, CoalitionNext, CoalitionAlways, CoalitionUntil)


# --- sugar ---------------------------------------------------------------------

@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class CoalitionEventually(Formula):
    agents: tuple[str, ...]
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", _canonical(self.agents))


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class DistKnow(Formula):
    agents: tuple[str, ...]
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", _canonical(self.agents))


@dataclass(frozen=True)
class KnowDual(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class DistKnowDual(Formula):
    agents: tuple[str, ...]
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", _canonical(self.agents))


def desugar(f: Formula) -> Formula:
    """Eliminate all sugar; idempotent on core forms."""
    if isinstance(f, (Prop, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.sub))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, CoalitionNext):
        return CoalitionNext(f.agents, desugar(f.sub))
    if isinstance(f, CoalitionAlways):
        return CoalitionAlways(f.agents, desugar(f.sub))
    if isinstance(f, CoalitionUntil):
        return CoalitionUntil(f.agents, desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, CoalitionEventually):
        return CoalitionUntil(f.agents, Top(), desugar(f.sub))
    if isinstance(f, Know):
        sub = desugar(f.sub)
        return CoalitionUntil((f.agent,), sub, sub)
    if isinstance(f, DistKnow):
        sub = desugar(f.sub)
        return CoalitionUntil(f.agents, sub, sub)
    if isinstance(f, KnowDual):
        return Not(desugar(Know(f.agent, Not(f.sub))))
    if isinstance(f, DistKnowDual):
        return Not(desugar(DistKnow(f.agents, Not(f.sub))))
    raise TypeError(f"not a formula node: {f!r}")


def is_propositional(f: Formula) -> bool:
    if isinstance(f, (Prop, Top, Bot)):
        return True
    if isinstance(f, Not):
        return is_propositional(f.sub)
    if isinstance(f, And):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def temporal_depth(f: Formula) -> int:
    """Nesting budget a query needs: X costs 1, always/until cost at least 1."""
    if isinstance(f, (Prop, Top, Bot)):
        return 0
    if isinstance(f, Not):
        return temporal_depth(f.sub)
    if isinstance(f, And):
        return max(temporal_depth(f.left), temporal_depth(f.right))
    if isinstance(f, CoalitionNext):
        return 1 + temporal_depth(f.sub)
    if isinstance(f, CoalitionAlways):
        return 1 + temporal_depth(f.sub)
    if isinstance(f, CoalitionUntil):
        return 1 + max(temporal_depth(f.left), temporal_depth(f.right))
    raise TypeError(f"desugar before computing depth: {f!r}")


def resolve(f: Formula, m: Model) -> Formula:
    """Check every agent/proposition name against the model; returns f."""
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, Prop):
        if f.name not in m.propositions:
            raise ResolutionError(f"unknown proposition {f.name!r}")
        return f
    if isinstance(f, Not):
        resolve(f.sub, m)
        return f
    if isinstance(f, And):
        resolve(f.left, m)
        resolve(f.right, m)
        return f
    if isinstance(f, (CoalitionNext, CoalitionAlways)):
        for name in f.agents:
            if name not in m.agents:
                raise ResolutionError(f"unknown agent {name!r}")
        resolve(f.sub, m)
        return f
    if isinstance(f, CoalitionUntil):
        for name in f.agents:
            if name not in m.agents:
                raise ResolutionError(f"unknown agent {name!r}")
        resolve(f.left, m)
        resolve(f.right, m)
        return f
    raise TypeError(f"resolve expects a desugared formula, got {f!r}")


# --- printer -------------------------------------------------------------------

def to_text(f: Formula) -> str:
    """Emit grammar syntax; parse(to_text(f)) == f for core ASTs."""
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Not):
        return "~" + _unary_text(f.sub)
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, CoalitionNext):
        return f"<<{','.join(f.agents)}>> X {_unary_text(f.sub)}"
    if isinstance(f, CoalitionAlways):
        return f"<<{','.join(f.agents)}>> G {_unary_text(f.sub)}"
    if isinstance(f, CoalitionUntil):
        return (
            f"<<{','.join(f.agents)}>> {_unary_text(f.left)} U {_unary_text(f.right)}"
        )
    raise TypeError(f"cannot print sugar node {f!r}; desugar first")


def _unary_text(f: Formula) -> str:
    # operands of ~, X, G, U must parse as a single unary expression
    if isinstance(f, (Prop, Top, Bot, Not, And)):
        return to_text(f)  # And always prints parenthesized
    return "(" + to_text(f) + ")"


# --- parser --------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<lcoal><<)|(?P<rcoal>>>)|(?P<arrow>->)|(?P<punct>[(){},&|~])"
    r"|(?P<name>[A-Za-z0-9_']+))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        kind = match.lastgroup
        value = match.group(kind)
        if kind == "punct":
            kind = value
        elif kind == "lcoal":
            kind, value = "<<", "<<"
        elif kind == "rcoal":
            kind, value = ">>", ">>"
        elif kind == "arrow":
            kind, value = "->", "->"
        tokens.append((kind, value, match.start(kind if kind == "name" else 0)))
        pos = match.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        kind_, value, pos = self.next()
        if kind_ != kind:
            raise ParseError(f"expected {kind!r}, found {value or 'end of input'!r}", pos)
        return value

    def formula(self) -> Formula:
        left = self.or_()
        if self.peek()[0] == "->":
            self.next()
            return Implies(left, self.formula())
        return left

    def or_(self) -> Formula:
        left = self.and_()
        while self.peek()[0] == "|":
            self.next()
            left = Or(left, self.and_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "~":
            self.next()
            return Not(self.unary())
        if kind == "name" and value in ("K", "D") and self.tokens[self.i + 1][0] == "{":
            self.next()
            self.expect("{")
            names = self.names("}")
            self.expect("}")
            if value == "K":
                if len(names) != 1:
                    raise ParseError("K takes a single agent", pos)
                return Know(names[0], self.unary())
            return DistKnow(names, self.unary())
        if kind == "<<":
            self.next()
            names = self.names(">>")
            self.expect(">>")
            return self.temporal(names)
        return self.primary()

    def names(self, closing) -> tuple[str, ...]:
        kind, value, pos = self.peek()
        if kind == closing:
            raise ParseError("empty coalition", pos)
        names = [self.expect("name")]
        while self.peek()[0] == ",":
            self.next()
            names.append(self.expect("name"))
        return tuple(names)

    def temporal(self, agents) -> Formula:
        kind, value, pos = self.peek()
        if kind == "name" and value == "X":
            self.next()
            return CoalitionNext(agents, self.unary())
        if kind == "name" and value == "G":
            self.next()
            return CoalitionAlways(agents, self.unary())
        if kind == "name" and value == "F":
            self.next()
            return CoalitionEventually(agents, self.unary())
        left = self.unary()
        kind, value, pos = self.next()
        if kind != "name" or value != "U":
            raise ParseError(
                f"expected temporal operator after coalition, found {value or 'end of input'!r}",
                pos,
            )
        return CoalitionUntil(agents, left, self.unary())

    def primary(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "name":
            if value == "true":
                return Top()
            if value == "false":
                return Bot()
            return Prop(value)
        if kind == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    """Parse and desugar; raises ParseError with a position on bad input."""
    parser = _Parser(text)
    result = parser.formula()
    kind, value, pos = parser.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {value!r}", pos)
    return desugar(result)
