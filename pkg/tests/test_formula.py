"""Parser, printer and desugaring."""

import random

import pytest

from ksatl.errors import ParseError, ResolutionError
from ksatl.formula import (
    And,
    Bot,
    CoalitionAlways,
    CoalitionEventually,
    CoalitionNext,
    CoalitionUntil,
    DistKnow,
    Know,
    Not,
    Or,
    Prop,
    Top,
    desugar,
    is_propositional,
    parse,
    resolve,
    temporal_depth,
    to_text,
)
from ksatl.model_format import builtin


def test_parse_basics():
    assert parse("p") == Prop("p")
    assert parse("true") == Top()
    assert parse("false") == Bot()
    assert parse("~p") == Not(Prop("p"))
    assert parse("p & q") == And(Prop("p"), Prop("q"))
    assert parse("<<g1,g2>> X win") == CoalitionNext(("g1", "g2"), Prop("win"))
    assert parse("<<1>> G p") == CoalitionAlways(("1",), Prop("p"))
    assert parse("<<1>> p U q") == CoalitionUntil(("1",), Prop("p"), Prop("q"))


def test_precedence():
    # -> binds loosest, then |, then &, then unary
    assert parse("a -> b | c & ~d") == parse("a -> (b | (c & (~d)))")
    # -> is right-associative
    assert parse("a -> b -> c") == parse("a -> (b -> c)")


def test_sugar_desugars():
    assert parse("a | b") == Not(And(Not(Prop("a")), Not(Prop("b"))))
    assert parse("a -> b") == Not(And(Prop("a"), Not(Prop("b"))))
    assert parse("<<1>> F p") == CoalitionUntil(("1",), Top(), Prop("p"))
    assert parse("K{1} p") == CoalitionUntil(("1",), Prop("p"), Prop("p"))
    assert parse("D{1,2} p") == CoalitionUntil(("1", "2"), Prop("p"), Prop("p"))
    assert parse("~K{1}~p") == Not(
        CoalitionUntil(("1",), Not(Prop("p")), Not(Prop("p")))
    )


def test_desugar_idempotent_and_total():
    samples = [
        Or(Prop("a"), Know("1", Prop("b"))),
        CoalitionEventually(("2", "1"), DistKnow(("1",), Prop("a"))),
        parse("<<1>> (K{1} p) U (K{1} q)"),
    ]
    for f in samples:
        once = desugar(f)
        assert desugar(once) == once


def test_coalitions_canonicalized():
    assert CoalitionNext(("b", "a", "b"), Prop("p")).agents == ("a", "b")
    assert parse("<<2,1>> X p") == parse("<<1,2>> X p")
    with pytest.raises(ValueError):
        CoalitionNext((), Prop("p"))
    with pytest.raises(ParseError):
        parse("<<>> X p")


def test_parse_errors_have_positions():
    for text, pos_at_least in (("p &", 3), ("<<1>> Y p", 6), ("(p", 2)):
        with pytest.raises(ParseError) as err:
            parse(text)
        assert err.value.pos is not None and err.value.pos >= pos_at_least - 1
    with pytest.raises(ParseError):
        parse("p q")  # trailing input
    with pytest.raises(ParseError):
        parse("K{1,2} p")  # K takes a single agent


def test_until_non_associative():
    with pytest.raises(ParseError):
        parse("<<1>> p U q U r")
    assert parse("<<1>> p U (<<1>> q U r)")


def _random_core(rng, names, depth):
    if depth == 0:
        return rng.choice([Prop(rng.choice(names)), Top(), Bot()])
    kind = rng.randrange(6)
    sub = lambda: _random_core(rng, names, depth - 1)
    coalition = tuple(rng.sample(["1", "2", "g1"], rng.randint(1, 2)))
    if kind == 0:
        return Not(sub())
    if kind == 1:
        return And(sub(), sub())
    if kind == 2:
        return CoalitionNext(coalition, sub())
    if kind == 3:
        return CoalitionAlways(coalition, sub())
    if kind == 4:
        return CoalitionUntil(coalition, sub(), sub())
    return Prop(rng.choice(names))


def test_print_parse_round_trip():
    rng = random.Random(451)
    for _ in range(300):
        f = _random_core(rng, ["p", "q", "win"], rng.randint(1, 4))
        assert parse(to_text(f)) == f


def test_is_propositional_and_depth():
    assert is_propositional(parse("~(p & q)"))
    assert not is_propositional(parse("<<1>> X p"))
    assert temporal_depth(parse("p | q")) == 0
    assert temporal_depth(parse("<<1>> X <<1>> G p")) == 2
    assert temporal_depth(parse("K{1} p")) == 1


def test_resolve_checks_names():
    m = builtin("M3").model
    resolve(parse("<<1,2>> p U q"), m)
    with pytest.raises(ResolutionError):
        resolve(parse("<<3>> X p"), m)
    with pytest.raises(ResolutionError):
        resolve(parse("<<1>> X bogus"), m)
