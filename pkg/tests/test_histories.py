"""History mechanics and the indistinguishability-class computation.

The synchronized-walk class computation is checked against the naive
filter-all-histories oracle on the built-in models and on seeded random
models.
"""

import random

import pytest

from ksatl.errors import IllegalActionError, ParseError
from ksatl.harness import GenParams, random_model
from ksatl.histories import (
    History,
    all_histories,
    coalition_blocks,
    equiv_agent,
    equiv_class,
    equiv_class_naive,
    extend,
    format_history,
    is_valid_history,
    parse_history,
    start,
)
from ksatl.model_format import builtin


def test_history_shape():
    h = History((0, 1), ((0, 0),))
    assert len(h) == 1
    assert h.last == 1
    assert h.prefix(0) == start(0)
    with pytest.raises(ValueError):
        History((0, 1), ())


def test_extend_and_validity():
    m = builtin("M1").model
    h = start(m.state_id("q0"))
    h2 = extend(m, h, tuple(m.action_id(a) for a in ("L", "n", "n")))
    assert m.states[h2.last] == "q1"
    assert is_valid_history(m, h2)
    with pytest.raises(IllegalActionError):
        extend(m, h, tuple(m.action_id(a) for a in ("n", "n", "n")))
    bogus = History((0, 3), (h2.actions[0],))
    assert not is_valid_history(m, bogus)


def test_all_histories_counts():
    m = builtin("M3").model
    lengths = {k: sum(1 for _ in all_histories(m, k)) for k in range(3)}
    assert lengths[0] == len(m.states)
    # q0 and the two middle states offer two joint actions, the sinks one
    assert lengths[1] == 2 + 2 + 2 + 1 + 1
    assert all(len(h) == 2 for h in all_histories(m, 2))


def test_history_text_round_trip():
    m = builtin("M1").model
    text = "q0 -(L,n,n)-> q1 -(n,n,l)-> q2"
    h = parse_history(m, text)
    assert format_history(m, h) == text
    assert parse_history(m, format_history(m, start(2))) == start(2)


def test_history_parse_errors():
    m = builtin("M1").model
    with pytest.raises(ParseError):
        parse_history(m, "q0 -(L,n)-> q1")  # wrong arity
    with pytest.raises(ParseError):
        parse_history(m, "q0 -(L,n,n)-> q2")  # not transition-consistent
    with pytest.raises(ParseError):
        parse_history(m, "qX")


def test_agent_equivalence_on_builtin():
    m = builtin("M3").model
    left = parse_history(m, "q0 -(n,a)-> q1")
    right = parse_history(m, "q0 -(n,b)-> q1p")
    a1, a2 = m.agent_id("1"), m.agent_id("2")
    # agent 1 idles and cannot tell q1 from q1p; agent 2 chose differently
    assert equiv_agent(m, left, right, a1)
    assert not equiv_agent(m, left, right, a2)
    assert equiv_class(m, left, frozenset({a1})) == {left, right}
    assert equiv_class(m, left, frozenset({a1, a2})) == {left}


def test_coalition_blocks_intersection():
    m = builtin("M1").model
    g2 = m.agent_id("g2")
    blocks = coalition_blocks(m, frozenset({g2}))
    assert blocks[m.state_id("q1")] == blocks[m.state_id("q1p")]
    # adding the observer splits the merged block
    full = coalition_blocks(m, frozenset({m.agent_id("g1"), g2}))
    assert full[m.state_id("q1")] != full[m.state_id("q1p")]


def _random_corpus(count, seed):
    rng = random.Random(seed)
    for k in range(count):
        yield random_model(
            GenParams(
                agent_count=rng.choice([2, 3]),
                state_count=rng.choice([3, 4]),
                indist_density=rng.choice([0.0, 0.3, 0.6]),
                seed=rng.randrange(2**30),
            )
        )


def test_sync_walk_matches_naive_oracle():
    models = [builtin(n).model for n in ("M1", "M3")]
    models.extend(_random_corpus(12, seed=2024))
    for m in models:
        rng = random.Random(len(m.states))
        coalitions = [frozenset({i}) for i in range(len(m.agents))]
        coalitions.append(frozenset(range(len(m.agents))))
        for length in (0, 1, 2):
            points = list(all_histories(m, length))
            sample = points if len(points) <= 12 else rng.sample(points, 12)
            for h in sample:
                for coalition in coalitions:
                    assert equiv_class(m, h, coalition) == equiv_class_naive(
                        m, h, coalition
                    )


def test_classes_partition_and_refine():
    for m in _random_corpus(6, seed=77):
        singles = [frozenset({i}) for i in range(len(m.agents))]
        grand = frozenset(range(len(m.agents)))
        for h in all_histories(m, 2):
            cls = equiv_class(m, h, grand)
            assert h in cls
            # the grand coalition's class refines every member's class
            for single in singles:
                assert cls <= equiv_class(m, h, single)
        # same-length classes partition: equal or disjoint
        classes = {equiv_class(m, h, grand) for h in all_histories(m, 1)}
        seen = set()
        for cls in classes:
            assert not (cls & seen)
            seen |= cls


def test_empty_coalition_rejected():
    m = builtin("M1").model
    with pytest.raises(ValueError):
        equiv_class(m, start(0), frozenset())
