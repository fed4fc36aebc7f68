"""Model document loading, saving and the built-in suites."""

import random

import pytest

from ksatl.errors import LoadError
from ksatl.harness import GenParams, random_model
from ksatl.model_format import (
    BUILTIN_NAMES,
    builtin,
    canonical_partition,
    load_model,
    save_model,
)

MINIMAL = """
agents: a b
states: q0 q1
alphabet: x y
props:
  p: q1
actions:
  a @ q0: x y
  a @ q1: x
  b @ q0 q1: x
transitions:
  q0 (x,x) -> q0
  q0 (y,x) -> q1
  q1 (x,x) -> q1
indist:
"""


def test_load_minimal():
    m = load_model(MINIMAL)
    assert m.agents == ("a", "b")
    assert m.valuation == (frozenset({1}),)
    assert m.indist == ((0, 1), (0, 1))


def test_comments_and_section_order_ignored():
    shuffled = """
    # leading comment
    transitions:
      q0 (x,x) -> q0   # trailing comment
      q0 (y,x) -> q1
      q1 (x,x) -> q1
    states: q0 q1
    agents: a b
    alphabet: x y
    actions:
      a @ q0: x y
      a @ q1: x
      b @ q0 q1: x
    props:
      p: q1
    """
    assert load_model(shuffled) == load_model(MINIMAL)


def test_round_trip_builtins():
    for name in BUILTIN_NAMES:
        m = builtin(name).model
        assert load_model(save_model(m)) == m


def test_round_trip_random_models():
    rng = random.Random(99)
    for _ in range(40):
        m = random_model(
            GenParams(
                agent_count=rng.choice([1, 2, 3]),
                state_count=rng.randint(2, 5),
                indist_density=rng.random(),
                seed=rng.randrange(2**30),
            )
        )
        assert load_model(save_model(m)) == m


def test_canonical_partition():
    assert canonical_partition([5, 5, 2, 5, 2]) == (0, 0, 1, 0, 1)
    assert canonical_partition([]) == ()


@pytest.mark.parametrize(
    "mangle, fragment",
    [
        (lambda t: t.replace("states: q0 q1", "states: q0"), "unknown state"),
        (lambda t: t.replace("q0 (y,x) -> q1", ""), "transition not total"),
        (
            lambda t: t.replace(
                "q1 (x,x) -> q1", "q1 (x,x) -> q1\n  q1 (x,x) -> q0"
            ),
            "duplicate transition",
        ),
        (lambda t: t.replace("agents: a b", ""), "missing agents"),
        (lambda t: t.replace("(y,x)", "(y)"), "one component per agent"),
        (lambda t: t.replace("  a @ q1: x\n", ""), "no actions declared"),
    ],
)
def test_load_errors(mangle, fragment):
    with pytest.raises(LoadError) as err:
        load_model(mangle(MINIMAL))
    assert fragment in str(err.value)


def test_coherence_violation_rejected_at_load():
    # merging q0/q1 for agent `a` clashes with its differing menus
    text = MINIMAL.rstrip() + "\n  a: q0 q1\n"
    with pytest.raises(LoadError) as err:
        load_model(text)
    assert "coherence" in str(err.value)
    # the validate=False escape hatch loads it anyway
    m = load_model(text, validate=False)
    assert m.indist[0] == (0, 0)


def test_load_error_carries_line_number():
    bad = MINIMAL.replace("q0 (y,x) -> q1", "q0 (y,z) -> q1")
    with pytest.raises(LoadError) as err:
        load_model(bad)
    assert err.value.line is not None


def test_builtin_suites():
    assert BUILTIN_NAMES == ("M1", "M2", "M3", "M4")
    suite = builtin("M1")
    assert suite.model.agents == ("s", "g1", "g2")
    assert len(suite.checks) == 3
    assert load_model(suite.document) == suite.model
    with pytest.raises(KeyError):
        builtin("M9")
