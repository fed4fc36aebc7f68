"""Finite histories and the agent/coalition indistinguishability relations.

A history is a transition-consistent alternating sequence of states and
joint actions; its length is the number of actions.  Two histories are
equivalent for an agent when they have the same length, their states are
pairwise indistinguishable, and the agent's own action components agree at
every step.  Coalition equivalence intersects the members' relations:
a coalition pools what its members observed.

Equivalence classes range over all histories of the model of the same
length, starting from any state (the semantics has no designated initial
states).  They are computed by a synchronized forward walk; the naive
filter over all histories is kept as a test oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import IllegalActionError, ParseError
from .model import JointAction, Model, joint_actions, successor


@dataclass(frozen=True, order=True)
class History:
    states: tuple[int, ...]
    actions: tuple[JointAction, ...]

    def __post_init__(self):
        if len(self.states) != len(self.actions) + 1:
            raise ValueError("history needs exactly one more state than actions")

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def last(self) -> int:
        return self.states[-1]

    def prefix(self, length: int) -> "History":
        return History(self.states[: length + 1], self.actions[:length])


@dataclass(frozen=True)
class InfoClass:
    """A maximal set of same-length histories a coalition cannot tell apart."""

    coalition: frozenset[int]
    members: frozenset[History]

    @property
    def representative(self) -> History:
        return min(self.members)


def start(w: int) -> History:
    return History((w,), ())


def extend(m: Model, h: History, alpha: JointAction) -> History:
    """Append one joint action (and its outcome state) to h."""
    if alpha not in joint_actions(m, h.last):
        raise IllegalActionError(
            f"joint action {m.joint_action_name(alpha)} not available at {m.states[h.last]}"
        )
    return History(h.states + (successor(m, h.last, alpha),), h.actions + (alpha,))


def is_valid_history(m: Model, h: History) -> bool:
    for k, alpha in enumerate(h.actions):
        w = h.states[k]
        if alpha not in joint_actions(m, w) or successor(m, w, alpha) != h.states[k + 1]:
            return False
    return True


def all_histories(m: Model, length: int) -> Iterator[History]:
    """Every valid history of exactly the given length, from every start state."""
    frontier = [start(w) for w in range(len(m.states))]
    for _ in range(length):
        frontier = [
            extend(m, h, alpha) for h in frontier for alpha in joint_actions(m, h.last)
        ]
    yield from frontier


def equiv_agent(m: Model, h: History, h2: History, i: int) -> bool:
    """Def.-2 history equivalence for a single agent."""
    if len(h) != len(h2):
        return False
    blocks = m.indist[i]
    if any(blocks[w] != blocks[w2] for w, w2 in zip(h.states, h2.states)):
        return False
    return all(a[i] == a2[i] for a, a2 in zip(h.actions, h2.actions))


def coalition_blocks(m: Model, coalition: frozenset[int]) -> tuple[int, ...]:
    """Per-state block id of the intersection partition of the members' relations."""
    key = coalition
    cached = m._coalition_blocks.get(key)
    if cached is not None:
        return cached
    agents = sorted(coalition)
    signature = {}
    blocks = []
    for w in range(len(m.states)):
        sig = tuple(m.indist[i][w] for i in agents)
        blocks.append(signature.setdefault(sig, len(signature)))
    result = tuple(blocks)
    m._coalition_blocks[key] = result
    return result


def equiv_class(m: Model, h: History, coalition: frozenset[int]) -> frozenset[History]:
    """All histories of the model ≈-equivalent to h for every coalition member.

    Computed by a synchronized walk: start from every state the coalition
    cannot tell from h's start, then at each step admit exactly the joint
    actions that agree with h on the members' own components and land in a
    state the coalition cannot tell from h's next state.
    """
    if not coalition:
        raise ValueError("coalition must be nonempty")
    key = (coalition, h)
    cached = m._class_cache.get(key)
    if cached is not None:
        return cached
    blocks = coalition_blocks(m, coalition)
    agents = sorted(coalition)
    frontier = [start(w) for w in range(len(m.states)) if blocks[w] == blocks[h.states[0]]]
    for k, alpha_h in enumerate(h.actions):
        target_block = blocks[h.states[k + 1]]
        nxt = []
        for cand in frontier:
            for alpha in joint_actions(m, cand.last):
                if any(alpha[i] != alpha_h[i] for i in agents):
                    continue
                if blocks[successor(m, cand.last, alpha)] != target_block:
                    continue
                nxt.append(extend(m, cand, alpha))
        frontier = nxt
    result = frozenset(frontier)
    assert h in result
    m._class_cache[key] = result
    for member in result:
        m._class_cache[(coalition, member)] = result
    return result


def equiv_class_naive(m: Model, h: History, coalition: frozenset[int]) -> frozenset[History]:
    """Test oracle: filter all same-length histories via equiv_agent."""
    return frozenset(
        h2
        for h2 in all_histories(m, len(h))
        if all(equiv_agent(m, h, h2, i) for i in coalition)
    )


def info_class(m: Model, h: History, coalition: frozenset[int]) -> InfoClass:
    return InfoClass(coalition, equiv_class(m, h, coalition))


# --- textual history syntax: q0 -(L,n,l)-> q2 ---------------------------------

_STEP = re.compile(r"\s*-\(\s*([^)]*?)\s*\)->\s*")


def format_history(m: Model, h: History) -> str:
    parts = [m.states[h.states[0]]]
    for k, alpha in enumerate(h.actions):
        parts.append(f" -({','.join(m.actions[a] for a in alpha)})-> ")
        parts.append(m.states[h.states[k + 1]])
    return "".join(parts)


def parse_history(m: Model, text: str) -> History:
    """Parse `q0 -(L,n,l)-> q1 -(n,n,l)-> q2` against the model's name tables."""
    pieces = _STEP.split(text.strip())
    # split yields state, actions, state, actions, ... ending with a state
    if len(pieces) % 2 == 0:
        raise ParseError(f"malformed history {text!r}")
    try:
        states = [m.state_id(pieces[j]) for j in range(0, len(pieces), 2)]
        actions = []
        for j in range(1, len(pieces), 2):
            names = [s.strip() for s in pieces[j].split(",")]
            if len(names) != len(m.agents):
                raise ParseError(
                    f"joint action ({pieces[j]}) needs one action per agent "
                    f"({len(m.agents)} expected)"
                )
            actions.append(tuple(m.action_id(name) for name in names))
    except KeyError as exc:
        raise ParseError(str(exc.args[0])) from None
    h = History(tuple(states), tuple(actions))
    if not is_valid_history(m, h):
        raise ParseError(f"history {text!r} is not transition-consistent")
    return h
