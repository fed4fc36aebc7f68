"""Imperfect-information concurrent game structures.

A model holds agents, states, a global action alphabet, per-(agent, state)
action menus, a deterministic joint-action transition table and one
indistinguishability partition per agent.  All names are interned to dense
integer ids; reports translate back to names.

Models are treated as immutable after construction: evaluation code only
reads them, so they are safe to share across parallel workers.  The two
cache dicts are filled lazily by the histories module and are excluded from
equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import IllegalActionError

# One action id per agent, in agent order.
JointAction = tuple[int, ...]


@dataclass
class Model:
    agents: tuple[str, ...]
    states: tuple[str, ...]
    propositions: tuple[str, ...]
    actions: tuple[str, ...]
    # per proposition id: the set of state ids where it holds
    valuation: tuple[frozenset[int], ...]
    # available[agent][state] -> sorted tuple of action ids
    available: tuple[tuple[tuple[int, ...], ...], ...]
    # (state, joint action) -> state
    transition: dict[tuple[int, JointAction], int]
    # indist[agent][state] -> partition block id (equivalence by construction)
    indist: tuple[tuple[int, ...], ...]

    # lazy caches, see histories.py
    _coalition_blocks: dict = field(default_factory=dict, repr=False, compare=False)
    _class_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def agent_id(self, name: str) -> int:
        try:
            return self.agents.index(name)
        except ValueError:
            raise ResolutionLookupError(f"unknown agent {name!r}") from None

    def state_id(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise ResolutionLookupError(f"unknown state {name!r}") from None

    def prop_id(self, name: str) -> int:
        try:
            return self.propositions.index(name)
        except ValueError:
            raise ResolutionLookupError(f"unknown proposition {name!r}") from None

    def action_id(self, name: str) -> int:
        try:
            return self.actions.index(name)
        except ValueError:
            raise ResolutionLookupError(f"unknown action {name!r}") from None

    def joint_action_name(self, alpha: JointAction) -> str:
        return "(" + ",".join(self.actions[a] for a in alpha) + ")"


# Distinct from formula resolution errors; model lookups raise this.
class ResolutionLookupError(KeyError):
    pass


def joint_actions(m: Model, w: int) -> list[JointAction]:
    """All joint actions available at state w, in lexicographic action order."""
    if not 0 <= w < len(m.states):
        raise IndexError(f"state id {w} out of range")
    return list(itertools.product(*(m.available[i][w] for i in range(len(m.agents)))))


def successor(m: Model, w: int, alpha: JointAction) -> int:
    """The unique outcome state of alpha at w."""
    try:
        return m.transition[(w, alpha)]
    except KeyError:
        raise IllegalActionError(
            f"joint action {m.joint_action_name(alpha)} not available at {m.states[w]}"
        ) from None


def props_at(m: Model, w: int) -> set[str]:
    """Names of the propositions holding at w."""
    return {m.propositions[p] for p, states in enumerate(m.valuation) if w in states}


def validate_model(m: Model) -> list[str]:
    """Check the structural invariants; returns a list of violations (empty = ok).

    Violations are data, not exceptions: the loader reports them verbatim.
    """
    violations = []
    n_agents, n_states = len(m.agents), len(m.states)
    if n_agents == 0:
        violations.append("agent set is empty")
    if n_states == 0:
        violations.append("state set is empty")
    if len(m.actions) == 0:
        violations.append("action alphabet is empty")

    if len(m.available) != n_agents or any(len(row) != n_states for row in m.available):
        violations.append("availability table has wrong shape")
        return violations
    if len(m.indist) != n_agents or any(len(row) != n_states for row in m.indist):
        violations.append("indistinguishability table has wrong shape")
        return violations

    for i in range(n_agents):
        for w in range(n_states):
            menu = m.available[i][w]
            if not menu:
                violations.append(
                    f"no action available to {m.agents[i]} at {m.states[w]}"
                )
            for a in menu:
                if not 0 <= a < len(m.actions):
                    violations.append(
                        f"action id {a} out of range for {m.agents[i]} at {m.states[w]}"
                    )

    for states in m.valuation:
        for w in states:
            if not 0 <= w < n_states:
                violations.append(f"valuation mentions state id {w} out of range")

    # transition totality on exactly the legal joint actions
    expected = set()
    for w in range(n_states):
        for alpha in joint_actions(m, w):
            expected.add((w, alpha))
            if (w, alpha) not in m.transition:
                violations.append(
                    f"transition not total at ({m.states[w]}, {m.joint_action_name(alpha)})"
                )
    for (w, alpha) in m.transition:
        if (w, alpha) not in expected:
            violations.append(
                f"transition defined for illegal pair ({m.states[w]}, {m.joint_action_name(alpha)})"
            )
    for target in m.transition.values():
        if not 0 <= target < n_states:
            violations.append(f"transition target {target} out of range")

    # action-knowledge coherence: same menu across each indistinguishability block
    for i in range(n_agents):
        for w, w2 in itertools.combinations(range(n_states), 2):
            if m.indist[i][w] == m.indist[i][w2] and m.available[i][w] != m.available[i][w2]:
                violations.append(
                    f"action-knowledge coherence: {m.agents[i]} cannot distinguish "
                    f"{m.states[w]} and {m.states[w2]} but has different menus"
                )
    return violations
