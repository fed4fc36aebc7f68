"""Textual model documents, loader/saver and the built-in models.

Document layout (UTF-8, `#` line comments, sections in any order):

    agents: s g1 g2
    states: q0 q1 q1p q2 q3
    alphabet: L R n l r
    props:
      win: q2
    actions:
      s @ q0: L R
      g2 @ q1 q1p: l r
    transitions:
      q0 (L,n,n) -> q1
    indist:
      g2: q1 q1p

`alphabet:` fixes the global action order so documents round-trip exactly.
`indist:` lists one block of mutually indistinguishable states per line;
unlisted pairs are distinguishable and singleton blocks are implied.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

from .errors import LoadError
from .model import Model, validate_model

_SECTIONS = ("agents", "states", "alphabet", "props", "actions", "transitions", "indist")


def canonical_partition(assignment: list[int]) -> tuple[int, ...]:
    """Renumber block ids by first occurrence so equal partitions compare equal."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(b, len(seen)) for b in assignment)


def _merge(parent: list[int], a: int, b: int) -> None:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[max(ra, rb)] = min(ra, rb)


def _find(parent: list[int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def load_model(text: str, *, validate: bool = True) -> Model:
    """Parse, intern and validate a model document.

    `validate=False` skips the structural checks so callers (the `validate`
    command) can report violations instead of failing on them."""
    sections: dict[str, list[tuple[int, str]]] = {name: [] for name in _SECTIONS}
    current = None
    inline: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and head.strip() in _SECTIONS:
            current = head.strip()
            if rest.strip():
                inline[current] = rest.strip()
            continue
        if current is None:
            raise LoadError(f"content before any section header: {line!r}", lineno)
        sections[current].append((lineno, line))

    def names_of(section: str) -> list[str]:
        names = inline.get(section, "").split()
        for lineno, line in sections[section]:
            names.extend(line.split())
        return names

    agents = names_of("agents")
    states = names_of("states")
    alphabet = names_of("alphabet")
    if not agents:
        raise LoadError("missing agents section")
    if not states:
        raise LoadError("missing states section")
    for kind, names in (("agent", agents), ("state", states), ("action", alphabet)):
        if len(set(names)) != len(names):
            raise LoadError(f"duplicate {kind} name")
    agent_id = {name: i for i, name in enumerate(agents)}
    state_id = {name: i for i, name in enumerate(states)}
    action_id = {name: i for i, name in enumerate(alphabet)}

    def lookup(table, name, kind, lineno):
        if name not in table:
            raise LoadError(f"unknown {kind} {name!r}", lineno)
        return table[name]

    props: list[str] = []
    valuation: list[frozenset[int]] = []
    for lineno, line in sections["props"]:
        name, sep, rest = line.partition(":")
        if not sep:
            raise LoadError(f"expected `prop: states...`, got {line!r}", lineno)
        name = name.strip()
        if name in props:
            raise LoadError(f"duplicate proposition {name!r}", lineno)
        props.append(name)
        valuation.append(
            frozenset(lookup(state_id, s, "state", lineno) for s in rest.split())
        )

    available: list[list[tuple[int, ...] | None]] = [
        [None] * len(states) for _ in agents
    ]
    for lineno, line in sections["actions"]:
        head, sep, rest = line.partition(":")
        if not sep or "@" not in head:
            raise LoadError(f"expected `agent @ states...: actions...`, got {line!r}", lineno)
        agent_name, _, state_part = head.partition("@")
        i = lookup(agent_id, agent_name.strip(), "agent", lineno)
        menu = tuple(
            sorted(lookup(action_id, a, "action", lineno) for a in rest.split())
        )
        if not menu:
            raise LoadError("empty action menu", lineno)
        for state_name in state_part.split():
            w = lookup(state_id, state_name, "state", lineno)
            if available[i][w] is not None:
                raise LoadError(
                    f"duplicate action menu for {agent_name.strip()} at {state_name}", lineno
                )
            available[i][w] = menu
    for i, row in enumerate(available):
        for w, menu in enumerate(row):
            if menu is None:
                raise LoadError(f"no actions declared for {agents[i]} at {states[w]}")

    transition: dict = {}
    for lineno, line in sections["transitions"]:
        try:
            src_part, rest = line.split("(", 1)
            action_part, dst_part = rest.split(")", 1)
            dst_name = dst_part.replace("->", " ").strip()
        except ValueError:
            raise LoadError(f"expected `state (a,...) -> state`, got {line!r}", lineno)
        w = lookup(state_id, src_part.strip(), "state", lineno)
        action_names = [a.strip() for a in action_part.split(",")]
        if len(action_names) != len(agents):
            raise LoadError("joint action needs one component per agent", lineno)
        alpha = tuple(lookup(action_id, a, "action", lineno) for a in action_names)
        if (w, alpha) in transition:
            raise LoadError(f"duplicate transition for {line!r}", lineno)
        transition[(w, alpha)] = lookup(state_id, dst_name, "state", lineno)

    parents = [list(range(len(states))) for _ in agents]
    for lineno, line in sections["indist"]:
        agent_name, sep, rest = line.partition(":")
        if not sep:
            raise LoadError(f"expected `agent: states...`, got {line!r}", lineno)
        i = lookup(agent_id, agent_name.strip(), "agent", lineno)
        block = [lookup(state_id, s, "state", lineno) for s in rest.split()]
        for w in block[1:]:
            _merge(parents[i], block[0], w)
    indist = tuple(
        canonical_partition([_find(parent, w) for w in range(len(states))])
        for parent in parents
    )

    m = Model(
        agents=tuple(agents),
        states=tuple(states),
        propositions=tuple(props),
        actions=tuple(alphabet),
        valuation=tuple(valuation),
        available=tuple(tuple(row) for row in available),
        transition=transition,
        indist=indist,
    )
    if validate:
        violations = validate_model(m)
        if violations:
            raise LoadError("; ".join(violations))
    return m


def save_model(m: Model) -> str:
    """Emit a document that load_model round-trips to an equal model."""
    lines = [
        "agents: " + " ".join(m.agents),
        "states: " + " ".join(m.states),
        "alphabet: " + " ".join(m.actions),
        "props:",
    ]
    for p, name in enumerate(m.propositions):
        held = " ".join(m.states[w] for w in sorted(m.valuation[p]))
        lines.append(f"  {name}: {held}".rstrip())
    lines.append("actions:")
    for i, agent in enumerate(m.agents):
        by_menu: dict[tuple[int, ...], list[int]] = {}
        for w in range(len(m.states)):
            by_menu.setdefault(m.available[i][w], []).append(w)
        for menu, ws in sorted(by_menu.items(), key=lambda kv: kv[1][0]):
            state_names = " ".join(m.states[w] for w in ws)
            action_names = " ".join(m.actions[a] for a in menu)
            lines.append(f"  {agent} @ {state_names}: {action_names}")
    lines.append("transitions:")
    for (w, alpha), dst in sorted(m.transition.items()):
        joint = ",".join(m.actions[a] for a in alpha)
        lines.append(f"  {m.states[w]} ({joint}) -> {m.states[dst]}")
    lines.append("indist:")
    for i, agent in enumerate(m.agents):
        blocks: dict[int, list[int]] = {}
        for w in range(len(m.states)):
            blocks.setdefault(m.indist[i][w], []).append(w)
        for _, ws in sorted(blocks.items(), key=lambda kv: kv[1][0]):
            if len(ws) > 1:
                lines.append(f"  {agent}: " + " ".join(m.states[w] for w in ws))
    return "\n".join(lines) + "\n"


# --- built-in models ------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    history: str
    formula: str
    horizon: int
    expected: bool


@dataclass(frozen=True)
class BuiltinSuite:
    name: str
    document: str
    model: Model
    checks: tuple[Check, ...]


# Expected verdicts, all at the left history after the first move.
_CHECKS = {
    "M1": (
        Check("q0 -(L,n,n)-> q1", "<<g1>> X win", 1, False),
        Check("q0 -(L,n,n)-> q1", "<<g2>> X win", 1, False),
        Check("q0 -(L,n,n)-> q1", "<<g1,g2>> X win", 1, True),
    ),
    "M2": (
        Check("q0 -(L,n,n)-> q1", "<<g1>> X win", 1, True),
        Check("q0 -(L,n,n)-> q1", "<<g1,g2>> X win", 1, True),
    ),
    "M3": (
        Check("q0 -(n,a)-> q1", "<<1>> p U q", 2, True),
        Check("q0 -(n,a)-> q1", "<<1>> (K{1} p) U (K{1} q)", 2, False),
    ),
    "M4": (
        Check("q0 -(n,a)-> q1", "p", 3, True),
        Check("q0 -(n,a)-> q1", "<<1>> X <<1>> G p", 3, True),
        Check("q0 -(n,a)-> q1", "p & <<1>> X <<1>> G p", 3, True),
        Check("q0 -(n,a)-> q1", "<<1>> G p", 3, False),
    ),
}

BUILTIN_NAMES = tuple(_CHECKS)


def builtin(name: str) -> BuiltinSuite:
    """One of the four built-in models plus its expected-verdict checks."""
    if name not in _CHECKS:
        raise KeyError(f"unknown built-in model {name!r} (have {', '.join(_CHECKS)})")
    document = (
        importlib.resources.files("ksatl.models").joinpath(f"{name}.icgs").read_text()
    )
    return BuiltinSuite(name, document, load_model(document), _CHECKS[name])
