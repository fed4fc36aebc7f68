"""Bounded-horizon satisfaction over group-uniform perfect-recall strategies.

Evaluation points are finite histories: satisfaction at a stage depends only
on the path prefix up to that stage, so the evaluator never materializes
infinite plays.  The next-step operator is exact and consumes one unit of
horizon budget; always/until are horizon-bounded, each explored stage
consuming one unit.  A next-step operator reached with zero budget raises
InsufficientBudgetError rather than silently reporting false.

The search is an AND-OR walk over the coalition's knowledge tree: nodes are
coalition information classes, existential branching over uniform joint
choices of the coalition, universal branching over class members and
opponent completions.  Because classes of extensions are exactly the
extensions of classes, choices on distinct classes are independent and the
per-class recursion realizes a single uniform strategy.

For until, branches whose play already satisfied the right operand carry no
further obligation; the recursion therefore tracks the pending subset of
each class.  A second evaluator replaces always/until with the one-step
knowledge recurrences (box: D-of-target AND next-box; until/eventually:
D-of-goal OR step) and is used as a cross-check oracle; the box recurrence
is an exact identity, the until/eventually ones are sound but incomplete
(see the falsifier schemas).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    IncompleteStrategyError,
    InsufficientBudgetError,
    UnsupportedQueryError,
)
from .formula import (
    And,
    Bot,
    CoalitionAlways,
    CoalitionNext,
    CoalitionUntil,
    Formula,
    Not,
    Prop,
    Top,
    desugar,
    is_propositional,
    resolve,
)
from .histories import History, coalition_blocks, equiv_class, extend
from .model import Model, joint_actions


@dataclass
class EvalStats:
    nodes: int = 0
    classes: int = 0


@dataclass
class StrategyProfile:
    """Uniform joint choices for a coalition, keyed by class representative.

    choices maps the least member of each information class to one action id
    per coalition member (members in sorted agent-id order).  Uniformity
    holds by construction: one entry per class.
    """

    coalition: frozenset[int]
    choices: dict[History, tuple[int, ...]]


@dataclass
class VerdictReport:
    verdict: bool
    witness: Optional[StrategyProfile] = None
    horizon_stable: Optional[bool] = None
    stats: EvalStats = field(default_factory=EvalStats)


class Evaluator:
    """Exact bounded evaluator for one model; memo tables are per instance."""

    def __init__(self, m: Model):
        self.m = m
        self.stats = EvalStats()
        self._memo: dict = {}

    # -- plumbing ---------------------------------------------------------

    def coalition_ids(self, names) -> tuple[int, ...]:
        return tuple(sorted(self.m.agent_id(n) for n in names))

    def _cls(self, h: History, G: tuple[int, ...]) -> frozenset[History]:
        self.stats.classes += 1
        return equiv_class(self.m, h, frozenset(G))

    def _uniform_choices(self, G, C):
        # menus are constant across the class for coalition members
        # (action-knowledge coherence), so read them off any representative
        last = min(C).last
        return itertools.product(*(self.m.available[i][last] for i in G))

    def _extensions(self, G, g, h: History) -> list[History]:
        out = []
        for alpha in joint_actions(self.m, h.last):
            if all(alpha[i] == g[k] for k, i in enumerate(G)):
                out.append(extend(self.m, h, alpha))
        return out

    def _succ_classes(self, G, g, C) -> list[frozenset[History]]:
        # extensions of a full class with fixed coalition components fall
        # apart into full classes, one per coalition block of the new state
        blocks = coalition_blocks(self.m, frozenset(G))
        groups: dict[int, list[History]] = {}
        for h in C:
            for h2 in self._extensions(G, g, h):
                groups.setdefault(blocks[h2.last], []).append(h2)
        return [frozenset(members) for _, members in sorted(groups.items())]

    # -- evaluation -------------------------------------------------------

    def check(self, h: History, f: Formula, budget: int) -> bool:
        self.stats.nodes += 1
        if isinstance(f, Prop):
            return h.last in self.m.valuation[self.m.prop_id(f.name)]
        if isinstance(f, Top):
            return True
        if isinstance(f, Bot):
            return False
        if isinstance(f, Not):
            return not self.check(h, f.sub, budget)
        if isinstance(f, And):
            return self.check(h, f.left, budget) and self.check(h, f.right, budget)
        G = self.coalition_ids(f.agents)
        C = self._cls(h, G)
        if isinstance(f, CoalitionNext):
            return self._next(f, G, C, budget)
        if isinstance(f, CoalitionAlways):
            return self._box(f, G, C, budget)
        if isinstance(f, CoalitionUntil):
            return self._until(f, G, C, C, budget)
        raise TypeError(f"cannot evaluate {f!r}; desugar first")

    def _next(self, f: CoalitionNext, G, C, budget: int) -> bool:
        if budget < 1:
            raise InsufficientBudgetError(
                "next-step operator reached with zero budget; raise the horizon"
            )
        key = ("X", f, min(C), budget)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = False
        for g in self._uniform_choices(G, C):
            if all(
                self.check(h2, f.sub, budget - 1)
                for h in C
                for h2 in self._extensions(G, g, h)
            ):
                result = True
                break
        self._memo[key] = result
        return result

    def _box(self, f: CoalitionAlways, G, C, budget: int) -> bool:
        key = ("G", f, min(C), budget)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._box_search(f, G, C, budget)
        self._memo[key] = result
        return result

    def _box_search(self, f, G, C, budget) -> bool:
        # the target must hold at every class member at every explored stage;
        # this per-class conjunction makes the box recursion exact
        if not all(self.check(h, f.sub, budget) for h in C):
            return False
        if budget == 0:
            return True
        for g in self._uniform_choices(G, C):
            if all(
                self._box(f, G, C2, budget - 1) for C2 in self._succ_classes(G, g, C)
            ):
                return True
        return False

    def _until(self, f: CoalitionUntil, G, C, pending, budget: int) -> bool:
        key = ("U", f, min(C), pending, budget)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._until_search(f, G, C, pending, budget)
        self._memo[key] = result
        return result

    def _until_search(self, f, G, C, pending, budget) -> bool:
        still = frozenset(h for h in pending if not self.check(h, f.right, budget))
        if not still:
            return True
        if not all(self.check(h, f.left, budget) for h in still):
            return False
        if budget == 0:
            return False
        for g in self._uniform_choices(G, C):
            ok = True
            for C2 in self._succ_classes(G, g, C):
                p2 = frozenset(h2 for h2 in C2 if h2.prefix(len(h2) - 1) in still)
                if p2 and not self._until(f, G, C2, p2, budget - 1):
                    ok = False
                    break
            if ok:
                return True
        return False

    # -- witness synthesis ------------------------------------------------

    def synthesize(self, h: History, goal: Formula, budget: int):
        """Lexicographically least witness profile, or None when goal fails."""
        if not isinstance(goal, (CoalitionNext, CoalitionAlways, CoalitionUntil)):
            raise UnsupportedQueryError(
                "witness synthesis needs a top-level coalition operator"
            )
        G = self.coalition_ids(goal.agents)
        C = self._cls(h, G)
        choices: dict[History, tuple[int, ...]] = {}
        if isinstance(goal, CoalitionNext):
            if not self._next(goal, G, C, budget):
                return None
            for g in self._uniform_choices(G, C):
                if all(
                    self.check(h2, goal.sub, budget - 1)
                    for h1 in C
                    for h2 in self._extensions(G, g, h1)
                ):
                    choices[min(C)] = g
                    break
        elif isinstance(goal, CoalitionAlways):
            if not self._box(goal, G, C, budget):
                return None
            self._synth_box(goal, G, C, budget, choices)
        elif isinstance(goal, CoalitionUntil):
            if not self._until(goal, G, C, C, budget):
                return None
            self._synth_until(goal, G, C, C, budget, choices)
        else:
            raise UnsupportedQueryError(
                "witness synthesis needs a top-level coalition operator"
            )
        return StrategyProfile(frozenset(G), choices)

    def _synth_box(self, f, G, C, budget, choices) -> None:
        if budget == 0:
            return
        for g in self._uniform_choices(G, C):
            succ = self._succ_classes(G, g, C)
            if all(self._box(f, G, C2, budget - 1) for C2 in succ):
                choices[min(C)] = g
                for C2 in succ:
                    self._synth_box(f, G, C2, budget - 1, choices)
                return
        raise AssertionError("no successful choice under a true box verdict")

    def _synth_until(self, f, G, C, pending, budget, choices) -> None:
        still = frozenset(h for h in pending if not self.check(h, f.right, budget))
        if not still or budget == 0:
            # no obligation left on this branch; fill in defaults so the
            # profile stays total on the reachable tree
            self._synth_defaults(G, C, budget, choices)
            return
        for g in self._uniform_choices(G, C):
            succ = self._succ_classes(G, g, C)
            pend2 = [
                frozenset(h2 for h2 in C2 if h2.prefix(len(h2) - 1) in still)
                for C2 in succ
            ]
            if all(
                not p2 or self._until(f, G, C2, p2, budget - 1)
                for C2, p2 in zip(succ, pend2)
            ):
                choices[min(C)] = g
                for C2, p2 in zip(succ, pend2):
                    self._synth_until(f, G, C2, p2, budget - 1, choices)
                return
        raise AssertionError("no successful choice under a true until verdict")

    def _synth_defaults(self, G, C, budget, choices) -> None:
        if budget == 0 or min(C) in choices:
            return
        g = next(self._uniform_choices(G, C))
        choices[min(C)] = g
        for C2 in self._succ_classes(G, g, C):
            self._synth_defaults(G, C2, budget - 1, choices)


class FixedpointEvaluator(Evaluator):
    """Replaces always/until with the one-step knowledge recurrences.

    Box: target known throughout the class now AND a next-step move into the
    box with one unit less budget (base case: known now).  Until: goal known
    now, OR maintenance known now and a next-step move into the until.
    Restricted to propositional temporal targets so both evaluators see the
    same residual budgets.
    """

    def _box(self, f, G, C, budget: int) -> bool:
        if not is_propositional(f.sub):
            raise UnsupportedQueryError(
                "fixed-point evaluation needs a propositional always-target"
            )
        # for a propositional target the recurrence coincides literally with
        # the exact box recursion, so reuse it
        return super()._box(f, G, C, budget)

    def _until(self, f, G, C, pending, budget: int) -> bool:
        if not (is_propositional(f.left) and is_propositional(f.right)):
            raise UnsupportedQueryError(
                "fixed-point evaluation needs propositional until-targets"
            )
        key = ("Ufp", f, min(C), budget)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._until_fp(f, G, C, budget)
        self._memo[key] = result
        return result

    def _until_fp(self, f, G, C, budget) -> bool:
        if all(self.check(h, f.right, budget) for h in C):
            return True
        if not all(self.check(h, f.left, budget) for h in C):
            return False
        if budget == 0:
            return False
        for g in self._uniform_choices(G, C):
            if all(
                self._until(f, G, C2, C2, budget - 1)
                for C2 in self._succ_classes(G, g, C)
            ):
                return True
        return False


def dist_knows(m: Model, h: History, agents, f: Formula, budget: int = 0) -> bool:
    """Direct epistemic check: f holds on every history the group cannot
    rule out.  Equivalent to the until-abbreviation of K/D (tested)."""
    ev = Evaluator(m)
    G = ev.coalition_ids(agents)
    return all(ev.check(h2, f, budget) for h2 in ev._cls(h, G))


def _prepare(m: Model, f: Formula, horizon: int) -> Formula:
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    return resolve(desugar(f), m)


def evaluate(
    m: Model,
    at: History,
    f: Formula,
    horizon: int,
    *,
    witness: bool = False,
    stable_check: bool = False,
) -> VerdictReport:
    """Bounded satisfaction of f at the end of history `at`."""
    f = _prepare(m, f, horizon)
    ev = Evaluator(m)
    verdict = ev.check(at, f, horizon)
    report = VerdictReport(verdict, stats=ev.stats)
    if stable_check:
        report.horizon_stable = verdict == ev.check(at, f, horizon + 1)
    if (
        witness
        and verdict
        and isinstance(f, (CoalitionNext, CoalitionAlways, CoalitionUntil))
    ):
        report.witness = ev.synthesize(at, f, horizon)
    return report


def eval_fixedpoint(m: Model, at: History, f: Formula, horizon: int) -> VerdictReport:
    """Cross-check evaluation via the one-step knowledge recurrences."""
    f = _prepare(m, f, horizon)
    ev = FixedpointEvaluator(m)
    return VerdictReport(ev.check(at, f, horizon), stats=ev.stats)


def synthesize_strategy(
    m: Model, at: History, goal: Formula, horizon: int
) -> Optional[StrategyProfile]:
    """Witness profile for a true coalition-operator goal, None when false."""
    goal = _prepare(m, goal, horizon)
    return Evaluator(m).synthesize(at, goal, horizon)


# -- strategy replay ---------------------------------------------------------


def outcomes(
    m: Model, h: History, profile: StrategyProfile, steps: int
) -> set[History]:
    """All extensions of h by exactly `steps` transitions where coalition
    members follow the profile and everyone else plays any legal action."""
    G = tuple(sorted(profile.coalition))
    frontier = [h]
    for _ in range(steps):
        nxt = []
        for cur in frontier:
            C = equiv_class(m, cur, profile.coalition)
            g = profile.choices.get(min(C))
            if g is None:
                raise IncompleteStrategyError(
                    f"profile undefined on the class of {cur}"
                )
            for alpha in joint_actions(m, cur.last):
                if all(alpha[i] == g[k] for k, i in enumerate(G)):
                    nxt.append(extend(m, cur, alpha))
        frontier = nxt
    return set(frontier)


def validate_profile(m: Model, profile: StrategyProfile) -> list[str]:
    """Structural uniformity/legality check; returns violations (empty = ok)."""
    problems = []
    G = tuple(sorted(profile.coalition))
    for rep, g in profile.choices.items():
        C = equiv_class(m, rep, profile.coalition)
        if rep != min(C):
            problems.append(f"key {rep} is not its class representative")
        if len(g) != len(G):
            problems.append(f"choice {g} has wrong arity for coalition {G}")
            continue
        for member in C:
            for k, i in enumerate(G):
                if g[k] not in m.available[i][member.last]:
                    problems.append(
                        f"action {m.actions[g[k]]} illegal for {m.agents[i]} "
                        f"at {m.states[member.last]}"
                    )
    return problems


def replay_witness(
    m: Model, at: History, goal: Formula, horizon: int, profile: StrategyProfile
) -> bool:
    """Re-derive a true verdict from a synthesized profile.

    Walks the coalition knowledge tree following only the profile's choices
    (no existential search) and re-checks the stage conditions with a fresh
    evaluator."""
    goal = _prepare(m, goal, horizon)
    ev = Evaluator(m)
    G = ev.coalition_ids(goal.agents)
    C = ev._cls(at, G)

    def choice_at(C):
        g = profile.choices.get(min(C))
        if g is None:
            raise IncompleteStrategyError(f"profile undefined on class of {min(C)}")
        return g

    if isinstance(goal, CoalitionNext):
        g = choice_at(C)
        return all(
            ev.check(h2, goal.sub, horizon - 1)
            for h in C
            for h2 in ev._extensions(G, g, h)
        )
    if isinstance(goal, CoalitionAlways):
        level = [C]
        for depth in range(horizon + 1):
            for C2 in level:
                if not all(ev.check(h, goal.sub, horizon - depth) for h in C2):
                    return False
            if depth < horizon:
                level = [
                    C3
                    for C2 in level
                    for C3 in ev._succ_classes(G, choice_at(C2), C2)
                ]
        return True
    if isinstance(goal, CoalitionUntil):
        level = [(C, C)]
        for depth in range(horizon + 1):
            budget = horizon - depth
            nxt = []
            for C2, pending in level:
                still = frozenset(
                    h for h in pending if not ev.check(h, goal.right, budget)
                )
                if not still:
                    continue
                if not all(ev.check(h, goal.left, budget) for h in still):
                    return False
                if depth == horizon:
                    return False
                g = choice_at(C2)
                for C3 in ev._succ_classes(G, g, C2):
                    p3 = frozenset(
                        h2 for h2 in C3 if h2.prefix(len(h2) - 1) in still
                    )
                    if p3:
                        nxt.append((C3, p3))
            level = nxt
            if not level:
                return True
        return not level
    raise UnsupportedQueryError("replay needs a coalition-operator goal")
