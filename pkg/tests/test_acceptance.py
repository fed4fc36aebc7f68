"""Acceptance gate: one test (and one pass/fail line) per criterion.

Criterion 4 asserts full agreement between the strategy-enumeration
evaluator and the one-step recurrence evaluator on all propositional-target
box/eventually/until queries.  The box half of that identity is exact, but
the eventually/until recurrences are only sound, not complete: the recorded
built-in verdicts themselves supply a separating point (the until goal on
the third built-in model at horizon 2 is achievable, yet neither operand is
group knowledge one step in, so the recurrence reports false).  The test is
kept faithful to the criterion and is expected to fail; the exact halves it
covers are split out as criterion 4a so the attainable part stays guarded.
"""

import random
import time

from ksatl.formula import parse
from ksatl.harness import (
    SCHEMAS,
    GenParams,
    check_schema,
    oracle_crosscheck,
    random_model,
    replay_counterexample,
    run_suite,
    _trial_params,
)
from ksatl.histories import all_histories, parse_history
from ksatl.model_format import BUILTIN_NAMES, builtin
from ksatl.semantics import (
    Evaluator,
    dist_knows,
    evaluate,
    replay_witness,
    synthesize_strategy,
    validate_profile,
)


def _report(criterion, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {criterion}: {status}" + (f" ({detail})" if detail else ""))
    return ok


def test_criterion_1_recorded_verdicts():
    """Exact regression of every recorded built-in verdict, under a second."""
    started = time.perf_counter()
    failures = []
    for name in BUILTIN_NAMES:
        suite = builtin(name)
        for check in suite.checks:
            h = parse_history(suite.model, check.history)
            got = evaluate(suite.model, h, parse(check.formula), check.horizon)
            if got.verdict != check.expected:
                failures.append((name, check.formula, got.verdict))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 1.0
    assert _report(1, ok, f"{elapsed:.2f}s, {len(failures)} wrong verdicts"), failures


def test_criterion_2_validity_suites():
    """Every expected-valid schema over >= 200 random models, zero
    counterexamples, within five minutes."""
    started = time.perf_counter()
    trials = 200
    params = GenParams(seed=7)
    models = [
        (f"seed:{t}", random_model(_trial_params(params, t))) for t in range(trials)
    ]
    evaluators = {source: Evaluator(m) for source, m in models}
    bad = []
    for schema in SCHEMAS:
        if schema.polarity != "expected-valid":
            continue
        rep = check_schema(schema, params, trials, models=models, evaluators=evaluators)
        if rep.counterexamples:
            bad.append((schema.name, rep.counterexamples[0]))
    elapsed = time.perf_counter() - started
    ok = not bad and elapsed < 300.0
    assert _report(2, ok, f"{elapsed:.0f}s, {len(bad)} broken schemata"), bad


def test_criterion_3_non_validity_suite():
    """Each fixed-point non-validity yields a replayable counterexample from
    the built-ins plus 500 random models, including the documented one."""
    fixedpoint_schemas = [
        s
        for s in SCHEMAS
        if s.polarity == "expected-falsifiable" and "fixpoint" in s.name
    ]
    assert len(fixedpoint_schemas) == 5
    params = GenParams(seed=7)
    missing, broken_replays = [], []
    documented_found = False
    for schema in fixedpoint_schemas:
        rep = check_schema(schema, params, 500)
        if not rep.counterexamples:
            missing.append(schema.name)
            continue
        for ce in rep.counterexamples:
            if not replay_counterexample(ce):
                broken_replays.append((schema.name, ce.history))
        if schema.name == "box-fixpoint-lhs":
            documented_found = any(
                ce.source == "builtin:M4"
                and ce.history == "q0 -(n,a)-> q1"
                and "phi=p " in ce.instantiation
                for ce in rep.counterexamples
            )
    ok = not missing and not broken_replays and documented_found
    assert _report(
        3, ok, f"missing={missing}, documented M4 witness found={documented_found}"
    )


def test_criterion_4_oracle_equivalence():
    """Full eval/eval_fixedpoint agreement on propositional-target queries.

    Expected to fail: the eventually/until recurrences are sound but not
    complete (see module docstring); the gap appears on the built-ins."""
    rep = oracle_crosscheck(GenParams(seed=7), 300)
    total = sum(rep.counts.values())
    ok = total == 0
    assert _report(
        4,
        ok,
        f"queries={rep.queries} disagreements={total} "
        f"(box={rep.count('box')} eventually={rep.count('eventually')} "
        f"until={rep.count('until')})",
    )


def test_criterion_4a_provable_oracle_identities():
    """The attainable halves of criterion 4: the box recurrence is an exact
    identity and the recurrences never overclaim."""
    rep = oracle_crosscheck(GenParams(seed=7), 300)
    ok = rep.count("box") == 0 and rep.unsound_count == 0
    assert _report(
        "4a", ok, f"box={rep.count('box')} unsound={rep.unsound_count}"
    )


def test_criterion_5_epistemic_equivalence():
    """K/D via the until-abbreviation equals direct class evaluation at
    >= 1000 sampled points."""
    rng = random.Random(7)
    points = 0
    mismatches = 0
    corpus = [builtin(n).model for n in BUILTIN_NAMES]
    corpus.extend(
        random_model(_trial_params(GenParams(seed=7), t)) for t in range(30)
    )
    for m in corpus:
        prop = m.propositions[0]
        coalitions = [(m.agents[0],), tuple(m.agents)]
        targets = [prop, f"~{prop}"]
        for length in (0, 1, 2):
            histories = list(all_histories(m, length))
            if len(histories) > 12:
                histories = rng.sample(histories, 12)
            for h in histories:
                for agents, target in zip(coalitions, targets):
                    op = "K" if len(agents) == 1 else "D"
                    wrapped = parse(f"{op}{{{','.join(agents)}}} ({target})")
                    points += 1
                    if evaluate(m, h, wrapped, 2).verdict != dist_knows(
                        m, h, agents, parse(target), 2
                    ):
                        mismatches += 1
    ok = points >= 1000 and mismatches == 0
    assert _report(5, ok, f"points={points} mismatches={mismatches}")


def test_criterion_6_witness_soundness():
    """Every synthesized strategy passes the structural uniformity/legality
    check and replays to a true verdict."""
    synthesized = 0
    failures = 0
    corpus = [builtin(n).model for n in BUILTIN_NAMES]
    corpus.extend(
        random_model(_trial_params(GenParams(seed=8), t)) for t in range(20)
    )
    for m in corpus:
        prop = m.propositions[0]
        coalitions = [(m.agents[0],), tuple(m.agents)]
        goals = [
            f"<<%s>> X {prop}",
            f"<<%s>> G {prop}",
            f"<<%s>> F {prop}",
            f"<<%s>> true U ~{prop}",
        ]
        for h in all_histories(m, 1):
            for agents in coalitions:
                for template in goals:
                    goal = parse(template % ",".join(agents))
                    profile = synthesize_strategy(m, h, goal, 2)
                    if profile is None:
                        continue
                    synthesized += 1
                    if validate_profile(m, profile) or not replay_witness(
                        m, h, goal, 2, profile
                    ):
                        failures += 1
    ok = synthesized > 100 and failures == 0
    assert _report(6, ok, f"witnesses={synthesized} failures={failures}")


def test_criterion_7_suite_determinism():
    """Identical seeds produce byte-identical structured suite reports."""
    import json

    from ksatl.cli import _strip, _structured

    dumps = []
    for _ in range(2):
        result = run_suite(seed=11, trials=25)
        dumps.append(_structured("suite", {"result": _strip(result), "ok": result.ok}))
    ok = dumps[0] == dumps[1] and json.loads(dumps[0])["ok"]
    assert _report(7, ok, f"bytes={len(dumps[0])}")
