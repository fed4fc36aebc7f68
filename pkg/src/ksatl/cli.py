"""Command-line front end.

Subcommands:

    validate  structural check of a model document
    check     evaluate a formula at a history (exit 0 true / 1 false / 2 error)
    falsify   run one named schema campaign
    suite     built-in regression + all campaigns + evaluator cross-check
    builtin   list the built-in models or dump one

`--format structured` emits versioned JSON; identical invocations with the
same seed produce byte-identical structured output (wall-clock times are
text-only).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Any

from .errors import KsatlError
from .formula import CoalitionAlways, CoalitionNext, CoalitionUntil, parse
from .histories import format_history, parse_history
from .model import Model, validate_model
from .model_format import BUILTIN_NAMES, builtin, load_model
from .semantics import StrategyProfile, evaluate

FORMAT_TAG = "ksatl-report-1"


def _structured(kind: str, payload: dict[str, Any]) -> str:
    record = {"format": FORMAT_TAG, "kind": kind}
    record.update(payload)
    return json.dumps(record, indent=2, sort_keys=True)


def _strip(obj: Any) -> Any:
    """dataclass tree -> plain data, dropping wall-clock times."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: _strip(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if f.name != "wall_time"
        }
    if isinstance(obj, (list, tuple)):
        return [_strip(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _strip(v) for k, v in obj.items()}
    return obj


def _load(args) -> Model:
    if args.builtin:
        return builtin(args.builtin).model
    if not args.model:
        raise KsatlError("need --model PATH or --builtin NAME")
    with open(args.model, encoding="utf-8") as fh:
        return load_model(fh.read())


def _witness_lines(m: Model, profile: StrategyProfile) -> list[str]:
    members = sorted(profile.coalition)
    lines = [f"witness for coalition {{{','.join(m.agents[i] for i in members)}}}:"]
    for rep in sorted(profile.choices):
        g = profile.choices[rep]
        moves = ", ".join(
            f"{m.agents[i]}={m.actions[a]}" for i, a in zip(members, g)
        )
        lines.append(f"  at class of {format_history(m, rep)}: {moves}")
    return lines


def _witness_data(m: Model, profile: StrategyProfile) -> dict[str, Any]:
    members = sorted(profile.coalition)
    return {
        "coalition": [m.agents[i] for i in members],
        "choices": {
            format_history(m, rep): {
                m.agents[i]: m.actions[a] for i, a in zip(members, g)
            }
            for rep, g in sorted(profile.choices.items())
        },
    }


def _cmd_validate(args) -> int:
    if args.builtin:
        m = builtin(args.builtin).model
    else:
        if not args.model:
            raise KsatlError("need --model PATH or --builtin NAME")
        with open(args.model, encoding="utf-8") as fh:
            m = load_model(fh.read(), validate=False)
    violations = validate_model(m)
    if args.format == "structured":
        print(_structured("validate", {"ok": not violations, "violations": violations}))
    elif violations:
        for v in violations:
            print(v)
    else:
        print("ok")
    return 0 if not violations else 1


def _cmd_check(args) -> int:
    m = _load(args)
    f = parse(args.formula)
    h = parse_history(m, args.history)
    report = evaluate(
        m,
        h,
        f,
        args.horizon,
        witness=args.witness,
        stable_check=args.stable_check,
    )
    if args.format == "structured":
        payload: dict[str, Any] = {
            "formula": args.formula,
            "history": args.history,
            "horizon": args.horizon,
            "verdict": report.verdict,
        }
        if report.horizon_stable is not None:
            payload["horizon_stable"] = report.horizon_stable
        if report.witness is not None:
            payload["witness"] = _witness_data(m, report.witness)
        print(_structured("check", payload))
    else:
        print("true" if report.verdict else "false")
        if report.horizon_stable is not None:
            print(f"horizon-stable: {'yes' if report.horizon_stable else 'no'}")
        if report.witness is not None:
            for line in _witness_lines(m, report.witness):
                print(line)
        elif args.witness and report.verdict:
            kind = (CoalitionNext, CoalitionAlways, CoalitionUntil)
            from .formula import desugar

            if not isinstance(desugar(f), kind):
                print("witness: not a coalition-operator query")
    return 0 if report.verdict else 1


def _campaign_text(rep) -> list[str]:
    lines = [
        f"schema {rep.schema} ({rep.polarity}): trials={rep.trials} "
        f"points={rep.points_checked} counterexamples={len(rep.counterexamples)} "
        f"[{'ok' if rep.ok else 'FAIL'}] ({rep.wall_time:.2f}s)"
    ]
    for ce in rep.counterexamples[:5]:
        lines.append(
            f"  {ce.source} at {ce.history} with {ce.instantiation}: "
            f"{ce.premise} holds but {ce.conclusion} fails (H={ce.horizon})"
        )
    if len(rep.counterexamples) > 5:
        lines.append(f"  ... {len(rep.counterexamples) - 5} more")
    return lines


def _cmd_falsify(args) -> int:
    from .harness import SCHEMAS_BY_NAME, GenParams, check_schema

    if args.schema not in SCHEMAS_BY_NAME:
        raise KsatlError(
            f"unknown schema {args.schema!r}; known: "
            + ", ".join(sorted(SCHEMAS_BY_NAME))
        )
    schema = SCHEMAS_BY_NAME[args.schema]
    report = check_schema(schema, GenParams(seed=args.seed), args.trials)
    if args.format == "structured":
        print(_structured("falsify", {"report": _strip(report), "ok": report.ok}))
    else:
        for line in _campaign_text(report):
            print(line)
    return 0 if report.ok else 1


def _cmd_suite(args) -> int:
    from .harness import run_suite

    result = run_suite(args.seed, args.trials)
    if args.format == "structured":
        print(_structured("suite", {"result": _strip(result), "ok": result.ok}))
        return 0 if result.ok else 1
    for r in result.builtins:
        status = "ok" if r.ok else "FAIL"
        print(
            f"builtin {r.model} H={r.horizon} {r.formula} at {r.history}: "
            f"{str(r.got).lower()} (expected {str(r.expected).lower()}) [{status}]"
        )
    for rep in result.campaigns:
        for line in _campaign_text(rep):
            print(line)
    cc = result.crosscheck
    print(
        f"crosscheck: queries={cc.queries} box={cc.count('box')} "
        f"eventually={cc.count('eventually')} until={cc.count('until')} "
        f"unsound={cc.unsound_count} [{'ok' if cc.ok else 'FAIL'}] "
        f"({cc.wall_time:.2f}s)"
    )
    print(f"suite: {'pass' if result.ok else 'FAIL'} ({result.wall_time:.2f}s)")
    return 0 if result.ok else 1


def _cmd_builtin(args) -> int:
    if not args.name:
        for name in BUILTIN_NAMES:
            print(name)
        return 0
    suite = builtin(args.name)
    print(suite.document, end="")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksatl",
        description="bounded model checking of coalition abilities with "
        "knowledge-sharing coalitions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p):
        p.add_argument("--model", help="path to a model document")
        p.add_argument("--builtin", choices=BUILTIN_NAMES, help="built-in model name")

    def format_arg(p):
        p.add_argument(
            "--format", choices=("text", "structured"), default="text",
            help="report format (structured = versioned JSON)",
        )

    p = sub.add_parser("validate", help="check a model document's invariants")
    model_args(p)
    format_arg(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("check", help="evaluate a formula at a history")
    model_args(p)
    p.add_argument("--history", required=True, help='e.g. "q0 -(L,n,n)-> q1"')
    p.add_argument("--formula", required=True, help='e.g. "<<g1,g2>> X win"')
    p.add_argument("--horizon", type=int, required=True, help="transition budget")
    p.add_argument("--witness", action="store_true", help="print a witness strategy")
    p.add_argument(
        "--stable-check", action="store_true",
        help="also evaluate at horizon+1 and report agreement",
    )
    format_arg(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("falsify", help="run one schema campaign")
    p.add_argument("--schema", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    format_arg(p)
    p.set_defaults(func=_cmd_falsify)

    p = sub.add_parser("suite", help="full regression suite")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    format_arg(p)
    p.set_defaults(func=_cmd_suite)

    p = sub.add_parser("builtin", help="list built-in models or dump one")
    p.add_argument("name", nargs="?", help="model to dump; omit to list")
    p.set_defaults(func=_cmd_builtin)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags already; normalize other codes
        return 2 if exc.code not in (0, 2) else (exc.code or 0)
    try:
        return args.func(args)
    except (KsatlError, OSError, KeyError, ValueError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
