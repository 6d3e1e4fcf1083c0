"""Command-line surface.

Exit codes are a stable contract: 0 for a positive outcome, 1 for a
logical negative (countermodel found where validity was asked, no
countermodel where one was asked, proof rejected, registry mismatch),
2 for usage or input errors.  ``DOXA_MAX_STATES`` sets the default
state budget for every bounded search.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import hilbert, oracle, registry, semantics, transform
from .oracle import SearchBudget
from .semantics import dump_model, frame_class, load_model
from .syntax import parse, print_formula


class UsageError(Exception):
    pass


def _default_max_states() -> int:
    raw = os.environ.get("DOXA_MAX_STATES")
    if raw is None:
        return 3
    try:
        value = int(raw)
        if value < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"DOXA_MAX_STATES must be a positive integer, got {raw!r}")
    return value


def _budget(args) -> SearchBudget:
    max_states = args.max_states if args.max_states is not None else _default_max_states()
    atoms = tuple(a.strip() for a in args.atoms.split(",")) if getattr(args, "atoms", None) else ("p", "q", "r")
    depth = getattr(args, "depth", None)
    size = getattr(args, "size", None)
    return SearchBudget(
        max_states=max_states,
        atoms=atoms,
        max_modal_depth=depth if depth is not None else 2,
        max_size=size if size is not None else 7,
    )


def _read_model(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    try:
        return load_model(text)
    except semantics.ModelFormatError as exc:
        raise UsageError(f"{path}: {exc}")


def _parse_formula(text: str):
    try:
        return parse(text)
    except ValueError as exc:
        raise UsageError(f"bad formula: {exc}")


def _report_dict(report: oracle.VerdictReport) -> dict:
    out = {
        "query": report.query,
        "verdict": report.verdict,
        "frames_examined": report.frames_examined,
        "models_examined": report.models_examined,
    }
    if report.witness is not None:
        model, state = report.witness
        out["witness"] = json.loads(dump_model(model, designated=state))
    return out


def _print_search_report(report: oracle.VerdictReport, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_report_dict(report), indent=2))
        return
    print(report.query)
    print(f"verdict: {report.verdict}")
    print(f"examined: {report.frames_examined} frames, {report.models_examined} models")
    if report.witness is not None:
        model, state = report.witness
        print(dump_model(model, designated=state))


def cmd_eval(args) -> int:
    model, designated = _read_model(args.model)
    state = args.state if args.state is not None else designated
    if state is None:
        raise UsageError("no state given and the model has no designated state")
    formula = _parse_formula(args.formula)
    try:
        value = semantics.evaluate(model, state, formula)
    except semantics.UnknownStateError:
        raise UsageError(f"unknown state {state!r}")
    print("true" if value else "false")
    return 0


def cmd_valid(args) -> int:
    formula = _parse_formula(args.formula)
    fc = _class_of(args)
    try:
        report = oracle.valid_on(formula, fc, _budget(args))
    except oracle.BudgetError as exc:
        raise UsageError(str(exc))
    _print_search_report(report, args.format)
    return 1 if report.countermodel_found else 0


def cmd_counter(args) -> int:
    formula = _parse_formula(args.formula)
    fc = _class_of(args)
    try:
        report = oracle.find_countermodel(formula, fc, _budget(args))
    except oracle.BudgetError as exc:
        raise UsageError(str(exc))
    _print_search_report(report, args.format)
    # For a countermodel search, finding one is the positive outcome.
    return 0 if report.countermodel_found else 1


def _class_of(args):
    try:
        return frame_class(args.frame_class)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_translate(args) -> int:
    formula = _parse_formula(args.formula)
    fn = transform.w_to_ri if args.direction == "w2ri" else transform.ri_to_w
    try:
        print(print_formula(fn(formula)))
    except semantics.LanguageError as exc:
        raise UsageError(str(exc))
    return 0


def cmd_chain(args) -> int:
    try:
        chain = transform.almost_def_chain(args.axiom)
    except ValueError as exc:
        raise UsageError(str(exc))
    for i, line in enumerate(chain.lines, 1):
        print(f"({i}) {print_formula(line)}")
    if not args.check:
        return 0
    report = transform.check_chain(chain, _budget(args))
    ok = True
    for i, step in enumerate(report.steps, 1):
        status = "countermodel" if step.countermodel_found else "equivalent-up-to-budget"
        print(f"step {i}->{i + 1}: {status}")
        ok = ok and not step.countermodel_found
    return 0 if ok else 1


def cmd_prove(args) -> int:
    try:
        text = Path(args.script).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.script}: {exc}")
    try:
        proof = hilbert.parse_proof_script(text)
    except hilbert.ProofScriptError as exc:
        raise UsageError(str(exc))
    result = hilbert.check_proof(proof, strict=args.strict)
    if result.accepted:
        print(f"accepted: {len(proof.lines)} lines, conclusion {print_formula(proof.conclusion)}")
        return 0
    print(f"rejected at line {result.line}: {result.reason}")
    return 1


def cmd_transform(args) -> int:
    model, designated = _read_model(args.model)
    root = args.state if args.state is not None else designated
    try:
        if args.operation == "closure":
            result = transform.euclidean_closure(model)
        else:
            if root is None:
                raise UsageError(f"{args.operation} needs a state (argument or designated)")
            if args.operation == "generate":
                result = transform.generated_submodel(model, root)
            else:
                result = transform.cone_augment(model, root)
    except semantics.UnknownStateError:
        raise UsageError(f"unknown state {root!r}")
    print(dump_model(result, designated=root if root in result.frame.states else None))
    if not args.verify:
        return 0
    budget = _budget(args)
    atoms = tuple(args.atoms.split(",")) if args.atoms else tuple(sorted(model.valuation)) or ("p",)
    corpus_budget = SearchBudget(
        max_states=budget.max_states,
        atoms=atoms,
        max_modal_depth=budget.max_modal_depth,
        max_size=budget.max_size,
    )
    report = transform.verify_preservation(model, result, budget=corpus_budget)
    if report.ok:
        print(f"preservation: ok over {report.formulas_checked} formulas")
        return 0
    print(
        f"preservation: violated at state {report.state} by {print_formula(report.formula)}"
    )
    return 1


def cmd_verify_paper(args) -> int:
    max_states = args.max_states if args.max_states is not None else _default_max_states()
    results = registry.run_checks(max_states=max_states, pattern=args.filter)
    if args.format == "json":
        print(
            json.dumps(
                [
                    {
                        "id": check.id,
                        "kind": check.kind,
                        "status": outcome.status,
                        "detail": outcome.detail,
                    }
                    for check, outcome in results
                ],
                indent=2,
            )
        )
    else:
        for check, outcome in results:
            tag = {"pass": "PASS", "fail": "FAIL", "budget-insufficient": "BUDGET"}[outcome.status]
            print(f"[{tag:6}] {check.id}: {outcome.detail}")
        counts = {"pass": 0, "fail": 0, "budget-insufficient": 0}
        for _check, outcome in results:
            counts[outcome.status] += 1
        print(
            f"{len(results)} checks: {counts['pass']} passed, {counts['fail']} failed, "
            f"{counts['budget-insufficient']} budget-insufficient (max states {max_states})"
        )
    return 1 if any(outcome.status == registry.FAIL for _c, outcome in results) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doxa",
        description="Workbench for the logics of false belief and radical ignorance",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_budget_flags(p, atoms=True, corpus=False):
        p.add_argument("--max-states", type=int, default=None, help="state budget (default: DOXA_MAX_STATES or 3)")
        if atoms:
            p.add_argument("--atoms", default=None, help="comma-separated atom list for valuations")
        if corpus:
            p.add_argument("--depth", type=int, default=None, help="corpus modal depth bound")
            p.add_argument("--size", type=int, default=None, help="corpus size bound")

    p = sub.add_parser("eval", help="evaluate a formula at a state of a model file")
    p.add_argument("model")
    p.add_argument("state", nargs="?")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_eval)

    for name, fn, blurb in (
        ("valid", cmd_valid, "bounded validity search (exit 1 when a countermodel exists)"),
        ("counter", cmd_counter, "bounded countermodel search (exit 0 when one is found)"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("formula")
        p.add_argument("--class", dest="frame_class", default="all", help="frame class, e.g. all, serial+transitive")
        p.add_argument("--format", choices=("text", "json"), default="text")
        add_budget_flags(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("translate", help="rewrite between the W and IR languages")
    p.add_argument("formula")
    p.add_argument("--direction", choices=("w2ri", "ri2w"), required=True)
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("chain", help="print (and check) a box-axiom rewrite chain")
    p.add_argument("--axiom", choices=("4", "5", "B"), required=True)
    p.add_argument("--check", action="store_true", help="bounded-check every step")
    add_budget_flags(p, atoms=False)
    p.set_defaults(fn=cmd_chain)

    p = sub.add_parser("prove", help="check a proof script")
    p.add_argument("script")
    p.add_argument("--strict", action="store_true", help="disallow the admissible REW rule")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("transform", help="model constructions with optional preservation check")
    p.add_argument("operation", choices=("closure", "generate", "cone"))
    p.add_argument("model")
    p.add_argument("state", nargs="?")
    p.add_argument("--verify", action="store_true", help="check truth preservation on shared states")
    add_budget_flags(p, corpus=True)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("verify-paper", help="run the built-in regression battery")
    p.add_argument("--filter", default=None, help="glob over check ids")
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_verify_paper)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return 2 if exc.code not in (0,) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
