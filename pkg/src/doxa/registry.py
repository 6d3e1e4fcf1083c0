"""The built-in regression battery behind ``doxa verify-paper``.

Each check pins one documented claim about the logics (axiom soundness
on its frame class, strictness witnesses, expressivity and frame
undefinability evidence, translation chains, construction batteries,
golden proofs) together with the expected bounded verdict.  Outcomes
are ``pass``, ``fail``, or ``budget-insufficient`` when a search that
must find a witness was given fewer states than the smallest known
witness; the third outcome is never conflated with failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fnmatch import fnmatchcase
from importlib import resources
from typing import Callable, Sequence

from . import hilbert, oracle, semantics, transform
from .oracle import SearchBudget
from .semantics import Frame, Model, frame_class
from .syntax import Atom, Formula, Not, parse, print_formula, substitute

PASS = "pass"
FAIL = "fail"
BUDGET_INSUFFICIENT = "budget-insufficient"


@dataclass
class CheckOutcome:
    status: str
    detail: str


@dataclass(frozen=True)
class PaperCheck:
    id: str
    kind: str
    description: str
    expected: str
    runner: Callable[[int], CheckOutcome]


def _outcome(ok: bool, detail: str) -> CheckOutcome:
    return CheckOutcome(PASS if ok else FAIL, detail)


# ---------------------------------------------------------------------------
# Fixed frames and models used by several checks

# Two pointed models on reflexive total frames agreeing on p: a single
# reflexive p-state versus a reflexive pair {p, not-p} seeing each other.
REFLEXIVE_POINT = Model.of(["s"], [("s", "s")], {"p": ["s"]})
REFLEXIVE_PAIR = Model.of(
    ["s'", "t'"],
    [("s'", "s'"), ("s'", "t'"), ("t'", "s'"), ("t'", "t'")],
    {"p": ["s'"]},
)

# One reflexive point versus the three-state reflexive frame that breaks
# transitivity, Euclideanness, symmetry and the rest of the list.
POINT_FRAME = Frame.of(["s"], [("s", "s")])
SPRAWL_FRAME = Frame.of(
    ["u'", "s'", "t'"],
    [
        ("u'", "u'"),
        ("u'", "s'"),
        ("s'", "s'"),
        ("s'", "u'"),
        ("s'", "t'"),
        ("t'", "t'"),
    ],
)

UNDEFINABLE_PROPERTIES = (
    "transitive",
    "euclidean",
    "symmetric",
    "weakly-connected",
    "weakly-directed",
    "partial-functional",
    "narcissistic",
    "partially-narcissistic",
)


def _budget(max_states: int, atoms: Sequence[str] = ("p", "q", "r")) -> SearchBudget:
    return SearchBudget(max_states=max_states, atoms=tuple(atoms))


# ---------------------------------------------------------------------------
# Check constructors


def _bounded_valid(
    check_id: str, formula_text: str | Formula, class_expr: str, description: str
) -> PaperCheck:
    formula = parse(formula_text) if isinstance(formula_text, str) else formula_text
    fc = frame_class(class_expr)

    def run(max_states: int) -> CheckOutcome:
        report = oracle.valid_on(formula, fc, _budget(max_states))
        if report.countermodel_found:
            model, state = report.witness
            return _outcome(False, f"countermodel at {state}: {semantics.dump_model(model)}")
        return _outcome(True, f"no countermodel in {report.models_examined} models")

    return PaperCheck(
        check_id,
        "bounded-valid",
        description,
        f"no countermodel on {fc.describe()} frames within budget",
        run,
    )


def _countermodel_exists(
    check_id: str,
    formula_text: str,
    class_expr: str,
    min_states: int,
    description: str,
    aux: bool = False,
) -> PaperCheck:
    formula = parse(formula_text)
    fc = frame_class(class_expr)

    def run(max_states: int) -> CheckOutcome:
        search = oracle.aux_valid_on if aux else oracle.find_countermodel
        report = search(formula, fc, _budget(max_states))
        if report.countermodel_found:
            model, state = report.witness
            return _outcome(True, f"witness at {state}: {semantics.dump_model(model)}")
        if max_states < min_states:
            return CheckOutcome(
                BUDGET_INSUFFICIENT,
                f"smallest known witness has {min_states} states; budget allows {max_states}",
            )
        return _outcome(False, f"no witness found in {report.models_examined} models")

    return PaperCheck(
        check_id,
        "countermodel-exists",
        description,
        f"countermodel on {fc.describe()} frames",
        run,
    )


def _aux_valid(check_id: str, formula_text: str, description: str) -> PaperCheck:
    formula = parse(formula_text)

    def run(max_states: int) -> CheckOutcome:
        report = oracle.aux_valid_on(formula, semantics.ALL_FRAMES, _budget(max_states))
        if report.countermodel_found:
            model, state = report.witness
            return _outcome(False, f"aux countermodel at {state}: {semantics.dump_model(model)}")
        return _outcome(True, f"aux-valid in {report.models_examined} models")

    return PaperCheck(
        check_id, "bounded-valid", description, "no aux-semantics countermodel within budget", run
    )


def _chain_check(axiom: str) -> PaperCheck:
    def run(max_states: int) -> CheckOutcome:
        chain = transform.almost_def_chain(axiom)
        report = transform.check_chain(chain, _budget(max_states))
        bad = [i for i, step in enumerate(report.steps, 1) if step.countermodel_found]
        if bad:
            return _outcome(False, f"steps {bad} have countermodels")
        return _outcome(True, f"all {len(report.steps)} steps countermodel-free")

    return PaperCheck(
        f"chain-a{axiom.lower()}-steps",
        "chain",
        f"every consecutive pair of the A{axiom} rewrite chain is equivalent",
        "all steps countermodel-free within budget",
        run,
    )


def _battery_check(
    check_id: str, kind: str, description: str, runner: Callable[[int], oracle.BatteryReport]
) -> PaperCheck:
    def run(max_states: int) -> CheckOutcome:
        report = runner(max_states)
        if report.passed:
            return _outcome(True, f"{report.items_checked} cases checked")
        return _outcome(False, report.failure or "battery failure")

    return PaperCheck(check_id, kind, description, "battery passes", run)


def _proof_check(check_id: str, script: str, description: str) -> PaperCheck:
    def run(_max_states: int) -> CheckOutcome:
        proof = hilbert.parse_proof_script(load_proof_script(script))
        result = hilbert.check_proof(proof)
        if result.accepted:
            return _outcome(True, f"{len(proof.lines)} lines accepted")
        return _outcome(False, f"rejected at line {result.line}: {result.reason}")

    return PaperCheck(check_id, "proof", description, "proof accepted", run)


def load_proof_script(name: str) -> str:
    return (resources.files("doxa") / "proofs" / name).read_text()


GOLDEN_SCRIPTS = (
    "kw_conjunct_weakening.proof",
    "k5w_aq.proof",
    "kri_conjunct_weakening.proof",
)


def _mutation_sweep(_max_states: int) -> CheckOutcome:
    rejected = 0
    total = 0
    for script in GOLDEN_SCRIPTS:
        proof = hilbert.parse_proof_script(load_proof_script(script))
        for i, line in enumerate(proof.lines):
            mutated = list(proof.lines)
            mutated[i] = hilbert.ProofLine(line.index, Not(line.formula), line.justification)
            total += 1
            if not hilbert.check_proof(
                hilbert.Proof(proof.system, proof.premises, tuple(mutated))
            ).accepted:
                rejected += 1
    if rejected == total:
        return _outcome(True, f"all {total} single-line corruptions rejected")
    return _outcome(False, f"only {rejected} of {total} corruptions rejected")


def _derived_rule_outcome(builder: Callable[[int], hilbert.DerivedRule]) -> CheckOutcome:
    for n in range(4):
        rule = builder(n)
        result = hilbert.check_derived_rule(
            rule.witness.system, rule.premises, rule.conclusion, rule.witness
        )
        if not result.accepted:
            return _outcome(False, f"n={n} witness rejected at line {result.line}: {result.reason}")
    return _outcome(True, "witnesses for n in 0..3 accepted")


def _agreement_check() -> PaperCheck:
    def run(_max_states: int) -> CheckOutcome:
        budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
        report = oracle.agree_up_to(
            REFLEXIVE_POINT, "s", REFLEXIVE_PAIR, "s'", budget, modalities=("W",)
        )
        if report.agree:
            return _outcome(True, f"agree on {report.formulas_checked} formulas")
        return _outcome(False, f"distinguished by {print_formula(report.distinguishing)}")

    return PaperCheck(
        "s5-pair-w-agreement",
        "agreement",
        "the two reflexive pointed models agree on the box-free corpus",
        "agreement on the whole corpus",
        run,
    )


def _separation_check() -> PaperCheck:
    def run(_max_states: int) -> CheckOutcome:
        budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
        report = oracle.agree_up_to(
            REFLEXIVE_POINT, "s", REFLEXIVE_PAIR, "s'", budget, modalities=("W", "B")
        )
        if report.agree:
            return _outcome(False, "no distinguishing formula found with B in the language")
        witness = print_formula(report.distinguishing)
        if witness != "B p":
            return _outcome(False, f"first distinguishing formula is {witness}, expected B p")
        return _outcome(True, "separated by B p")

    return PaperCheck(
        "s5-pair-box-separation",
        "agreement",
        "adding the belief box separates the two pointed models, first witness B p",
        "disagreement with first witness B p",
        run,
    )


def _property_table_check() -> PaperCheck:
    def run(_max_states: int) -> CheckOutcome:
        wrong = [
            p
            for p in UNDEFINABLE_PROPERTIES
            if semantics.has_property(POINT_FRAME, p)
            == semantics.has_property(SPRAWL_FRAME, p)
        ]
        if wrong:
            return _outcome(False, f"frames do not differ on {wrong}")
        return _outcome(True, f"frames differ on all {len(UNDEFINABLE_PROPERTIES)} properties")

    return PaperCheck(
        "undefinability-property-table",
        "property-table",
        "the witness frame pair differs on each of the eight listed properties",
        "all eight properties differ",
        run,
    )


def _gap_check(prop: str) -> PaperCheck:
    def run(_max_states: int) -> CheckOutcome:
        budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
        report = oracle.definability_gap(POINT_FRAME, SPRAWL_FRAME, prop, budget)
        if not report.properties_differ:
            return _outcome(False, "frames agree on the property")
        if report.separating is not None:
            return _outcome(False, f"separated by {print_formula(report.separating)}")
        return _outcome(True, f"no separating formula among {report.formulas_checked}")

    return PaperCheck(
        f"frame-gap-{prop}",
        "definability-gap",
        f"{prop} differs on the frame pair but no corpus formula separates them",
        "property differs, no separating formula",
        run,
    )


# ---------------------------------------------------------------------------
# The registry

_A4 = "W q & W (p & q) -> W ((W r -> W (p & r)) & q)"
_A5 = "W q & ~W (p & q) -> W ((W r -> ~W (p & r)) & q)"
_AB = "W q & ~p -> W ((W r -> ~W (p & r)) & q)"
_STRONGER_A4 = "W q -> W ((W r -> W (p & r)) & q)"
_AQ = "W p -> W (~W q & p)"
_RI_CON = "IR p & ~p & IR q & ~q -> IR (p & q)"
_RI_4 = substitute(
    hilbert.SCHEMAS["RI-4"].template,
    {"phi": Atom("p"), "psi": Atom("q"), "chi": Atom("r")},
)


def _all_checks() -> tuple[PaperCheck, ...]:
    checks: list[PaperCheck] = [
        # Soundness battery: each axiom on its frame class.
        _bounded_valid("a1-sound-all", "W p -> ~p", "all", "A1: a false belief is false"),
        _bounded_valid(
            "a2-sound-all",
            "W p & W q -> W (p & q)",
            "all",
            "A2: false beliefs are closed under conjunction",
        ),
        _bounded_valid("ad-sound-serial", "~W F", "serial", "AD holds on serial frames"),
        _bounded_valid("at-sound-reflexive", "~W p", "reflexive", "AT holds on reflexive frames"),
        _bounded_valid("a4-sound-transitive", _A4, "transitive", "A4 holds on transitive frames"),
        _bounded_valid("a5-sound-euclidean", _A5, "euclidean", "A5 holds on Euclidean frames"),
        _bounded_valid("a4-sound-euclidean", _A4, "euclidean", "A4 holds on Euclidean frames too"),
        _bounded_valid(
            "stronger-a4-sound-euclidean",
            _STRONGER_A4,
            "euclidean",
            "the strengthening of A4 without the second guard holds on Euclidean frames",
        ),
        _bounded_valid("ab-sound-symmetric", _AB, "symmetric", "AB holds on symmetric frames"),
        _bounded_valid("ri-equ-sound-all", "IR p <-> IR ~p", "all", "RI-Equ holds everywhere"),
        _bounded_valid("ri-con-sound-all", _RI_CON, "all", "RI-Con holds everywhere"),
        _bounded_valid(
            "ri-d-sound-serial-transitive", "~IR F", "serial+transitive", "RI-D on serial transitive frames"
        ),
        _bounded_valid(
            "ri-4-sound-serial-transitive", _RI_4, "serial+transitive", "RI-4 on serial transitive frames"
        ),
        # The guarded definability of the box.
        _bounded_valid(
            "almost-definability",
            "W q -> (B p <-> W (p & q))",
            "all",
            "under the guard W q the box is expressible through W",
        ),
        # Interdefinability of W and IR.
        _bounded_valid(
            "w-as-ir-interdefinable", "W p <-> (IR p & ~p)", "all", "W is definable from IR"
        ),
        _bounded_valid(
            "ir-as-w-interdefinable", "IR p <-> (W p | W ~p)", "all", "IR is definable from W"
        ),
        # W is false at reflexive states, for the whole corpus.
        _battery_check(
            "wrong-false-at-reflexive",
            "bounded-valid",
            "W g fails at every reflexive state of every model, for every corpus g",
            lambda n: oracle.wrong_false_at_reflexive(n),
        ),
        # Strictness battery: these need countermodels.
        _countermodel_exists(
            "stronger-a4-invalid-transitive",
            _STRONGER_A4,
            "transitive",
            3,
            "the strengthened A4 fails on some transitive frame",
        ),
        _countermodel_exists("ad-invalid-all", "~W F", "all", 1, "AD fails without seriality"),
        _countermodel_exists("at-invalid-all", "~W p", "all", 1, "AT fails without reflexivity"),
        _countermodel_exists(
            "aq-invalid-all", _AQ, "all", 2, "AQ fails on some frame (it needs Euclideanness)"
        ),
        # Auxiliary semantics: the incompleteness witness.
        _countermodel_exists(
            "aux-ri-equ-invalid",
            "IR p <-> IR ~p",
            "all",
            1,
            "RI-Equ fails under the auxiliary reading of IR",
            aux=True,
        ),
        _aux_valid(
            "aux-ri-con-valid", _RI_CON, "RI-Con holds under the auxiliary reading"
        ),
        _aux_valid(
            "aux-a0-valid",
            "(IR p & ~p -> IR p) & (IR p | ~IR p)",
            "tautology instances hold under the auxiliary reading",
        ),
        _aux_valid(
            "aux-derived-rules-valid",
            "(IR (p & q) & ~(p & q) -> IR p | p) & (IR p & ~p -> IR p | p)",
            "samples derived by the IR rule hold under the auxiliary reading",
        ),
        # Translation chains.
        _chain_check("4"),
        _chain_check("5"),
        _chain_check("B"),
        # Expressivity.
        _agreement_check(),
        _separation_check(),
        # Frame undefinability.
        _property_table_check(),
        *[_gap_check(p) for p in UNDEFINABLE_PROPERTIES],
        # Model constructions.
        _battery_check(
            "euclidean-closure-battery",
            "preservation",
            "closure of secondarily reflexive models is Euclidean and truth-preserving",
            lambda n: transform.closure_battery(n),
        ),
        _battery_check(
            "generated-submodel-battery",
            "preservation",
            "generated submodels keep the listed frame properties",
            lambda n: transform.submodel_property_battery(n),
        ),
        _battery_check(
            "cone-augment-battery",
            "preservation",
            "cone augmentation keeps transitivity, gains Euclideanness, preserves truth",
            lambda n: transform.cone_battery(n),
        ),
        # Interdefinability rewrites preserve truth.
        _battery_check(
            "translation-w2ri-preserves",
            "preservation",
            "the W-to-IR rewrite preserves truth on the corpus",
            lambda n: transform.translation_battery("w2ri", n),
        ),
        _battery_check(
            "translation-ri2w-preserves",
            "preservation",
            "the IR-to-W rewrite preserves truth on the corpus",
            lambda n: transform.translation_battery("ri2w", n),
        ),
        _battery_check(
            "translation-roundtrip-semantic",
            "preservation",
            "the round trip through IR is semantically the identity",
            lambda n: transform.translation_battery("roundtrip", n),
        ),
        # Golden proofs.
        _proof_check(
            "proof-kw-conjunct-weakening",
            "kw_conjunct_weakening.proof",
            "the conjunct-weakening rule witness in KW",
        ),
        _proof_check("proof-k5w-aq", "k5w_aq.proof", "the AQ derivation in K5W"),
        _proof_check(
            "proof-kri-conjunct-weakening",
            "kri_conjunct_weakening.proof",
            "the conjunct-weakening rule witness in KRI",
        ),
        PaperCheck(
            "derived-rule-w-conjunctions",
            "proof",
            "the n-indexed conjunction rule in KW, witnesses for n in 0..3",
            "all witnesses accepted",
            lambda n: _derived_rule_outcome(hilbert.conjunction_rule_w),
        ),
        PaperCheck(
            "derived-rule-ri-conjunctions",
            "proof",
            "the n-indexed conjunction rule in KRI, witnesses for n in 0..3",
            "all witnesses accepted",
            lambda n: _derived_rule_outcome(hilbert.conjunction_rule_ri),
        ),
        PaperCheck(
            "proof-mutation-sweep",
            "proof",
            "every single-line corruption of a golden proof is rejected",
            "all corruptions rejected",
            _mutation_sweep,
        ),
    ]
    ids = [c.id for c in checks]
    assert len(ids) == len(set(ids)), "duplicate check ids"
    return tuple(checks)


_CHECKS: tuple[PaperCheck, ...] | None = None


def all_checks() -> tuple[PaperCheck, ...]:
    global _CHECKS
    if _CHECKS is None:
        _CHECKS = _all_checks()
    return _CHECKS


def run_checks(
    max_states: int = 3, pattern: str | None = None
) -> list[tuple[PaperCheck, CheckOutcome]]:
    """Run the registry (optionally filtered by an id glob), in registry order."""
    selected = [
        c for c in all_checks() if pattern is None or fnmatchcase(c.id, pattern)
    ]
    return [(c, c.runner(max_states)) for c in selected]
