"""Syntactic translations and truth-preserving model constructions.

The translation chains rewrite the familiar box axioms 4, 5 and B into
the box-free language step by step; each consecutive pair of lines is
biconditionally valid, which ``check_chain`` verifies by bounded search.
The model constructions (Euclidean closure, generated submodel, cone
augmentation) come with ``verify_preservation`` so nothing is taken on
faith.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import oracle, semantics
from .oracle import SearchBudget, VerdictReport
from .semantics import ALL_FRAMES, Frame, LanguageError, Model, has_property
from .syntax import (
    FI,
    IR,
    And,
    Atom,
    Bot,
    Box,
    Formula,
    Iff,
    Not,
    Or,
    Top,
    W,
    parse,
    print_formula,
)


def w_to_ri(f: Formula) -> Formula:
    """Rewrite each W g into IR g' & ~g', innermost first."""
    if isinstance(f, (Box, FI)):
        raise LanguageError(f"{f} is outside the W-language")
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(w_to_ri(f.arg))
    if isinstance(f, W):
        inner = w_to_ri(f.arg)
        return And(IR(inner), Not(inner))
    if isinstance(f, IR):
        return IR(w_to_ri(f.arg))
    return type(f)(w_to_ri(f.left), w_to_ri(f.right))


def ri_to_w(f: Formula) -> Formula:
    """Rewrite each IR g into W g' | W ~g', innermost first."""
    if isinstance(f, (Box, W, FI)):
        raise LanguageError(f"{f} is outside the IR-language")
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(ri_to_w(f.arg))
    if isinstance(f, IR):
        inner = ri_to_w(f.arg)
        return Or(W(inner), W(Not(inner)))
    return type(f)(ri_to_w(f.left), ri_to_w(f.right))


# ---------------------------------------------------------------------------
# Translation chains


@dataclass(frozen=True)
class TranslationChain:
    name: str
    lines: tuple[Formula, ...]

    @property
    def final(self) -> Formula:
        return self.lines[-1]


_CHAIN_LINES = {
    "4": (
        "W q -> (B p -> B (W r -> B p))",
        "W q -> (W (p & q) -> W ((W r -> B p) & q))",
        "W q -> (W (p & q) -> W ((W r -> W (p & r)) & q))",
        "W q & W (p & q) -> W ((W r -> W (p & r)) & q)",
    ),
    "5": (
        "W q -> (~B p -> B (W r -> ~B p))",
        "W q -> (~W (p & q) -> W ((W r -> ~B p) & q))",
        "W q -> (~W (p & q) -> W ((W r -> ~W (p & r)) & q))",
        "W q & ~W (p & q) -> W ((W r -> ~W (p & r)) & q)",
    ),
    "B": (
        "W q -> (~p -> B (W r -> ~B p))",
        "W q -> (~p -> W ((W r -> ~B p) & q))",
        "W q -> (~p -> W ((W r -> ~W (p & r)) & q))",
        "W q & ~p -> W ((W r -> ~W (p & r)) & q)",
    ),
}


def almost_def_chain(axiom: str) -> TranslationChain:
    """The guarded rewrite of box axiom 4, 5 or B down to the W-language.

    Line 1 states the box axiom under the guard W q; the following lines
    replace box subformulas by their guarded W-equivalents; the last line
    is the box-free axiom (A4, A5, AB).
    """
    key = str(axiom)
    if key not in _CHAIN_LINES:
        raise ValueError(f"unknown chain {axiom!r}; expected one of 4, 5, B")
    return TranslationChain(
        name=f"A{key}-chain", lines=tuple(parse(s) for s in _CHAIN_LINES[key])
    )


@dataclass
class ChainReport:
    chain: TranslationChain
    steps: list[VerdictReport]

    @property
    def passed(self) -> bool:
        return all(not s.countermodel_found for s in self.steps)


def check_chain(chain: TranslationChain, budget: SearchBudget = SearchBudget()) -> ChainReport:
    """Bounded equivalence check of each consecutive pair of chain lines."""
    steps = [
        oracle.valid_on(Iff(a, b), ALL_FRAMES, budget)
        for a, b in zip(chain.lines, chain.lines[1:])
    ]
    return ChainReport(chain, steps)


# ---------------------------------------------------------------------------
# Model constructions


def _with_relation(m: Model, relation: frozenset[tuple[str, str]]) -> Model:
    return Model(Frame(m.frame.states, relation), m.valuation)


def euclidean_closure(m: Model) -> Model:
    """Add every pair (y, z) whose ends both have an incoming edge.

    The result is always Euclidean.  Truth of W-language formulas is
    preserved when the input is secondarily reflexive; use
    ``verify_preservation`` to check a particular model.
    """
    targets = {y for _, y in m.frame.relation}
    added = {(y, z) for y in targets for z in targets}
    return _with_relation(m, m.frame.relation | added)


def generated_submodel(m: Model, state: str) -> Model:
    """Restriction to the states reachable from ``state`` (inclusive)."""
    if state not in m.frame.successor_map:
        raise semantics.UnknownStateError(state)
    reached = {state}
    frontier = [state]
    while frontier:
        s = frontier.pop()
        for t in m.frame.successor_map[s]:
            if t not in reached:
                reached.add(t)
                frontier.append(t)
    states = tuple(s for s in m.frame.states if s in reached)
    relation = frozenset(p for p in m.frame.relation if p[0] in reached and p[1] in reached)
    valuation = {a: v & reached for a, v in m.valuation.items()}
    return Model(Frame(states, relation), valuation)


@dataclass(frozen=True)
class ConeSpec:
    """A root together with its successor cone."""

    root: str
    cone: frozenset[str]

    @staticmethod
    def of(m: Model, root: str) -> "ConeSpec":
        if root not in m.frame.successor_map:
            raise semantics.UnknownStateError(root)
        return ConeSpec(root, frozenset(m.frame.successor_map[root]))


def cone_augment(m: Model, state: str) -> Model:
    """Add all pairs within the successor cone of ``state``.

    Intended for transitive, secondarily reflexive models generated by
    ``state``; on those the result is transitive and Euclidean, which the
    batteries re-check rather than assume.
    """
    cone = ConeSpec.of(m, state).cone
    added = {(y, z) for y in cone for z in cone}
    return _with_relation(m, m.frame.relation | added)


@dataclass
class PreservationReport:
    ok: bool
    state: str | None
    formula: Formula | None
    formulas_checked: int


def verify_preservation(
    m1: Model,
    m2: Model,
    states: tuple[str, ...] | None = None,
    budget: SearchBudget = SearchBudget(atoms=("p",)),
) -> PreservationReport:
    """Truth agreement between two models on shared states, over the corpus.

    Reports the first (state, formula) violation in corpus order if any.
    """
    if states is None:
        shared = set(m1.frame.states) & set(m2.frame.states)
        states = tuple(s for s in m1.frame.states if s in shared)
    else:
        for s in states:
            if s not in m1.frame.successor_map or s not in m2.frame.successor_map:
                raise semantics.UnknownStateError(s)
    checked = 0
    for f in oracle.corpus_for(budget):
        checked += 1
        for s in states:
            if semantics.evaluate(m1, s, f) != semantics.evaluate(m2, s, f):
                return PreservationReport(False, s, f, checked)
    return PreservationReport(True, None, None, checked)


# ---------------------------------------------------------------------------
# Exhaustive construction batteries (bit-parallel over valuations)


def _first_disagreement(
    ev1: oracle.FrameEvaluator, ev2: oracle.FrameEvaluator, f: Formula
) -> tuple[int, int] | None:
    """First (valuation, state index) where truth differs; None if none.

    Both evaluators must carry the same state tuple and atoms, so
    valuation indices line up on both sides.
    """
    best = None
    for i, (a, b) in enumerate(zip(ev1.columns(f), ev2.columns(f))):
        diff = a ^ b
        if diff:
            v = (diff & -diff).bit_length() - 1
            if best is None or (v, i) < best:
                best = (v, i)
    return best


def closure_battery(
    max_states: int = 4, budget: SearchBudget = SearchBudget(atoms=("p",))
) -> oracle.BatteryReport:
    """Over all secondarily reflexive models: closure is Euclidean and
    preserves the corpus at every state."""
    corpus = oracle.corpus_for(budget)
    checked = 0
    for frame in oracle.frames_up_to(max_states):
        if not has_property(frame, "secondarily-reflexive"):
            continue
        closed = euclidean_closure(Model(frame)).frame
        checked += 1
        if not has_property(closed, "euclidean"):
            return oracle.BatteryReport(
                "euclidean-closure", checked, f"closure of {frame} not Euclidean"
            )
        ev1 = oracle.FrameEvaluator(frame, budget.atoms)
        ev2 = oracle.FrameEvaluator(closed, budget.atoms)
        for f in corpus:
            spot = _first_disagreement(ev1, ev2, f)
            if spot is not None:
                model = oracle.model_at(frame, budget.atoms, spot[0])
                state = frame.states[spot[1]]
                return oracle.BatteryReport(
                    "euclidean-closure",
                    checked,
                    f"{print_formula(f)} changes truth at {state} of {semantics.dump_model(model)}",
                )
    return oracle.BatteryReport("euclidean-closure", checked)


def cone_battery(
    max_states: int = 4, budget: SearchBudget = SearchBudget(atoms=("p",))
) -> oracle.BatteryReport:
    """Over all transitive, secondarily reflexive models generated by a root:
    cone augmentation is transitive and Euclidean and preserves the corpus."""
    corpus = oracle.corpus_for(budget)
    checked = 0
    for frame in oracle.frames_up_to(max_states):
        if not (
            has_property(frame, "transitive")
            and has_property(frame, "secondarily-reflexive")
        ):
            continue
        ev1 = None
        for root in frame.states:
            base = Model(frame)
            if generated_submodel(base, root).frame != frame:
                continue
            checked += 1
            augmented = cone_augment(base, root).frame
            if not has_property(augmented, "transitive") or not has_property(
                augmented, "euclidean"
            ):
                return oracle.BatteryReport(
                    "cone-augment",
                    checked,
                    f"augmentation of {frame} at {root} lost transitivity or Euclideanness",
                )
            if ev1 is None:
                ev1 = oracle.FrameEvaluator(frame, budget.atoms)
            ev2 = oracle.FrameEvaluator(augmented, budget.atoms)
            for f in corpus:
                spot = _first_disagreement(ev1, ev2, f)
                if spot is not None:
                    model = oracle.model_at(frame, budget.atoms, spot[0])
                    state = frame.states[spot[1]]
                    return oracle.BatteryReport(
                        "cone-augment",
                        checked,
                        f"{print_formula(f)} changes truth at {state} of {semantics.dump_model(model)}",
                    )
    return oracle.BatteryReport("cone-augment", checked)


_SUBMODEL_PROPERTIES = (
    "reflexive",
    "serial",
    "transitive",
    "euclidean",
    "symmetric",
    "secondarily-reflexive",
)


def submodel_property_battery(max_states: int = 4) -> oracle.BatteryReport:
    """Generated submodels keep each listed frame property."""
    checked = 0
    for frame in oracle.frames_up_to(max_states):
        held = [p for p in _SUBMODEL_PROPERTIES if has_property(frame, p)]
        if not held:
            continue
        base = Model(frame)
        for root in frame.states:
            sub = generated_submodel(base, root).frame
            checked += 1
            for p in held:
                if not has_property(sub, p):
                    return oracle.BatteryReport(
                        "generated-submodel-properties",
                        checked,
                        f"{p} lost by the submodel of {frame} at {root}",
                    )
    return oracle.BatteryReport("generated-submodel-properties", checked)


def translation_battery(
    direction: str, max_states: int = 3, budget: SearchBudget = SearchBudget(atoms=("p",))
) -> oracle.BatteryReport:
    """Truth preservation of the interdefinability rewrites on the corpus.

    ``direction`` is ``w2ri``, ``ri2w`` or ``roundtrip``.
    """
    if direction == "w2ri":
        pairs = [(f, w_to_ri(f)) for f in oracle.corpus_for(budget, ("W",))]
    elif direction == "ri2w":
        pairs = [(f, ri_to_w(f)) for f in oracle.corpus_for(budget, ("IR",))]
    elif direction == "roundtrip":
        pairs = [(f, ri_to_w(w_to_ri(f))) for f in oracle.corpus_for(budget, ("W",))]
    else:
        raise ValueError(f"unknown direction {direction!r}")
    name = f"translation-{direction}"
    checked = 0
    for frame in oracle.frames_up_to(max_states):
        ev = oracle.FrameEvaluator(frame, budget.atoms)
        for f, g in pairs:
            checked += 1
            cf, cg = ev.columns(f), ev.columns(g)
            bad = None
            for i, (a, b) in enumerate(zip(cf, cg)):
                diff = a ^ b
                if diff:
                    v = (diff & -diff).bit_length() - 1
                    if bad is None or (v, i) < bad:
                        bad = (v, i)
            if bad is not None:
                model = oracle.model_at(frame, budget.atoms, bad[0])
                state = frame.states[bad[1]]
                return oracle.BatteryReport(
                    name,
                    checked,
                    f"{print_formula(f)} vs {print_formula(g)} differ at {state} of {semantics.dump_model(model)}",
                )
    return oracle.BatteryReport(name, checked)
