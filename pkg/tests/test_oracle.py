import pytest

from doxa.oracle import (
    COUNTERMODEL,
    NO_COUNTERMODEL,
    BudgetError,
    FrameEvaluator,
    SearchBudget,
    agree_up_to,
    aux_valid_on,
    definability_gap,
    enumerate_formulas,
    enumerate_frames,
    enumerate_models,
    find_countermodel,
    frames_up_to,
    model_at,
    valid_on,
    wrong_false_at_reflexive,
)
from doxa.semantics import Frame, Model, evaluate, evaluate_aux, frame_class
from doxa.syntax import parse, print_formula

POINT = Model.of(["s"], [("s", "s")], {"p": ["s"]})
PAIR = Model.of(
    ["s1", "t1"],
    [("s1", "s1"), ("s1", "t1"), ("t1", "s1"), ("t1", "t1")],
    {"p": ["s1"]},
)


def test_enumerate_frames_counts():
    assert sum(1 for _ in enumerate_frames(1)) == 2
    assert sum(1 for _ in enumerate_frames(2)) == 18
    assert sum(1 for f in enumerate_frames(3) if len(f.states) == 3) == 512


def test_enumerate_frames_deterministic_order():
    first = list(enumerate_frames(2))
    second = list(enumerate_frames(2))
    assert first == second
    assert first[0].relation == frozenset()
    assert first[1].relation == {("s1", "s1")}


def test_enumerate_models_counts():
    one = Frame.of(["a"], [])
    assert sum(1 for _ in enumerate_models(one, ["p"])) == 2
    two = Frame.of(["a", "b"], [])
    assert sum(1 for _ in enumerate_models(two, ["p", "q"])) == 16
    three = Frame.of(["a", "b", "c"], [])
    assert sum(1 for _ in enumerate_models(three, ["p", "q", "r"])) == 512


def test_valid_on_a1():
    report = valid_on(parse("W p -> ~p"))
    assert report.verdict == NO_COUNTERMODEL
    assert report.frames_examined == 530


def test_valid_on_dead_end_refutes_ad():
    report = valid_on(parse("~W F"), budget=SearchBudget(max_states=1))
    assert report.verdict == COUNTERMODEL
    model, state = report.witness
    assert model.frame.relation == frozenset()
    assert evaluate(model, state, parse("~W F")) is False


def test_valid_on_a5_euclidean():
    report = valid_on(
        parse("W q & ~W (p & q) -> W ((W r -> ~W (p & r)) & q)"),
        frame_class("euclidean"),
    )
    assert report.verdict == NO_COUNTERMODEL


def test_valid_on_missing_budget_atoms():
    with pytest.raises(BudgetError):
        valid_on(parse("W zz"), budget=SearchBudget(atoms=("p",)))


def test_find_countermodel_stronger_a4_on_transitive():
    f = parse("W q -> W ((W r -> W (p & r)) & q)")
    report = find_countermodel(f, frame_class("transitive"))
    assert report.verdict == COUNTERMODEL
    model, state = report.witness
    assert frame_class("transitive").contains(model.frame)
    assert evaluate(model, state, f) is False
    # the pinned witness from a hand check also refutes it
    hand = Model.of(
        ["s", "t", "u"],
        [("s", "t"), ("t", "u"), ("s", "u")],
        {"q": ["t", "u"], "r": ["u"], "p": []},
    )
    assert evaluate(hand, "s", f) is False


def test_find_countermodel_aq():
    f = parse("W p -> W (~W q & p)")
    report = find_countermodel(f)
    assert report.verdict == COUNTERMODEL
    model, state = report.witness
    assert evaluate(model, state, f) is False
    hand = Model.of(
        ["s", "t"], [("s", "t"), ("t", "s")], {"p": ["t"], "q": ["s"]}
    )
    assert evaluate(hand, "s", f) is False


def test_find_countermodel_tautology():
    report = find_countermodel(parse("p -> p"), budget=SearchBudget(max_states=2))
    assert report.verdict == NO_COUNTERMODEL


def test_search_is_deterministic_and_monotone():
    f = parse("W q -> W ((W r -> W (p & r)) & q)")
    small = find_countermodel(f, frame_class("transitive"), SearchBudget(max_states=3))
    again = find_countermodel(f, frame_class("transitive"), SearchBudget(max_states=3))
    larger = find_countermodel(f, frame_class("transitive"), SearchBudget(max_states=4))
    assert small.witness == again.witness == larger.witness


def test_almost_definability_bounded_fact():
    report = valid_on(parse("W q -> (B p <-> W (p & q))"))
    assert report.verdict == NO_COUNTERMODEL


# --- formula corpus --------------------------------------------------------


def test_corpus_order_and_membership():
    corpus = enumerate_formulas(("p",), 2, 3)
    texts = [print_formula(f) for f in corpus]
    assert texts[0] == "p"
    assert texts[1:3] == ["W p", "~p"]  # size 2, lexicographic
    assert "W W p" in texts and "W W W p" not in texts
    from doxa.syntax import size as fsize

    fsizes = [fsize(f) for f in corpus]
    assert fsizes == sorted(fsizes)


def test_corpus_depth_bound():
    corpus = enumerate_formulas(("p",), 1, 4)
    from doxa.syntax import modal_depth

    assert all(modal_depth(f) <= 1 for f in corpus)


def test_corpus_with_box_modality():
    corpus = enumerate_formulas(("p",), 1, 2, modalities=("W", "B"))
    texts = [print_formula(f) for f in corpus]
    assert texts == ["p", "B p", "W p", "~p"]


# --- agreement -------------------------------------------------------------


def test_agree_up_to_w_language():
    budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
    report = agree_up_to(POINT, "s", PAIR, "s1", budget)
    assert report.agree and report.distinguishing is None


def test_agree_up_to_with_box_disagrees():
    budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
    report = agree_up_to(POINT, "s", PAIR, "s1", budget, modalities=("W", "B"))
    assert not report.agree
    assert print_formula(report.distinguishing) == "B p"


def test_agree_up_to_self():
    budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=1, max_size=4)
    report = agree_up_to(PAIR, "t1", PAIR, "t1", budget, modalities=("W", "B"))
    assert report.agree


# --- definability ----------------------------------------------------------

F_POINT = Frame.of(["s"], [("s", "s")])
F_SPRAWL = Frame.of(
    ["u", "s", "t"],
    [("u", "u"), ("u", "s"), ("s", "s"), ("s", "u"), ("s", "t"), ("t", "t")],
)


def test_definability_gap_transitivity():
    budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
    report = definability_gap(F_POINT, F_SPRAWL, "transitive", budget)
    assert report.properties_differ
    assert report.separating is None


def test_definability_gap_euclidean():
    budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=2, max_size=7)
    report = definability_gap(F_POINT, F_SPRAWL, "euclidean", budget)
    assert report.properties_differ
    assert report.separating is None


def test_definability_gap_degenerate():
    budget = SearchBudget(max_states=3, atoms=("p",), max_modal_depth=1, max_size=3)
    report = definability_gap(F_POINT, F_POINT, "transitive", budget)
    assert report.degenerate


def test_frame_validity():
    from doxa.oracle import frame_validity

    # both witness frames are reflexive, so ~W p is frame-valid on both
    assert frame_validity(parse("~W p"), F_POINT)
    assert frame_validity(parse("~W p"), F_SPRAWL)
    assert frame_validity(parse("W p -> ~p"), F_SPRAWL)
    assert not frame_validity(parse("p"), F_POINT)


# --- auxiliary semantics ---------------------------------------------------


def test_aux_ri_equ_fails():
    report = aux_valid_on(parse("IR p <-> IR ~p"), budget=SearchBudget(max_states=1))
    assert report.verdict == COUNTERMODEL
    model, state = report.witness
    assert evaluate_aux(model, state, parse("IR p <-> IR ~p")) is False


def test_aux_ri_con_holds():
    report = aux_valid_on(parse("IR p & ~p & IR q & ~q -> IR (p & q)"))
    assert report.verdict == NO_COUNTERMODEL


# --- the bit-parallel evaluator agrees with the reference one ---------------


def test_bit_columns_cross_validated_against_reference():
    corpus = enumerate_formulas(("p", "q"), 2, 4, modalities=("W", "B", "IR", "FI"))
    for frame in frames_up_to(2):
        ev = FrameEvaluator(frame, ("p", "q"))
        for f in corpus:
            cols = ev.columns(f)
            for v in range(ev.rows):
                model = model_at(frame, ("p", "q"), v)
                for i, s in enumerate(frame.states):
                    assert bool(cols[i] >> v & 1) == evaluate(model, s, f)


def test_bit_columns_cross_validated_aux():
    corpus = enumerate_formulas(("p",), 2, 4, modalities=("IR",))
    for frame in frames_up_to(2):
        ev = FrameEvaluator(frame, ("p",), aux=True)
        for f in corpus:
            cols = ev.columns(f)
            for v in range(ev.rows):
                model = model_at(frame, ("p",), v)
                for i, s in enumerate(frame.states):
                    assert bool(cols[i] >> v & 1) == evaluate_aux(model, s, f)


def test_bit_columns_sampled_three_states():
    frames = [fr for fr in frames_up_to(3) if len(fr.states) == 3][37::97]
    corpus = enumerate_formulas(("p",), 2, 5, modalities=("W", "IR"))[::5]
    for frame in frames:
        ev = FrameEvaluator(frame, ("p",))
        for f in corpus:
            cols = ev.columns(f)
            for v in range(ev.rows):
                model = model_at(frame, ("p",), v)
                for i, s in enumerate(frame.states):
                    assert bool(cols[i] >> v & 1) == evaluate(model, s, f)


def test_wrong_false_battery():
    report = wrong_false_at_reflexive(2)
    assert report.passed
