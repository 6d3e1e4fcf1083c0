import json

import pytest

from doxa.cli import main
from doxa.registry import load_proof_script
from doxa.semantics import Model, dump_model

PAIR = Model.of(
    ["s1", "t1"],
    [("s1", "s1"), ("s1", "t1"), ("t1", "s1"), ("t1", "t1")],
    {"p": ["s1"]},
)


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(dump_model(PAIR, designated="s1"))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_box_false(pair_file, capsys):
    code, out, _ = run(capsys, "eval", pair_file, "s1", "B p")
    assert code == 0 and out.strip() == "false"


def test_eval_uses_designated_state(pair_file, capsys):
    code, out, _ = run(capsys, "eval", pair_file, "W p | ~W p")
    assert code == 0 and out.strip() == "true"


def test_eval_dead_end(tmp_path, capsys):
    path = tmp_path / "dead.json"
    path.write_text(dump_model(Model.of(["s"], [], {})))
    code, out, _ = run(capsys, "eval", str(path), "s", "W F")
    assert code == 0 and out.strip() == "true"


def test_eval_ir(tmp_path, capsys):
    path = tmp_path / "two.json"
    path.write_text(dump_model(Model.of(["s", "t"], [("s", "t")], {"p": ["t"]})))
    code, out, _ = run(capsys, "eval", str(path), "s", "IR p")
    assert code == 0 and out.strip() == "true"


def test_eval_errors(pair_file, capsys, tmp_path):
    code, _, err = run(capsys, "eval", pair_file, "zz", "p")
    assert code == 2 and "unknown state" in err
    code, _, err = run(capsys, "eval", pair_file, "s1", "p &")
    assert code == 2 and "bad formula" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": ["s"], "relation": [], "valuation": {}, "x": 1}')
    code, _, err = run(capsys, "eval", str(bad), "s", "p")
    assert code == 2 and "unknown fields" in err
    code, _, err = run(capsys, "eval", str(tmp_path / "none.json"), "s", "p")
    assert code == 2


def test_valid_exit_codes(capsys):
    code, out, _ = run(capsys, "valid", "W p -> ~p", "--max-states", "3")
    assert code == 0 and "no-countermodel-up-to-budget" in out
    code, out, _ = run(capsys, "valid", "~W F", "--max-states", "1")
    assert code == 1 and "countermodel-found" in out
    code, _, err = run(capsys, "valid", "p", "--class", "shiny")
    assert code == 2


def test_valid_a5_on_euclidean(capsys):
    code, out, _ = run(
        capsys,
        "valid",
        "W q & ~W (p & q) -> W ((W r -> ~W (p & r)) & q)",
        "--class",
        "euclidean",
        "--max-states",
        "3",
    )
    assert code == 0


def test_counter_witness_json_pipes_back_into_eval(tmp_path, capsys):
    code, out, _ = run(
        capsys, "counter", "~W F", "--max-states", "1", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "countermodel-found"
    witness = tmp_path / "witness.json"
    witness.write_text(json.dumps(doc["witness"]))
    code, out, _ = run(capsys, "eval", str(witness), "~W F")
    assert code == 0 and out.strip() == "false"


def test_counter_not_found_exits_one(capsys):
    code, _, _ = run(capsys, "counter", "p -> p", "--max-states", "2")
    assert code == 1


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "W p", "--direction", "w2ri")
    assert code == 0 and out.strip() == "IR p & ~p"
    code, out, _ = run(capsys, "translate", "IR p", "--direction", "ri2w")
    assert code == 0 and out.strip() == "W p | W ~p"
    code, _, err = run(capsys, "translate", "B p", "--direction", "w2ri")
    assert code == 2 and "outside" in err


def test_chain(capsys):
    code, out, _ = run(capsys, "chain", "--axiom", "4", "--check", "--max-states", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7  # 4 chain lines + 3 step verdicts
    assert lines[3].endswith("W q & W (p & q) -> W ((W r -> W (p & r)) & q)")
    assert all("equivalent-up-to-budget" in l for l in lines[4:])


def test_prove_golden_and_corrupted(tmp_path, capsys):
    script = tmp_path / "aq.proof"
    script.write_text(load_proof_script("k5w_aq.proof"))
    code, out, _ = run(capsys, "prove", str(script))
    assert code == 0 and "accepted" in out

    code, out, _ = run(capsys, "prove", str(script), "--strict")
    assert code == 1 and "rejected at line 7" in out

    corrupted = load_proof_script("k5w_aq.proof").replace(
        "2. W q -> ~q ; A1{phi:=q}", "2. W q -> ~p ; A1{phi:=q}"
    )
    bad = tmp_path / "bad.proof"
    bad.write_text(corrupted)
    code, out, _ = run(capsys, "prove", str(bad))
    assert code == 1 and "line 2" in out

    code, _, err = run(capsys, "prove", str(tmp_path / "nope.proof"))
    assert code == 2


def test_transform_closure_verify(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(
        dump_model(
            Model.of(
                ["a", "b", "c"],
                [("a", "b"), ("a", "c"), ("b", "b"), ("c", "c")],
                {"p": ["b"]},
            )
        )
    )
    code, out, _ = run(capsys, "transform", "closure", str(path), "--verify", "--size", "5")
    assert code == 0 and "preservation: ok" in out


def test_transform_generate(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(dump_model(Model.of(["s", "t", "u"], [("s", "t"), ("t", "u")], {})))
    code, out, _ = run(capsys, "transform", "generate", str(path), "t")
    assert code == 0
    doc = json.loads(out[: out.rindex("}") + 1])
    assert doc["states"] == ["t", "u"]


def test_transform_closure_violation_exits_one(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(dump_model(Model.of(["a", "b"], [("a", "b")], {"p": []})))
    code, out, _ = run(capsys, "transform", "closure", str(path), "--verify", "--size", "5")
    assert code == 1 and "violated" in out


def test_transform_needs_root(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(dump_model(Model.of(["s"], [], {})))
    code, _, err = run(capsys, "transform", "cone", str(path))
    assert code == 2 and "needs a state" in err


def test_verify_paper_filter_and_budget(capsys):
    code, out, _ = run(
        capsys, "verify-paper", "--filter", "frame-gap-*", "--max-states", "3"
    )
    assert code == 0
    body = [l for l in out.splitlines() if l.startswith("[")]
    assert len(body) == 8 and all("PASS" in l for l in body)

    code, out, _ = run(
        capsys,
        "verify-paper",
        "--filter",
        "stronger-a4-invalid*",
        "--max-states",
        "1",
    )
    assert code == 0  # budget-insufficient is not a failure
    assert "BUDGET" in out and "FAIL" not in out


def test_verify_paper_env_budget(capsys, monkeypatch):
    monkeypatch.setenv("DOXA_MAX_STATES", "2")
    code, out, _ = run(capsys, "verify-paper", "--filter", "a1-sound-all")
    assert code == 0 and "max states 2" in out
    monkeypatch.setenv("DOXA_MAX_STATES", "zero")
    code, _, err = run(capsys, "verify-paper", "--filter", "a1-sound-all")
    assert code == 2


def test_verify_paper_json_deterministic(capsys):
    code1, out1, _ = run(
        capsys, "verify-paper", "--filter", "chain-*", "--format", "json"
    )
    code2, out2, _ = run(
        capsys, "verify-paper", "--filter", "chain-*", "--format", "json"
    )
    assert code1 == code2 == 0
    assert out1 == out2
    entries = json.loads(out1)
    assert [e["id"] for e in entries] == [
        "chain-a4-steps",
        "chain-a5-steps",
        "chain-ab-steps",
    ]


def test_usage_error_exit_code(capsys):
    assert main(["valid"]) == 2  # missing formula
    assert main(["no-such-command"]) == 2
