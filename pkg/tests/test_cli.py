"""End-to-end tests for the command-line interface.

Commands run in-process through main(); one subprocess test pins down
byte-identical output across interpreter runs.
"""

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from namelogic import Not, parse_formula
from namelogic.cli import main
from namelogic.kripke import check, model_from_dict, model_to_dict, random_model

FIGURE = str(Path(__file__).resolve().parent.parent / "figure1.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def run_json(capsys, *argv):
    code, captured = run(capsys, *argv)
    return code, json.loads(captured.out)


# ---------------------------------------------------------------------------
# check


def test_check_true_verdict(capsys):
    code, payload = run_json(
        capsys, "check", "--model", FIGURE, "--state", "w", "--formula", "S[n] p"
    )
    assert code == 0
    assert payload == {"value": True, "witness": "a"}


def test_check_false_verdict_with_path_witness(capsys):
    code, payload = run_json(
        capsys, "check", "--model", FIGURE, "--state", "v", "--formula", "C[m] !q"
    )
    assert code == 1
    assert payload["value"] is False
    path = payload["witness"]
    assert isinstance(path, list) and path[0] == "v" and len(path) >= 2


def test_check_missing_state_is_an_input_error(capsys):
    code, captured = run(capsys, "check", "--model", FIGURE, "--state", "zz", "--formula", "p")
    assert code == 2
    assert captured.out == ""
    assert "error:" in captured.err


def test_check_unreadable_model_is_an_input_error(capsys, tmp_path):
    bogus = tmp_path / "nope.json"
    code, captured = run(capsys, "check", "--model", str(bogus), "--state", "w", "--formula", "p")
    assert code == 2
    assert "error:" in captured.err


# ---------------------------------------------------------------------------
# sat / valid


def test_sat_unsat_exit_code(capsys):
    code, payload = run_json(capsys, "sat", "--formula", "S[n] p & !p")
    assert code == 1
    assert payload["verdict"] == "unsat"
    assert payload["model"] is None and payload["state"] is None


def test_sat_model_reverifies_through_the_library(capsys):
    chi = "S[n] p & !E[n] p"
    code, payload = run_json(capsys, "sat", "--formula", chi)
    assert code == 0
    assert payload["verdict"] == "sat"
    m = model_from_dict(payload["model"])
    assert check(m, payload["state"], parse_formula(chi)).value is True


def test_sat_fragment_violation_without_oracle(capsys):
    code, captured = run(capsys, "sat", "--formula", "D[n] p")
    assert code == 2
    assert "error:" in captured.err


def test_sat_oracle_route_handles_pooled_knowledge(capsys):
    code, payload = run_json(
        capsys, "sat", "--formula", "D[n] p", "--oracle", "--bounds", "2,2"
    )
    assert code == 0
    assert payload["verdict"] == "sat"
    m = model_from_dict(payload["model"])
    assert check(m, payload["state"], parse_formula("D[n] p")).value is True


def test_sat_oracle_miss_is_a_negative_verdict(capsys):
    code, payload = run_json(
        capsys, "sat", "--formula", "S[n] p & !p", "--oracle", "--bounds", "2,2"
    )
    assert code == 1
    assert payload["verdict"] == "sat-bounded-unknown"


def test_sat_bounds_require_the_oracle(capsys):
    code, captured = run(capsys, "sat", "--formula", "p", "--bounds", "2,2")
    assert code == 2
    assert "error:" in captured.err


def test_sat_malformed_bounds_are_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sat", "--formula", "p", "--oracle", "--bounds", "two"])
    assert exc.value.code == 2


def test_valid_affirmative(capsys):
    code, payload = run_json(capsys, "valid", "--formula", "S[n] p -> p")
    assert code == 0
    assert payload["verdict"] == "unsat"


def test_valid_negative_prints_a_countermodel(capsys):
    code, payload = run_json(capsys, "valid", "--formula", "E[n] p -> p")
    assert code == 1
    assert payload["verdict"] == "sat"
    m = model_from_dict(payload["model"])
    assert check(m, payload["state"], Not(parse_formula("E[n] p -> p"))).value is True


def test_formula_dash_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("S[n] p & !p"))
    code, payload = run_json(capsys, "sat", "--formula", "-")
    assert code == 1
    assert payload["verdict"] == "unsat"


def test_unparseable_formula_is_an_input_error(capsys):
    code, captured = run(capsys, "sat", "--formula", "S[n")
    assert code == 2
    assert "error:" in captured.err


# ---------------------------------------------------------------------------
# bisim


def test_bisim_same_point_twice(capsys):
    code, payload = run_json(
        capsys, "bisim",
        "--model1", FIGURE, "--state1", "w", "--model2", FIGURE, "--state2", "w",
    )
    assert code == 0
    assert payload == {"bisimilar": True}


def test_bisim_distinguisher_is_reverified(capsys):
    code, payload = run_json(
        capsys, "bisim",
        "--model1", FIGURE, "--state1", "w", "--model2", FIGURE, "--state2", "s",
        "--distinguish",
    )
    assert code == 1
    assert payload["bisimilar"] is False
    f = parse_formula(payload["distinguisher"])
    fig = model_from_dict(json.loads(Path(FIGURE).read_text()))
    assert check(fig, "w", f).value is True
    assert check(fig, "s", f).value is False


def test_bisim_atom_difference_distinguisher(capsys):
    _, payload = run_json(
        capsys, "bisim",
        "--model1", FIGURE, "--state1", "w", "--model2", FIGURE, "--state2", "s",
        "--distinguish",
    )
    assert payload["distinguisher"] == "p"


def test_bisim_unknown_state_is_an_input_error(capsys):
    code, captured = run(
        capsys, "bisim",
        "--model1", FIGURE, "--state1", "zz", "--model2", FIGURE, "--state2", "w",
    )
    assert code == 2
    assert "error:" in captured.err


# ---------------------------------------------------------------------------
# translate


def test_translate_figure_to_neighborhood(capsys):
    code, payload = run_json(capsys, "translate", "--model", FIGURE, "--to", "nbhd")
    assert code == 0
    # the two name bearers at w see different blocks
    assert payload["nu"]["w"]["n"] == [["u", "w"], ["v", "w"]]


def test_translate_round_trip_preserves_truth(capsys, tmp_path):
    _, payload = run_json(capsys, "translate", "--model", FIGURE, "--to", "nbhd")
    nbhd_path = tmp_path / "fig_nbhd.json"
    nbhd_path.write_text(json.dumps(payload))
    code, back = run_json(capsys, "translate", "--model", str(nbhd_path), "--to", "kripke")
    assert code == 0
    m = model_from_dict(back)
    for text, state, expected in [("S[n] p", "w", True), ("E[n] p", "w", False)]:
        assert check(m, state, parse_formula(text)).value is expected


def test_translate_rejects_non_reflexive_input(capsys, tmp_path):
    crooked = tmp_path / "crooked.json"
    crooked.write_text(json.dumps({
        "states": ["x", "y"],
        "names": ["n"],
        "nu": {"x": {"n": [["y"]]}},
        "valuation": {"p": ["x"]},
    }))
    code, captured = run(capsys, "translate", "--model", str(crooked), "--to", "kripke")
    assert code == 2
    assert "error:" in captured.err


# ---------------------------------------------------------------------------
# validate / random / algebra


def test_validate_modes_and_exit_codes(capsys):
    code, payload = run_json(capsys, "validate", "--model", FIGURE, "--mode", "lenient")
    assert code == 0 and payload["ok"] is True
    warnings = [d for d in payload["diagnostics"] if d["level"] == "warning"]
    assert len(warnings) == 2
    assert {d["code"] for d in warnings} == {"edge-from-unnamed-source"}

    code, payload = run_json(capsys, "validate", "--model", FIGURE, "--mode", "strict")
    assert code == 1 and payload["ok"] is False
    assert any(d["level"] == "error" for d in payload["diagnostics"])

    code, payload = run_json(capsys, "validate", "--model", FIGURE, "--mode", "epistemic")
    assert code == 0 and payload["ok"] is True


def test_random_matches_the_library(capsys):
    code, payload = run_json(capsys, "random", "--states", "5", "--seed", "11")
    assert code == 0
    assert payload == model_to_dict(random_model(states=5, seed=11))


def test_random_is_deterministic(capsys):
    _, first = run(capsys, "random", "--seed", "3")
    _, second = run(capsys, "random", "--seed", "3")
    assert first.out == second.out


def test_algebra_on_translated_figure(capsys, tmp_path):
    _, payload = run_json(capsys, "translate", "--model", FIGURE, "--to", "nbhd")
    nbhd_path = tmp_path / "fig_nbhd.json"
    nbhd_path.write_text(json.dumps(payload))
    code, report = run_json(capsys, "algebra", "--model", str(nbhd_path))
    assert code == 0
    assert report == {"ok": True, "diagnostics": []}


def test_algebra_flags_empty_neighborhoods(capsys, tmp_path):
    degenerate = tmp_path / "degenerate.json"
    degenerate.write_text(json.dumps({
        "states": ["x"],
        "names": ["n"],
        "nu": {"x": {"n": [[]]}},
        "valuation": {"p": []},
    }))
    code, report = run_json(capsys, "algebra", "--model", str(degenerate))
    assert code == 0
    assert any(d["code"] == "duality-empty-neighborhood" for d in report["diagnostics"])


# ---------------------------------------------------------------------------
# Output discipline


def test_pretty_changes_whitespace_only(capsys):
    _, compact = run(capsys, "sat", "--formula", "S[n] p & !E[n] p")
    _, pretty = run(capsys, "sat", "--formula", "S[n] p & !E[n] p", "--pretty")
    assert pretty.out != compact.out
    redone = json.dumps(json.loads(pretty.out), sort_keys=True, separators=(",", ":"))
    assert redone + "\n" == compact.out


def test_unknown_command_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_output_is_stable_across_interpreter_runs():
    argv = [sys.executable, "-m", "namelogic.cli", "sat", "--formula", "S[n] p & !E[n] p"]
    runs = [
        subprocess.run(argv, capture_output=True, text=True, env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"})
        for seed in ("1", "2")
    ]
    assert runs[0].returncode == 0 and runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
