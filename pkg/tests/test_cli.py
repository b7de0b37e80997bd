"""Command-line behaviour, exit codes and output stability."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from sullivanloops.main import cli

from tests.conftest import model_path


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


def test_cohomology_table(runner):
    result = invoke(runner, "cohomology", model_path("cp1"), "-N", 6)
    assert result.exit_code == 0, result.output
    assert "H*(LCP1)" in result.stdout
    assert "[xbar*ybar]" in result.stdout


def test_cohomology_structured(runner):
    result = invoke(runner, "cohomology", model_path("cp1"), "-N", 6, "--format", "structured")
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["model"] == "CP1"
    assert document["betti"]["loop"] == [1, 1, 1, 1, 1, 1]
    assert document["betti"]["base"] == [1, 0, 1, 0, 0, 0]
    loop_degrees = document["tables"]["loop"]["degrees"]
    assert loop_degrees[4]["classes"][0]["label"] == "x*ybar"
    assert loop_degrees[4]["classes"][0]["word_length"] == 1


def test_coproduct_of_units(runner):
    result = invoke(runner, "coproduct", model_path("cp1"), "1", "1", "-N", 8)
    assert result.exit_code == 0, result.output
    assert "2*[x]" in result.stdout


def test_coproduct_structured(runner):
    result = invoke(
        runner, "coproduct", model_path("cp2"), "1", "1", "-N", 8, "--format", "structured"
    )
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["class"] == "3*[x^2]"
    assert document["degree"] == 4
    assert document["coordinates"] == ["3"]
    assert document["word_length"] == 0


def test_coproduct_sweep(runner):
    result = invoke(
        runner, "coproduct", model_path("cp1"), "--pairs", "all", "-N", 6, "--format", "structured"
    )
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    nonzero = [p for p in document["pairs"] if p["class"] != "0"]
    assert nonzero == [
        {"u": "1", "v": "1", "degree": 2, "coordinates": ["2"], "class": "2*[x]"}
    ]
    assert document["symmetry"]["0,0"] == "+1"


@pytest.mark.parametrize("labels", [(), ("1",), ("1", "1", "x")])
def test_coproduct_needs_two_labels(runner, labels):
    result = invoke(runner, "coproduct", model_path("cp1"), *labels, "-N", 6)
    assert result.exit_code == 2


def test_coproduct_labels_and_sweep_conflict(runner):
    result = invoke(runner, "coproduct", model_path("cp1"), "1", "1", "--pairs", "all", "-N", 6)
    assert result.exit_code == 2


def test_unknown_label_exits_2(runner):
    result = invoke(runner, "coproduct", model_path("cp1"), "1", "nope", "-N", 6)
    assert result.exit_code == 2
    assert "nope" in result.stdout


def test_out_of_range_labels_exit_2(runner):
    result = invoke(runner, "coproduct", model_path("cp1"), "x*ybar", "x", "-N", 6)
    assert result.exit_code == 2
    assert "Error" in result.stdout


def test_validate_passes(runner):
    result = invoke(runner, "validate", model_path("cp1"), "-N", 6)
    assert result.exit_code == 0, result.output
    assert "FAIL" not in result.stdout
    assert "pass" in result.stdout


def test_validate_structured(runner):
    result = invoke(runner, "validate", model_path("s3"), "-N", 7, "--format", "structured")
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["passed"] is True
    assert all(report["passed"] for report in document["reports"])


@pytest.mark.parametrize("name", ["cp2", "s2"])
def test_validate_records_observations_without_failing(runner, name):
    result = invoke(runner, "validate", model_path(name), "-N", 8, "--format", "structured")
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    reports = {report["name"]: report for report in document["reports"]}
    inclusion = reports["im H(δ_out) ⊂ im H(δ_in) (recorded)"]
    assert inclusion["passed"] is True
    assert inclusion["notes"][0].startswith("contained in")
    if name == "s2":
        skipped = [r for r in document["reports"] if r["notes"] and r["notes"][0].startswith("skipped")]
        assert len(skipped) == 1


def test_corrupted_model_fails_validation(runner, corrupted_model):
    result = invoke(runner, "validate", corrupted_model, "-N", 6)
    assert result.exit_code == 1
    assert "FAIL" in result.stdout
    assert "x^3" in result.stdout


def test_missing_fundamental_exits_2(runner, tmp_path):
    path = tmp_path / "nofund.model"
    path.write_text("generator x : 2\nrelation x^2 = 0\ndimension 2\n")
    result = invoke(runner, "cohomology", path)
    assert result.exit_code == 2
    assert "missing fundamental" in result.stdout


def test_max_degree_below_dimension_exits_2(runner):
    result = invoke(runner, "cohomology", model_path("cp2"), "-N", 5)
    assert result.exit_code == 2


def test_missing_file_is_a_usage_error(runner, tmp_path):
    result = invoke(runner, "cohomology", tmp_path / "absent.model")
    assert result.exit_code == 2


def test_output_dir(runner, tmp_path):
    out = tmp_path / "results"
    result = invoke(runner, "cohomology", model_path("cp1"), "-N", 6, "-o", out)
    assert result.exit_code == 0, result.output
    written = json.loads((out / "CP1_cohomology.json").read_text(encoding="utf-8"))
    assert written["betti"]["loop"] == [1, 1, 1, 1, 1, 1]
    assert (out / "CP1_cohomology.txt").read_text(encoding="utf-8") in result.stdout


def test_euler(runner):
    result = invoke(runner, "euler", model_path("cp1"), "-N", 6)
    assert result.exit_code == 0, result.output
    assert "1⊗x + x⊗1" in result.stdout
    assert "2*[x]" in result.stdout


def test_euler_structured_with_negated_orientation(runner):
    result = invoke(
        runner, "euler", model_path("cp1"), "-N", 6, "--format", "structured", "--negate-orientation"
    )
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["fundamental"] == "-x"
    assert document["euler_characteristic"] == 2
    assert document["diagonal_pullback"] == "-2*x"
    assert document["dual_basis"][0] == {"class": "1", "degree": 0, "dual": "-x"}


def test_hodge(runner):
    result = invoke(runner, "hodge", model_path("cp1"), "-N", 6, "--format", "structured")
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["passed"] is True
    assert document["split"]["3"] == {"2": 1}


def test_output_is_deterministic(runner):
    args = ("coproduct", model_path("cp1"), "--pairs", "all", "-N", 6, "--format", "structured")
    first = invoke(runner, *args)
    second = invoke(runner, *args)
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout


def test_as_displayed_series_fails(runner):
    result = invoke(runner, "cohomology", model_path("cp1"), "-N", 6, "--series", "as-displayed")
    assert result.exit_code == 1
    assert "did not vanish" in result.stdout
