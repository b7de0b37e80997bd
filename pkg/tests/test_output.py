"""Result documents, table rendering and result files."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from sullivanloops.cohomology import project_class
from sullivanloops.output import (
    CommandResult,
    cohomology_document,
    cohomology_table_text,
    format_tensor,
    load_document,
    output_paths,
    projection_document,
    render_json,
    render_table,
    reports_table,
    save_results,
)
from sullivanloops.reports import CheckReport


def test_json_is_sorted_and_exact():
    text = render_json({"b": Fraction(1, 2), "a": 1, "c": Path("m.model")})
    assert text == '{\n  "a": 1,\n  "b": "1/2",\n  "c": "m.model"\n}\n'


def test_json_renders_elements_as_text(cp1):
    x = cp1.base.ring.gen("x")
    assert json.loads(render_json({"e": x.scale(-3)})) == {"e": "-3*x"}


def test_json_refuses_unknown_objects():
    with pytest.raises(TypeError):
        render_json({"thing": object()})


def test_cohomology_document_lists_empty_degrees(s3):
    document = cohomology_document(s3.base_table)
    assert document["top_degree"] == s3.max_degree - 1
    assert len(document["degrees"]) == s3.max_degree
    assert document["degrees"][1] == {"degree": 1, "dimension": 0, "classes": []}
    assert document["degrees"][3]["classes"] == [{"label": "x", "representative": "x"}]


def test_cohomology_document_with_word_lengths(cp1):
    document = cohomology_document(cp1.loop_table, cp1.bigrading.word_lengths)
    entry = document["degrees"][3]["classes"][0]
    assert entry == {"label": "xbar*ybar", "representative": "xbar*ybar", "word_length": 2}


def test_cohomology_table_text(cp1):
    text = cohomology_table_text(cp1.loop_table, cp1.bigrading.word_lengths)
    assert "H*(LCP1)" in text
    assert "[x*ybar]" in text
    assert "word lengths" in text


def test_render_table():
    text = render_table("demo", ("name", "value"), [("alpha", 1), ("beta", Fraction(2, 3))])
    assert "demo" in text.splitlines()[0]
    assert "alpha" in text and "2/3" in text
    assert "|" in text


def test_render_table_keeps_brackets():
    text = render_table("classes", ("class",), [("[x*ybar]",)])
    assert "[x*ybar]" in text


def test_reports_table_shows_failures():
    report = CheckReport(name="d²=0 on broken", checked_degree=4, checked=7)
    report.record("z", "d²= x^3")
    text = reports_table("validate", [report])
    assert "FAIL" in text
    assert "z: d²= x^3" in text


def test_reports_table_shows_the_first_note_of_a_passing_check():
    report = CheckReport(name="recorded", checked_degree=4, checked=5)
    report.notes.append("contained in 4 of 5")
    text = reports_table("validate", [report])
    assert "pass" in text
    assert "contained in 4 of 5" in text


def test_projection_document(cp1):
    table = cp1.loop_table
    x = cp1.bundle.loop.ring.gen("x")
    document = projection_document(table, project_class(table, x.scale(2)))
    assert document == {"degree": 2, "coordinates": ["2"], "class": "2*[x]"}


class TestFormatTensor:
    def test_zero(self, cp1):
        assert format_tensor(cp1.bundle.base_square.ring.zero()) == "0"

    def test_coefficients_and_order(self, cp1):
        ring = cp1.bundle.base_square.ring
        x1, x2 = ring.gen("x1"), ring.gen("x2")
        assert format_tensor((x1 * x2).scale(3) - x2) == "-1⊗x + 3*x⊗x"

    def test_cp2_diagonal(self, cp2):
        assert format_tensor(cp2.engine.diagonal) == "1⊗x^2 + x⊗x + x^2⊗1"


class TestResultFiles:
    @pytest.fixture
    def result(self):
        return CommandResult(
            command="cohomology",
            model="CP1",
            document={"model": "CP1", "betti": [1, 1, 1], "value": Fraction(3, 4)},
            tables=["first\n", "second\n"],
        )

    def test_paths(self, tmp_path):
        json_path, text_path = output_paths(tmp_path / "nested", "CP1", "euler")
        assert json_path == tmp_path / "nested" / "CP1_euler.json"
        assert text_path == tmp_path / "nested" / "CP1_euler.txt"
        assert json_path.parent.is_dir()

    def test_save_and_load(self, tmp_path, result):
        json_path, text_path = save_results(tmp_path / "out", result)
        assert json_path.name == "CP1_cohomology.json"
        assert load_document(json_path) == {"model": "CP1", "betti": [1, 1, 1], "value": "3/4"}
        assert text_path.read_text(encoding="utf-8") == "first\n\nsecond\n"

    def test_result_texts(self, result):
        assert result.table_text == "first\n\nsecond\n"
        assert json.loads(result.json_text)["value"] == "3/4"
        assert result.exit_code == 0
