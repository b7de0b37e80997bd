"""Parsing, formatting and building base models from model files."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sullivanloops.errors import CutoffExceededError, ParseError
from sullivanloops.modelfile import (
    Lexer,
    base_model,
    format_model,
    killed_generators,
    load_model,
    parse_model,
)

from tests.conftest import CORRUPTED_MODEL, model_path

FUZZ = settings(
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)

CP2_TEXT = """\
# complex projective plane
generator x : 2
generator y : 5
d y = x^3
relation x^3 = 0
dimension 4
fundamental x^2
"""


def test_parse_cp2():
    model = parse_model(CP2_TEXT, name="CP2")
    assert model.name == "CP2"
    assert model.generators == (("x", 2), ("y", 5))
    assert model.truncations == (("x", 3),)
    assert model.dimension == 4
    assert str(model.fundamental) == "x^2"
    assert str(model.differential_of("y")) == "x^3"
    assert model.differential_of("x") == 0


def test_semicolon_separated_statements():
    model = parse_model("generator x : 2; d x = 0; dimension 2; fundamental x; relation x^2 = 0")
    assert model.name == "M"
    assert model.generators == (("x", 2),)
    assert model.differentials == ()
    assert model.truncations == (("x", 2),)


def test_model_statement_names_the_model():
    assert parse_model("model Q; generator x : 3; dimension 3; fundamental x").name == "Q"


def test_polynomial_grammar():
    text = "generator x : 2; generator z : 2; generator y : 5; d y = -(x + z)^2 * x + 3 x z^2; dimension 2; fundamental x"
    value = parse_model(text).differential_of("y")
    assert str(value) == "2*x*z^2 - 2*x^2*z - x^3"
    assert value.degree == 6


def test_odd_products_keep_their_sign():
    text = "generator a : 3; generator b : 3; generator c : 5; d c = b*a + a*b; dimension 3; fundamental a"
    assert parse_model(text).differential_of("c") == 0


def test_load_model_uses_the_file_stem(tmp_path):
    path = tmp_path / "my-space.model"
    path.write_text("generator x : 3\ndimension 3\nfundamental x\n")
    assert load_model(path).name == "my_space"


def test_shipped_models_parse():
    for name in ("cp1", "cp2", "cp3", "s2", "s3", "s5"):
        model = load_model(model_path(name))
        assert model.fundamental.degree == model.dimension


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("generator x : 2; generator y : 3; d y = x^2 + x; dimension 2; fundamental x", "not homogeneous"),
        ("generator x : 2; dimension 2", "missing fundamental"),
        ("generator x : 2; fundamental x", "missing dimension"),
        ("generator x : 2; generator x : 4; dimension 2; fundamental x", "duplicate generator"),
        ("generator x : 2; generator y : 3; d y = w^2; dimension 2; fundamental x", "undeclared generator w"),
        ("generator x : 2; d q = x; dimension 2; fundamental x", "undeclared generator q"),
        ("generator x : 3; generator y : 7; d y = x^2; dimension 3; fundamental x", "exponent > 1"),
        ("generator xbar : 2; dimension 2; fundamental xbar", "may not end"),
        ("generator x1 : 2; dimension 2; fundamental x1", "may not end"),
        ("generator x : 2; generator y : 4; d y = x^2; dimension 2; fundamental x", "expected 5"),
        ("generator x : 2; dimension 4; fundamental x", "expected 4"),
        ("generator x : 2; dimension 4; fundamental 2*x^2", "single monomial"),
        ("generator x : 3; relation x^2 = 0; dimension 3; fundamental x", "odd generator"),
        ("generator x : 2; relation x^2 = 1; dimension 2; fundamental x", "g^k = 0"),
        ("generator x : 0; dimension 2; fundamental x", "degree must lie"),
        ("generator x : 2; dimension 2; fundamental x; dimension 2", "given twice"),
        ("generator x : 2; frobnicate x; dimension 2; fundamental x", "unknown statement"),
        ("generator x : 2 $; dimension 2; fundamental x", "unexpected character"),
        ("dimension 2; fundamental 1", "at least one generator"),
        ("generator x : 2; dimension 2; fundamental (x", "expected right paren"),
    ],
)
def test_invalid_models(text, message):
    with pytest.raises(ParseError) as info:
        parse_model(text)
    assert message in str(info.value)


def test_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        parse_model("generator x : 2\ngenerator y : 3\nd y = x ^ q\ndimension 2\nfundamental x\n")
    assert info.value.line == 3


def test_deep_nesting_is_refused():
    text = "generator x : 2; dimension 2; fundamental " + "(" * 100 + "x" + ")" * 100
    with pytest.raises(ParseError):
        parse_model(text)


def test_huge_literals_are_refused():
    with pytest.raises(ParseError):
        parse_model("generator x : 2; dimension 2; fundamental " + "9" * 5000 + "*x")


@pytest.mark.parametrize("name", ["cp1", "cp2", "s3"])
def test_format_round_trip(name):
    model = load_model(model_path(name))
    assert parse_model(format_model(model)) == model


def test_lexer_drops_comments_and_spaces():
    kinds = [t.kind for t in Lexer().tokenize("d y = x^2  # note\n")]
    assert kinds == ["NAME", "NAME", "EQUALS", "NAME", "CARET", "INTEGER", "SEP"]


class TestBaseModel:
    def test_truncated_cp1_kills_y(self):
        model = load_model(model_path("cp1"))
        assert killed_generators(model) == {"y"}
        algebra, fundamental = base_model(model, 6)
        assert algebra.ring.gen("y") == 0
        assert algebra.cutoff == 8
        assert str(fundamental) == "x"

    def test_untruncated_sphere_keeps_y(self):
        model = load_model(model_path("s2"))
        assert killed_generators(model) == frozenset()
        algebra, _ = base_model(model, 6)
        assert algebra.ring.gen("y") != 0

    def test_orientation_sign(self):
        _, fundamental = base_model(load_model(model_path("cp2")), 8, orientation=-1)
        assert str(fundamental) == "-x^2"

    def test_max_degree_must_clear_the_dimension(self):
        with pytest.raises(CutoffExceededError):
            base_model(load_model(model_path("cp2")), 5)

    def test_corrupted_model_still_builds(self):
        algebra, _ = base_model(parse_model(CORRUPTED_MODEL), 6)
        assert algebra.name == "broken"


STATEMENT_FRAGMENTS = [
    "generator x : 2",
    "generator y : 3",
    "generator z : 5",
    "d y = x^2",
    "d z = x^3",
    "d y = x",
    "relation x^2 = 0",
    "relation x^3 = 0",
    "dimension 2",
    "dimension 4",
    "fundamental x",
    "fundamental x^2",
    "model T",
    "d x = y",
    "generator",
    "= 0",
    "(((",
    "x^",
]


@FUZZ
@given(st.lists(st.sampled_from(STATEMENT_FRAGMENTS), max_size=10))
def test_fragments_parse_or_raise_parse_error(fragments):
    try:
        model = parse_model("\n".join(fragments))
    except ParseError:
        return
    assert model.fundamental.degree == model.dimension


@FUZZ
@given(st.text(max_size=200))
def test_arbitrary_text_parses_or_raises_parse_error(text):
    try:
        parse_model(text)
    except ParseError:
        pass
