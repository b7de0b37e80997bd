"""Poincaré duality, the shriek map, the dual loop coproduct and word-length checks."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sullivanloops.algebra import differential, verify_graded_commutation
from sullivanloops.cohomology import ClassVector, cohomology_table, verify_quasi_iso
from sullivanloops.errors import CutoffExceededError, OrientationError, PoincareDualityError
from sullivanloops.modelfile import base_model, parse_model
from sullivanloops.output import format_tensor
from sullivanloops.topology import (
    coproduct_sweep,
    diagonal_obstructions,
    dual_loop_coproduct,
    euler_characteristic,
    euler_class_delta_in,
    poincare_dual_basis,
    symmetry_signs,
    verify_anticommutation,
    verify_hodge_respect,
    verify_image_inclusion,
    verify_proposition2,
    verify_zero_word_length,
)

from tests.conftest import make_session

PROPERTY = settings(
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)


def coefficients(size: int):
    return st.lists(st.integers(-3, 3), min_size=size, max_size=size)


class TestDuality:
    def test_cp1_dual_basis(self, cp1):
        dual = cp1.dual
        assert [c.label for c in dual.classes] == ["1", "x"]
        assert [str(hat) for hat in dual.duals] == ["x", "1"]
        assert dual.pairing == ((1, 0), (0, 1))

    def test_cp2_middle_class_is_self_dual(self, cp2):
        dual = cp2.dual
        middle = [hat for cls, hat in zip(dual.classes, dual.duals) if cls.degree == 2]
        assert [str(hat) for hat in middle] == ["x"]

    def test_pairing_functional(self, cp2):
        ring = cp2.base.ring
        assert cp2.dual.pair(ring.gen("x") ** 2) == 1
        assert cp2.dual.pair(ring.zero()) == 0

    def test_negated_orientation_negates_duals(self, cp1):
        flipped = poincare_dual_basis(cp1.base_table, 2, -cp1.fundamental)
        assert str(flipped.duals[0]) == "-x"

    def test_cohomology_above_the_dimension_is_refused(self):
        text = "generator x : 2; generator z : 2; relation x^2 = 0; relation z^2 = 0; dimension 2; fundamental x"
        algebra, fundamental = base_model(parse_model(text), 6)
        with pytest.raises(PoincareDualityError):
            poincare_dual_basis(cohomology_table(algebra, 6), 2, fundamental)

    def test_exact_fundamental_is_refused(self):
        text = "generator x : 2; generator y : 3; d y = x^2; dimension 4; fundamental x^2"
        algebra, fundamental = base_model(parse_model(text), 6)
        with pytest.raises(OrientationError):
            poincare_dual_basis(cohomology_table(algebra, 6), 4, fundamental)


class TestDiagonalClass:
    def test_cp1(self, cp1):
        ring = cp1.bundle.base_square.ring
        assert cp1.engine.diagonal == ring.gen("x1") + ring.gen("x2")
        assert format_tensor(cp1.engine.diagonal) == "1⊗x + x⊗1"

    def test_s3_has_a_sign(self, s3):
        ring = s3.bundle.base_square.ring
        assert s3.engine.diagonal == ring.gen("x1") - ring.gen("x2")
        assert format_tensor(s3.engine.diagonal) == "-1⊗x + x⊗1"

    def test_cp2(self, cp2):
        ring = cp2.bundle.base_square.ring
        x1, x2 = ring.gen("x1"), ring.gen("x2")
        assert cp2.engine.diagonal == x1 * x1 + x1 * x2 + x2 * x2

    @pytest.mark.parametrize(("fixture", "chi"), [("cp1", 2), ("cp2", 3), ("s3", 0), ("s2", 2)])
    def test_pullback_is_euler_characteristic_times_fundamental(self, request, fixture, chi):
        session = request.getfixturevalue(fixture)
        assert euler_characteristic(session.base_table, session.dimension) == chi
        pulled = session.bundle.multiplication.apply(session.engine.diagonal)
        assert pulled == session.fundamental.scale(chi)


class TestShriek:
    def test_unit_goes_to_the_euler_cocycle(self, cp1):
        engine = cp1.engine
        one = cp1.bundle.fiber_product.ring.one()
        assert engine.shriek.apply(one) == engine.euler_cocycle

    def test_shift_is_the_dimension(self, cp2):
        assert cp2.engine.shriek.shift == 4

    @pytest.mark.parametrize("fixture", ["cp1", "s3", "cp2"])
    def test_anticommutes_with_d(self, request, fixture):
        session = request.getfixturevalue(fixture)
        report = verify_anticommutation(session.engine, session.max_degree)
        assert report.passed
        assert report.checked > 0

    @pytest.mark.parametrize("fixture", ["cp1", "s3", "cp2"])
    def test_quotient_models_have_no_obstruction(self, request, fixture):
        session = request.getfixturevalue(fixture)
        assert diagonal_obstructions(session.bundle, session.engine.euler_cocycle) == []

    def test_even_sphere_obstructs_the_chain_map(self, s2):
        engine = s2.engine
        assert diagonal_obstructions(s2.bundle, engine.euler_cocycle) == ["x", "y"]
        raw = verify_graded_commutation(engine.shriek, 8)
        assert not raw.passed
        assert raw.first_witness.subject == "xbar2"
        assert "x2^2" in raw.first_witness.detail
        assert "x1^2" in raw.first_witness.detail

    def test_even_sphere_check_is_skipped_with_a_note(self, s2):
        report = verify_anticommutation(s2.engine, 8)
        assert report.passed
        assert report.checked == 0
        assert report.notes[0].startswith("skipped")
        assert "x, y" in report.notes[0]


class TestDualLoopCoproduct:
    def test_cp1_unit_pair(self, cp1):
        table = cp1.loop_table
        assert table.format(cp1.engine.value_of_labels("1", "1")) == "2*[x]"

    def test_cp2_unit_pair(self, cp2):
        table = cp2.loop_table
        assert table.format(cp2.engine.value_of_labels("1", "1")) == "3*[x^2]"

    def test_odd_sphere_vanishes(self, s3):
        assert s3.engine.value_of_labels("1", "1").is_zero

    def test_sweep_is_zero_away_from_the_unit(self, cp1):
        entries = coproduct_sweep(cp1.engine)
        assert len(entries) == len(cp1.engine.basis_pairs())
        for entry in entries:
            if entry.u.label == "1" and entry.v.label == "1":
                assert entry.value.coordinates == (Fraction(2),)
            else:
                assert entry.value.is_zero

    def test_symmetry_of_the_unit_pair(self, cp1):
        record = symmetry_signs(cp1.engine)
        assert record.to_dict()["0,0"] == "+1"
        assert record.verdict((1, 1)) == "undetermined"

    def test_out_of_range_pair_is_refused(self, cp1):
        with pytest.raises(CutoffExceededError):
            cp1.engine.value_of_labels("x*ybar", "x*ybar")

    def test_representative_does_not_matter(self, cp1):
        engine = cp1.engine
        loop = cp1.bundle.loop
        ring = loop.ring
        U = ring.gen("xbar") * ring.gen("ybar")
        V = ring.one()
        shifted = U + differential(loop, ring.gen("ybar")).scale(7)
        assert (
            engine.coproduct_of_cocycles(U, V, 3, 0).coordinates
            == engine.coproduct_of_cocycles(shifted, V, 3, 0).coordinates
        )

    def test_composite_of_exact_input_is_exact(self, cp2):
        engine = cp2.engine
        loop = cp2.bundle.loop
        boundary = differential(loop, loop.ring.gen("ybar"))
        assert engine.coproduct_of_cocycles(boundary, loop.ring.one(), 5, 0).is_zero

    @PROPERTY
    @given(st.fractions(max_denominator=9), st.fractions(max_denominator=9))
    def test_bilinear_on_degree_zero(self, cp1, a, b):
        value = dual_loop_coproduct(
            cp1.engine, ClassVector(0, (a,)), ClassVector(0, (b,))
        )
        assert value.coordinates == (2 * a * b,)

    @pytest.mark.parametrize("fixture", ["cp1", "cp2"])
    @PROPERTY
    @given(data=st.data())
    def test_independent_of_representatives_and_bilinear(self, request, fixture, data):
        session = request.getfixturevalue(fixture)
        engine = session.engine
        table = session.loop_table
        loop = session.bundle.loop
        u_cls, v_cls = data.draw(st.sampled_from(engine.basis_pairs()))
        p, q = u_cls.degree, v_cls.degree
        a = data.draw(coefficients(table.dimension(p)))
        b = data.draw(coefficients(table.dimension(q)))
        rng = data.draw(st.randoms(use_true_random=False))
        u = ClassVector(p, tuple(Fraction(c) for c in a))
        v = ClassVector(q, tuple(Fraction(c) for c in b))

        U, V = table.element(u), table.element(v)
        if p > 0:
            U = U + differential(loop, loop.ring.random_element(p - 1, rng))
        if q > 0:
            V = V + differential(loop, loop.ring.random_element(q - 1, rng))
        expected = dual_loop_coproduct(engine, u, v)
        assert engine.coproduct_of_cocycles(U, V, p, q).coordinates == expected.coordinates

        combined = [Fraction(0)] * len(expected.coordinates)
        for cu in table.classes(p):
            for cv in table.classes(q):
                coeff = a[cu.index] * b[cv.index]
                if not coeff:
                    continue
                unit = dual_loop_coproduct(engine, table.unit_vector(cu), table.unit_vector(cv))
                combined = [x + coeff * y for x, y in zip(combined, unit.coordinates)]
        assert tuple(combined) == expected.coordinates

    def test_euler_class_of_delta_in(self, cp1, cp2, s3):
        assert cp1.loop_table.format(euler_class_delta_in(cp1.engine)) == "2*[x]"
        assert cp2.loop_table.format(euler_class_delta_in(cp2.engine)) == "3*[x^2]"
        assert euler_class_delta_in(s3.engine).is_zero


class TestStructuralChecks:
    @pytest.mark.parametrize("fixture", ["cp1", "s3"])
    def test_right_multiplication_identity(self, request, fixture):
        session = request.getfixturevalue(fixture)
        assert verify_proposition2(session.engine).passed

    def test_wrong_diagonal_is_detected(self, cp1):
        ring = cp1.bundle.mprime.ring
        wrong = ring.gen("x1") - ring.gen("x2")
        report = verify_proposition2(cp1.engine, euler_cocycle=wrong)
        assert not report.passed
        assert report.first_witness.subject == "1"

    def test_image_inclusion(self, cp1):
        report = verify_image_inclusion(cp1.bundle, 8, cp1.mprime_table, cp1.fiber_table)
        assert report.passed
        assert report.checked == 8
        assert "H^1: image of δ_out is not contained in the image of δ_in" in report.notes
        assert "H^0: image of δ_out is not contained in the image of δ_in" not in report.notes


class TestHodge:
    def test_cp1_word_lengths(self, cp1):
        bigrading = cp1.bigrading
        table = cp1.loop_table
        found = [bigrading.word_length(table.classes(n)[0]) for n in range(1, 5)]
        assert found == [1, 0, 2, 1]
        assert bigrading.split(3) == {2: 1}
        assert [c.label for c in bigrading.classes_of_length(4, 1)] == ["x*ybar"]

    def test_to_dict_lists_every_degree(self, cp1):
        assert len(cp1.bigrading.to_dict()) == cp1.loop_table.top + 1

    @pytest.mark.parametrize("fixture", ["cp1", "cp2", "s3"])
    def test_coproduct_adds_word_lengths(self, request, fixture):
        session = request.getfixturevalue(fixture)
        assert verify_hodge_respect(session.engine, session.bigrading).passed

    @pytest.mark.parametrize("fixture", ["cp1", "cp2", "s3"])
    def test_word_length_zero_is_the_base(self, request, fixture):
        session = request.getfixturevalue(fixture)
        report = verify_zero_word_length(session.bundle, session.base_table, session.bigrading)
        assert report.passed
        assert report.notes


@pytest.mark.slow
@pytest.mark.parametrize(
    ("name", "max_degree", "expected"),
    [
        ("cp1", 14, "2*[x]"),
        ("cp2", 14, "3*[x^2]"),
        ("cp3", 18, "4*[x^3]"),
        ("s2", 10, "2*[x]"),
        ("s3", 12, "0"),
        ("s5", 16, "0"),
    ],
)
def test_acceptance(name, max_degree, expected):
    session = make_session(name, max_degree)
    engine = session.engine
    table = session.loop_table
    assert table.format(engine.value_of_labels("1", "1")) == expected
    assert verify_quasi_iso(session.bundle.rho, max_degree, session.mprime_table, table).passed
    assert table.format(euler_class_delta_in(engine)) == expected
    assert verify_anticommutation(engine, max_degree).passed
    assert verify_proposition2(engine).passed
    assert verify_hodge_respect(engine, session.bigrading).passed
    assert verify_zero_word_length(session.bundle, session.base_table, session.bigrading).passed


@pytest.mark.slow
@pytest.mark.parametrize(("name", "max_degree", "n"), [("cp1", 14, 1), ("cp2", 14, 2), ("cp3", 18, 3)])
def test_projective_sweep_is_concentrated_on_the_unit(name, max_degree, n):
    session = make_session(name, max_degree)
    entries = coproduct_sweep(session.engine)
    assert entries
    for entry in entries:
        if entry.u.label == "1" and entry.v.label == "1":
            assert entry.value.degree == 2 * n
            assert entry.value.coordinates == (Fraction(n + 1),)
        else:
            assert entry.value.is_zero, (entry.u.label, entry.v.label)
