"""The dual loop coproduct and the checks that surround it."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from sullivanloops.algebra import Element, GradedLinearMap, verify_graded_commutation
from sullivanloops.cohomology import (
    ClassVector,
    CohomologyClass,
    CohomologyTable,
    Projection,
    cohomology_table,
    induced_map,
    project_class,
)
from sullivanloops.errors import CutoffExceededError
from sullivanloops.linalg import dense_rank
from sullivanloops.loops import LoopModelBundle, to_copy
from sullivanloops.reports import CheckReport
from sullivanloops.topology.duality import DualBasis, diagonal_euler_class
from sullivanloops.topology.shriek import diagonal_obstructions, shriek_delta_in

log = logging.getLogger(__name__)


@dataclass
class CoproductEngine:
    """Everything needed to evaluate Φ^∨ on one manifold."""

    bundle: LoopModelBundle
    dual: DualBasis
    loop_table: CohomologyTable

    @property
    def dimension(self) -> int:
        return self.dual.dimension

    @property
    def cutoff(self) -> int:
        return self.bundle.cutoff

    @cached_property
    def diagonal(self) -> Element:
        return diagonal_euler_class(self.dual, self.bundle)

    @cached_property
    def euler_cocycle(self) -> Element:
        """The diagonal class carried into M'_LM."""
        return self.bundle.lambda_p0_p_half.apply(self.diagonal)

    @cached_property
    def shriek(self) -> GradedLinearMap:
        return shriek_delta_in(self.bundle, self.euler_cocycle, self.dimension)

    def composite(self, U: Element, V: Element) -> Element:
        """(μ⊗μ̄) ∘ δ_in^! ∘ δ_out applied to U ⊗ V."""
        tensor = to_copy(self.bundle, U, 1) * to_copy(self.bundle, V, 2)
        return self.bundle.rho.apply(self.shriek.apply(self.bundle.delta_out.apply(tensor)))

    def coproduct_of_cocycles(self, U: Element, V: Element, p: int, q: int) -> Projection:
        degree = p + q + self.dimension
        if degree > self.loop_table.top:
            raise CutoffExceededError(
                f"Φ^∨ lands in degree {degree}, beyond the table range 0..{self.loop_table.top}"
            )
        return project_class(self.loop_table, self.composite(U, V), degree)

    def value(self, u: ClassVector, v: ClassVector) -> Projection:
        return dual_loop_coproduct(self, u, v)

    def value_of_labels(self, label_u: str, label_v: str) -> Projection:
        table = self.loop_table
        return self.value(
            table.unit_vector(table.find(label_u)), table.unit_vector(table.find(label_v))
        )

    def basis_pairs(self) -> list[tuple[CohomologyClass, CohomologyClass]]:
        """All basis pairs whose coproduct lands inside the table."""
        classes = self.loop_table.all_classes()
        return [
            (u, v)
            for u, v in product(classes, classes)
            if u.degree + v.degree + self.dimension <= self.loop_table.top
        ]


def build_engine(bundle: LoopModelBundle, dual: DualBasis, loop_table: CohomologyTable | None = None) -> CoproductEngine:
    return CoproductEngine(
        bundle=bundle,
        dual=dual,
        loop_table=loop_table or cohomology_table(bundle.loop, bundle.cutoff),
    )


def dual_loop_coproduct(engine: CoproductEngine, u: ClassVector, v: ClassVector) -> Projection:
    """Φ^∨(u ⊗ v) in H^{p+q+m}(LM), evaluated on the table's representatives."""
    U = engine.loop_table.element(u)
    V = engine.loop_table.element(v)
    return engine.coproduct_of_cocycles(U, V, u.degree, v.degree)


def euler_class_delta_in(engine: CoproductEngine) -> Projection:
    """e_δin = [ρ(λ(e_Δ))] in H^m(LM)."""
    representative = engine.bundle.rho.apply(engine.euler_cocycle)
    return project_class(engine.loop_table, representative, engine.dimension)


@dataclass
class CoproductEntry:
    u: CohomologyClass
    v: CohomologyClass
    value: Projection


def coproduct_sweep(engine: CoproductEngine) -> list[CoproductEntry]:
    """Φ^∨ on every basis pair within range, in table order."""
    entries = []
    for u, v in engine.basis_pairs():
        value = engine.value(
            engine.loop_table.unit_vector(u), engine.loop_table.unit_vector(v)
        )
        entries.append(CoproductEntry(u, v, value))
    log.info("evaluated Φ^∨ on %d basis pairs", len(entries))
    return entries


@dataclass
class SymmetryRecord:
    """Observed ε with Φ^∨(u⊗v) = ε Φ^∨(v⊗u), per bidegree (p, q)."""

    signs: dict[tuple[int, int], set[int]] = field(default_factory=dict)
    inconsistent: set[tuple[int, int]] = field(default_factory=set)

    def verdict(self, bidegree: tuple[int, int]) -> str:
        if bidegree in self.inconsistent:
            return "none"
        observed = self.signs.get(bidegree, set())
        if not observed:
            return "undetermined"
        if len(observed) > 1:
            return "mixed"
        return "+1" if observed == {1} else "-1"

    def to_dict(self) -> dict[str, str]:
        keys = sorted(set(self.signs) | self.inconsistent)
        return {f"{p},{q}": self.verdict((p, q)) for p, q in keys}


def symmetry_signs(engine: CoproductEngine, entries: list[CoproductEntry] | None = None) -> SymmetryRecord:
    """Record the graded-symmetry sign of Φ^∨; nothing is asserted."""
    entries = entries if entries is not None else coproduct_sweep(engine)
    values = {(e.u.label, e.v.label): e for e in entries}
    record = SymmetryRecord()
    for (left, right), entry in values.items():
        swapped = values.get((right, left))
        if swapped is None:
            continue
        bidegree = (entry.u.degree, entry.v.degree)
        record.signs.setdefault(bidegree, set())
        a, b = entry.value.coordinates, swapped.value.coordinates
        if not any(a) and not any(b):
            continue
        if a == b:
            record.signs[bidegree].add(1)
        elif a == tuple(-x for x in b):
            record.signs[bidegree].add(-1)
        else:
            record.inconsistent.add(bidegree)
    return record


def verify_image_inclusion(
    bundle: LoopModelBundle,
    N: int | None = None,
    mprime_table: CohomologyTable | None = None,
    fiber_table: CohomologyTable | None = None,
) -> CheckReport:
    """Compare the images of H(δ_out) and H(δ_in) in every degree below N.

    Containment is recorded in the notes and never fails the report: for CP^n
    the image of δ_out in degree 1 has rank 2 while H^1(M'_LM) has rank 1.
    """
    N = N if N is not None else bundle.cutoff
    square_table = cohomology_table(bundle.loop_square, N)
    mprime_table = mprime_table or cohomology_table(bundle.mprime, N)
    fiber_table = fiber_table or cohomology_table(bundle.fiber_product, N)
    report = CheckReport(name="im H(δ_out) ⊂ im H(δ_in) (recorded)", checked_degree=N - 1)
    outside = []
    for n in range(N):
        report.checked += 1
        outer = induced_map(bundle.delta_out, n, square_table, fiber_table)
        inner = induced_map(bundle.delta_in, n, mprime_table, fiber_table)
        combined = [row_in + row_out for row_in, row_out in zip(inner, outer)]
        if dense_rank(combined) != dense_rank(inner):
            outside.append(f"H^{n}: image of δ_out is not contained in the image of δ_in")
    report.notes.append(f"contained in {N - len(outside)} of {N} degrees")
    report.notes.extend(outside)
    log.info(report.summary())
    return report


def verify_proposition2(
    engine: CoproductEngine,
    N: int | None = None,
    euler_cocycle: Element | None = None,
) -> CheckReport:
    """ρ(δ_in^!(δ_in(w))) = ρ(w · E) on every M'_LM monomial with |w| <= N - m.

    ``euler_cocycle`` replaces E on the right-hand side only.
    """
    N = N if N is not None else engine.cutoff
    bundle = engine.bundle
    E = euler_cocycle if euler_cocycle is not None else engine.euler_cocycle
    top = N - engine.dimension
    report = CheckReport(name="δ_in^! ∘ δ_in = right multiplication by e", checked_degree=top)
    ring = bundle.mprime.ring
    for n in range(top + 1):
        for exps in ring.basis(n):
            report.checked += 1
            w = ring.monomial(exps)
            left = bundle.rho.apply(engine.shriek.apply(bundle.delta_in.apply(w)))
            right = bundle.rho.apply(w * E)
            if left != right:
                report.record(ring.format_exponents(exps), f"{left} != {right}")
    log.info(report.summary())
    return report


def verify_anticommutation(engine: CoproductEngine, N: int | None = None) -> CheckReport:
    """d′ ∘ δ_in^! = (-1)^m δ_in^! ∘ d on fiber-product monomials of degree <= N - m.

    Skipped with a note when E · (v⁽¹⁾ − v⁽²⁾) ≠ 0 for some generator v, where
    the shriek map is not a chain map (untruncated models such as ∧(x, y), dy = x²).
    """
    N = N if N is not None else engine.cutoff
    shriek = engine.shriek
    blocking = diagonal_obstructions(engine.bundle, engine.euler_cocycle)
    if not blocking:
        return verify_graded_commutation(shriek, N)
    report = CheckReport(
        name=f"d∘{shriek.name} = (-1)^{shriek.shift} {shriek.name}∘d",
        checked_degree=N - shriek.shift,
    )
    report.notes.append(
        f"skipped: E·(v⁽¹⁾ − v⁽²⁾) ≠ 0 for v in {', '.join(blocking)}; "
        "use the quotient form of the model"
    )
    log.info(report.summary())
    return report
