"""Poincaré duality in the base: dual bases, the diagonal class and χ(M)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from sullivanloops.algebra import Element, differential
from sullivanloops.cohomology import CohomologyClass, CohomologyTable, project_class
from sullivanloops.errors import ConstructionError, OrientationError, PoincareDualityError
from sullivanloops.linalg import invert
from sullivanloops.loops import LoopModelBundle, to_copy

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualBasis:
    """A basis {β_l} of H*(M) with duals {β̂_l}: ⟨β̂_l ∪ β_k⟩ = δ_lk."""

    table: CohomologyTable
    dimension: int
    classes: tuple[CohomologyClass, ...]
    duals: tuple[Element, ...]
    fundamental: Element
    pairing: tuple[tuple[Fraction, ...], ...]

    def pair(self, z: Element) -> Fraction:
        """The ω-coefficient of a degree-m cocycle."""
        return _pairing_functional(self.table, self.fundamental, self.dimension)(z)


def _pairing_functional(table: CohomologyTable, fundamental: Element, m: int):
    omega = project_class(table, fundamental, m).coordinates[0]

    def functional(z: Element) -> Fraction:
        if not z:
            return Fraction(0)
        return project_class(table, z, m).coordinates[0] / omega

    return functional


def poincare_dual_basis(table: CohomologyTable, m: int, fundamental: Element) -> DualBasis:
    """Solve the pairing system degree by degree."""
    if table.top < m:
        raise PoincareDualityError(f"cohomology table stops at degree {table.top} < {m}")
    for k in range(m + 1, table.top + 1):
        if table.dimension(k):
            raise PoincareDualityError(f"H^{k} is nonzero above the dimension {m}")
    if table.dimension(m) != 1:
        raise OrientationError(f"H^{m} has dimension {table.dimension(m)}, expected 1")
    if not fundamental or project_class(table, fundamental, m).is_zero:
        raise OrientationError(f"the fundamental monomial {fundamental} is zero in H^{m}")
    pair = _pairing_functional(table, fundamental, m)

    classes: list[CohomologyClass] = []
    duals: list[Element] = []
    for k in range(m + 1):
        lower = table.classes(k)
        upper = table.classes(m - k)
        if len(lower) != len(upper):
            raise PoincareDualityError(
                f"dim H^{k} = {len(lower)} but dim H^{m - k} = {len(upper)}"
            )
        if not lower:
            continue
        gram = [
            [pair(a.representative * b.representative) for b in lower] for a in upper
        ]
        try:
            solution = invert(gram)
        except ZeroDivisionError:
            raise PoincareDualityError(f"the pairing H^{m - k} x H^{k} is degenerate") from None
        for l, cls in enumerate(lower):
            dual = table.algebra.ring.zero()
            for j, a in enumerate(upper):
                if solution[l][j]:
                    dual = dual + a.representative.scale(solution[l][j])
            classes.append(cls)
            duals.append(dual)

    pairing = tuple(
        tuple(
            pair(hat * cls.representative) if cls.degree == own.degree else Fraction(0)
            for cls in classes
        )
        for own, hat in zip(classes, duals)
    )
    for l, row in enumerate(pairing):
        for k, value in enumerate(row):
            if value != (1 if l == k else 0):
                raise PoincareDualityError(f"dual basis check failed at ({l}, {k}): {value}")
    log.info("dual basis of %s has %d classes", table.algebra.name, len(classes))
    return DualBasis(
        table=table,
        dimension=m,
        classes=tuple(classes),
        duals=tuple(duals),
        fundamental=fundamental,
        pairing=pairing,
    )


def diagonal_euler_class(dual: DualBasis, bundle: LoopModelBundle) -> Element:
    """e_Δ = Σ_l (-1)^|β_l| β̂_l ⊗ β_l in M_M ⊗ M_M."""
    total = bundle.base_square.ring.zero()
    for cls, hat in zip(dual.classes, dual.duals):
        term = to_copy(bundle, hat, 1) * to_copy(bundle, cls.representative, 2)
        total = total + (-term if cls.degree % 2 else term)
    closed = differential(bundle.base_square, total)
    if closed:
        raise ConstructionError(f"diagonal class is not closed: d = {closed}")
    return total


def euler_characteristic(table: CohomologyTable, m: int) -> int:
    """Σ (-1)^k dim H^k(M) over 0 <= k <= m."""
    return sum((-1) ** k * table.dimension(k) for k in range(m + 1))
