"""Degreewise cohomology of semifree algebras by exact elimination."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sullivanloops.algebra import AlgebraMorphism, Element, SemifreeCDGA, differential
from sullivanloops.algebra.ring import Exponents
from sullivanloops.errors import (
    ConstructionError,
    CutoffExceededError,
    NotClosedError,
    UnknownClassError,
    UnverifiedMorphismError,
)
from sullivanloops.linalg import EchelonBasis, Row, SparseVector, dense_rank, kernel_basis, scaled
from sullivanloops.reports import CheckReport

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CohomologyClass:
    """A basis class: its position in H^n, its label and a cocycle representative."""

    degree: int
    index: int
    label: str
    representative: Element


@dataclass(frozen=True)
class ClassVector:
    """A cohomology class given by coordinates in a table's basis."""

    degree: int
    coordinates: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


@dataclass(frozen=True)
class Projection(ClassVector):
    """Coordinates of a cocycle z together with w such that z - Σ cᵢ repᵢ = d(w)."""

    witness: Element | None = None


@dataclass
class DegreeCohomology:
    degree: int
    basis: tuple[Exponents, ...]
    previous_basis: tuple[Exponents, ...]
    classes: tuple[CohomologyClass, ...]
    kernel_dimension: int
    boundary_rank: int
    image_rank: int
    echelon: EchelonBasis = field(repr=False, default_factory=EchelonBasis)

    @property
    def dimension(self) -> int:
        return len(self.classes)


def _vector(element: Element, index: dict[Exponents, int]) -> SparseVector:
    return {index[e]: c for e, c in element.terms.items()}


def _element(A: SemifreeCDGA, vector: SparseVector, basis: Sequence[Exponents]) -> Element:
    return Element.from_terms(A.ring, ((basis[i], c) for i, c in vector.items()))


def _degree_limit(A: SemifreeCDGA) -> int:
    return A.validated_degree if A.validated_degree is not None else A.cutoff - 1


def cohomology(A: SemifreeCDGA, n: int) -> DegreeCohomology:
    """ker(d_n) / im(d_{n-1}) with echelon-chosen representatives.

    Representatives are fully reduced against the boundaries and earlier
    classes; each is labeled by its leading monomial, which carries coefficient 1.
    """
    if n + 1 > _degree_limit(A):
        raise CutoffExceededError(
            f"H^{n} of {A.name} needs degree {n + 1}, beyond the validated range {_degree_limit(A)}"
        )
    ring = A.ring
    basis = ring.basis(n)
    previous = ring.basis(n - 1) if n >= 1 else ()
    following = ring.basis(n + 1)
    index = {e: i for i, e in enumerate(basis)}
    next_index = {e: i for i, e in enumerate(following)}

    echelon = EchelonBasis()
    for u, exps in enumerate(previous):
        boundary = differential(A, ring.monomial(exps))
        echelon.insert(_vector(boundary, index), witness={u: Fraction(1)})
    boundary_rank = len(echelon)

    columns = [_vector(differential(A, ring.monomial(e)), next_index) for e in basis]
    kernel = kernel_basis(columns)

    classes: list[CohomologyClass] = []
    for z in kernel:
        reduction = echelon.reduce(z)
        pivot = reduction.leading
        if pivot is None:
            continue
        vector = scaled(reduction.remainder, 1 / reduction.remainder[pivot])
        echelon.rows[pivot] = Row(vector=vector, coords={len(classes): Fraction(1)})
        classes.append(
            CohomologyClass(
                degree=n,
                index=len(classes),
                label=ring.format_exponents(basis[pivot]),
                representative=_element(A, vector, basis),
            )
        )
    log.debug("H^%d(%s) has dimension %d", n, A.name, len(classes))
    return DegreeCohomology(
        degree=n,
        basis=basis,
        previous_basis=previous,
        classes=tuple(classes),
        kernel_dimension=len(kernel),
        boundary_rank=boundary_rank,
        image_rank=len(basis) - len(kernel),
        echelon=echelon,
    )


@dataclass
class CohomologyTable:
    """Cohomology of an algebra in degrees 0..top."""

    algebra: SemifreeCDGA
    top: int
    degrees: dict[int, DegreeCohomology]

    def __getitem__(self, n: int) -> DegreeCohomology:
        if n not in self.degrees:
            raise CutoffExceededError(
                f"degree {n} is outside the table of {self.algebra.name} (0..{self.top})"
            )
        return self.degrees[n]

    def classes(self, n: int) -> tuple[CohomologyClass, ...]:
        return self[n].classes

    def dimension(self, n: int) -> int:
        return self[n].dimension

    def all_classes(self) -> list[CohomologyClass]:
        return [c for n in sorted(self.degrees) for c in self.degrees[n].classes]

    def find(self, label: str) -> CohomologyClass:
        for cls in self.all_classes():
            if cls.label == label:
                return cls
        raise UnknownClassError(f"no basis class labeled {label!r} in H*({self.algebra.name})")

    def unit_vector(self, cls: CohomologyClass) -> ClassVector:
        coords = [Fraction(0)] * self.dimension(cls.degree)
        coords[cls.index] = Fraction(1)
        return ClassVector(cls.degree, tuple(coords))

    def element(self, vector: ClassVector) -> Element:
        total = self.algebra.ring.zero()
        for cls, coeff in zip(self.classes(vector.degree), vector.coordinates):
            if coeff:
                total = total + cls.representative.scale(coeff)
        return total

    def format(self, vector: ClassVector) -> str:
        parts = []
        for cls, coeff in zip(self.classes(vector.degree), vector.coordinates):
            if not coeff:
                continue
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            body = f"[{cls.label}]" if magnitude == 1 else f"{magnitude}*[{cls.label}]"
            parts.append((sign, body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def project_class(self, z: Element, degree: int | None = None) -> Projection:
        return project_class(self, z, degree)


def cohomology_table(A: SemifreeCDGA, N: int | None = None) -> CohomologyTable:
    """Cohomology in degrees 0..N-1, N defaulting to the validated degree."""
    limit = _degree_limit(A)
    if N is None:
        N = limit
    if N > limit:
        raise CutoffExceededError(
            f"table up to degree {N - 1} of {A.name} exceeds the validated range {limit}"
        )
    log.info("computing cohomology of %s in degrees 0..%d", A.name, N - 1)
    return CohomologyTable(
        algebra=A,
        top=N - 1,
        degrees={n: cohomology(A, n) for n in range(N)},
    )


def project_class(table: CohomologyTable, z: Element, degree: int | None = None) -> Projection:
    """Coordinates of the class of a homogeneous cocycle, with a coboundary witness."""
    A = table.algebra
    if z.ring is not A.ring and z.ring != A.ring:
        raise ConstructionError(f"element is not in {A.name}")
    if z:
        degree = z.degree
    elif degree is None:
        raise ValueError("the degree of a zero element must be given")
    part = table[degree]
    dz = differential(A, z)
    if dz:
        raise NotClosedError(f"element {z} is not a cocycle: d = {dz}", witness=dz)
    index = {e: i for i, e in enumerate(part.basis)}
    reduction = part.echelon.reduce(_vector(z, index))
    if reduction.remainder:
        raise ConstructionError(f"cocycle {z} is not spanned by boundaries and representatives")
    coordinates = tuple(reduction.coords.get(i, Fraction(0)) for i in range(part.dimension))
    witness = _element(A, reduction.witness, part.previous_basis)
    return Projection(degree=degree, coordinates=coordinates, witness=witness)


def induced_map(
    phi: AlgebraMorphism,
    n: int,
    source: CohomologyTable,
    target: CohomologyTable,
) -> list[list[Fraction]]:
    """Matrix of H^n(phi): one row per target class, one column per source class."""
    if phi.verified_degree is None or phi.verified_degree < n:
        raise UnverifiedMorphismError(f"{phi.name} is not verified as a chain map in degree {n}")
    columns = [
        project_class(target, phi.apply(cls.representative), n).coordinates
        for cls in source.classes(n)
    ]
    rows = target.dimension(n)
    return [[column[r] for column in columns] for r in range(rows)]


def verify_quasi_iso(
    phi: AlgebraMorphism,
    N: int,
    source: CohomologyTable | None = None,
    target: CohomologyTable | None = None,
) -> CheckReport:
    """H^n(phi) bijective for every n <= N-1; the top degree is never trusted."""
    source = source or cohomology_table(phi.source, N)
    target = target or cohomology_table(phi.target, N)
    report = CheckReport(name=f"quasi-isomorphism {phi.name}", checked_degree=N - 1)
    report.notes.append(f"degree {N} excluded: its cokernel needs d out of degree {N}")
    for n in range(N):
        report.checked += 1
        matrix = induced_map(phi, n, source, target)
        dim_source, dim_target = source.dimension(n), target.dimension(n)
        if dim_source != dim_target:
            report.record(f"H^{n}", f"dimensions {dim_source} -> {dim_target}")
        elif dense_rank(matrix) != dim_source:
            report.record(f"H^{n}", f"induced map has rank {dense_rank(matrix)} < {dim_source}")
    log.info(report.summary())
    return report


def betti_numbers(table: CohomologyTable) -> list[int]:
    return [table.dimension(n) for n in range(table.top + 1)]
