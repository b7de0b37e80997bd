"""Semifree commutative differential graded algebras."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping

from sullivanloops.algebra.ring import Element, Exponents, Generator, GradedRing, Monomial
from sullivanloops.errors import (
    ConstructionError,
    CutoffExceededError,
    DomainMismatchError,
    IncompleteDerivationError,
    ModelError,
)
from sullivanloops.reports import CheckReport

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivationSpec:
    """A derivation of a free ring, given by its values on generators.

    ``values`` may be a lazily evaluated mapping; a missing generator raises
    IncompleteDerivationError when the derivation reaches it.
    """

    shift: int
    values: Mapping[str, Element]

    def value(self, name: str) -> Element:
        try:
            return self.values[name]
        except KeyError:
            raise IncompleteDerivationError(f"derivation has no value on {name}") from None


def extend_derivation(theta: DerivationSpec, a: Element) -> Element:
    """Evaluate the Leibniz extension of ``theta`` at ``a``.

    For the generator at position i with exponent e the contribution is
    e * (-1)^(shift * |prefix|) * prefix * theta(g) * g^(e-1) * suffix.
    """
    ring = a.ring
    total = ring.zero()
    width = len(ring.generators)
    for exps, coeff in a.terms.items():
        prefix_degree = 0
        for i, e in enumerate(exps):
            if not e:
                continue
            g = ring.generators[i]
            value = theta.value(g.name)
            if value:
                if value.ring is not ring and value.ring != ring:
                    raise DomainMismatchError(
                        f"derivation value on {g.name} lives in another algebra"
                    )
                prefix = ring.monomial(exps[:i] + (0,) * (width - i))
                suffix = ring.monomial((0,) * i + (e - 1,) + exps[i + 1 :])
                sign = -1 if (theta.shift * prefix_degree) % 2 else 1
                total = total + (prefix * value * suffix).scale(coeff * e * sign)
            prefix_degree += e * g.degree
    return total


@dataclass(frozen=True, eq=False)
class SemifreeCDGA:
    """(∧V / relations, d) with d stored on generators in the free cover."""

    name: str
    ring: GradedRing
    raw_differential: Mapping[str, Element]
    validated_degree: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def create(
        cls,
        name: str,
        ring: GradedRing,
        differential: Mapping[str, Element],
    ) -> SemifreeCDGA:
        """Build and structurally validate an algebra.

        Generators absent from ``differential`` are closed.  Values are
        elements of the cover; degrees, killed generators and the stability
        of the truncation ideal are checked within the ring's cutoff.
        """
        cover = ring.cover
        raw: dict[str, Element] = {}
        for g in ring.generators:
            value = differential.get(g.name)
            if value is None:
                value = cover.zero()
            elif value.ring is not cover and value.ring != cover:
                if value.ring == ring:
                    value = ring.lift(value)
                else:
                    raise DomainMismatchError(f"d({g.name}) lives in another algebra")
            degrees = value.degrees()
            if degrees and degrees != {g.degree + 1}:
                raise ModelError(
                    f"d({g.name}) = {value} does not have degree {g.degree + 1}"
                )
            raw[g.name] = value
        unknown = set(differential) - set(raw)
        if unknown:
            raise ModelError(f"differential given on unknown generators: {', '.join(sorted(unknown))}")

        algebra = cls(name=name, ring=ring, raw_differential=raw)
        algebra._check_relations()
        log.debug("built algebra %s on %d generators", name, len(ring.generators))
        return algebra

    def _check_relations(self) -> None:
        ring = self.ring
        for name in sorted(ring.killed):
            if ring.generator(name).degree + 1 > ring.cutoff:
                continue
            value = self.raw_differential[name]
            if not value:
                raise ModelError(f"killed generator {name} must have a nonzero differential")
            if ring.reduce(value):
                raise ModelError(
                    f"generator {name} is set to zero but d({name}) = {value} survives the relations"
                )
        for name, power in ring.truncations:
            g = ring.generator(name)
            if power * g.degree + 1 > ring.cutoff:
                continue
            top = ring.cover.from_powers({name: power})
            if ring.reduce(self.cover_differential(top)):
                raise ModelError(f"relation {name}^{power} = 0 is not stable under d")

    @cached_property
    def cover_spec(self) -> DerivationSpec:
        return DerivationSpec(shift=1, values=self.raw_differential)

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.ring.generators

    @property
    def cutoff(self) -> int:
        return self.ring.cutoff

    def cover_differential(self, a: Element) -> Element:
        return extend_derivation(self.cover_spec, a)

    def d(self, a: Element) -> Element:
        return differential(self, a)

    def with_validated_degree(self, degree: int) -> SemifreeCDGA:
        return dataclasses.replace(self, validated_degree=degree)


def differential_limit(A: SemifreeCDGA) -> int:
    """Highest input degree for d.

    Validating d² up to N applies d to elements of degree N + 1, so a validated
    algebra accepts inputs up to N + 1; an unvalidated one up to its cutoff minus one.
    """
    if A.validated_degree is None:
        return A.cutoff - 1
    return min(A.cutoff - 1, A.validated_degree + 1)


def differential(A: SemifreeCDGA, a: Element) -> Element:
    """d(a) in A: lift to the cover, apply the Leibniz extension, reduce."""
    ring = A.ring
    if a.ring is not ring and a.ring != ring:
        raise DomainMismatchError(f"element does not belong to {A.name}")
    if a.terms:
        top = max(a.degrees())
        limit = differential_limit(A)
        if top > limit:
            raise CutoffExceededError(
                f"d of a degree-{top} element leaves the range of {A.name} (d is defined up to degree {limit})"
            )
    cache = A._cache
    total: dict[Exponents, Fraction] = {}
    for exps, coeff in a.terms.items():
        image = cache.get(exps)
        if image is None:
            image = ring.reduce(A.cover_differential(ring.cover.monomial(exps)))
            cache[exps] = image
        for e, c in image.terms.items():
            total[e] = total.get(e, Fraction(0)) + coeff * c
    return Element.from_terms(ring, total.items())


def relabel(
    A: SemifreeCDGA,
    name: str,
    rename: Callable[[Generator], Generator],
) -> SemifreeCDGA:
    """A copy of A with every generator renamed (and possibly re-tagged)."""
    mapping = {g.name: rename(g) for g in A.generators}
    ring = GradedRing.create(
        mapping.values(),
        cutoff=A.cutoff,
        truncations={mapping[n].name: k for n, k in A.ring.truncations},
        killed={mapping[n].name for n in A.ring.killed},
    )
    images = {old: ring.cover.gen(new.name) for old, new in mapping.items()}
    differential_values = {
        mapping[n].name: ring.cover.substitute(value, images)
        for n, value in A.raw_differential.items()
        if mapping[n].degree + 1 <= A.cutoff
    }
    return SemifreeCDGA.create(name, ring, differential_values)


def embed(element: Element, ring: GradedRing) -> Element:
    """Carry an element into a ring containing generators of the same names."""
    images = {g.name: ring.gen(g.name) for g in element.ring.generators}
    return ring.substitute(element, images)


def tensor(A: SemifreeCDGA, B: SemifreeCDGA, name: str | None = None) -> SemifreeCDGA:
    """A ⊗ B with d(a⊗b) = da⊗b + (-1)^|a| a⊗db.

    The Koszul sign comes out of the Leibniz extension on the union of
    generators, whatever their canonical order.
    """
    clash = {g.name for g in A.generators} & {g.name for g in B.generators}
    if clash:
        raise ModelError(f"tensor factors share generator names: {', '.join(sorted(clash))}")
    cutoff = min(A.cutoff, B.cutoff)
    ring = GradedRing.create(
        A.generators + B.generators,
        cutoff=cutoff,
        truncations=dict(A.ring.truncations + B.ring.truncations),
        killed=A.ring.killed | B.ring.killed,
    )
    values: dict[str, Element] = {}
    for factor in (A, B):
        for g in factor.generators:
            if g.degree + 1 <= cutoff:
                values[g.name] = embed(factor.raw_differential[g.name], ring.cover)
    return SemifreeCDGA.create(name or f"{A.name}⊗{B.name}", ring, values)


def monomial_basis(A: SemifreeCDGA, n: int) -> list[Monomial]:
    """Canonically ordered degree-n monomials of A."""
    return [Monomial(exps) for exps in A.ring.basis(n)]


def validate_d_squared(A: SemifreeCDGA, N: int) -> CheckReport:
    """Check d(d(m)) = 0 on every monomial of degree <= N."""
    if N + 2 > A.cutoff:
        raise CutoffExceededError(
            f"checking d² up to degree {N} needs cutoff {N + 2}, {A.name} has {A.cutoff}"
        )
    if A.validated_degree is not None and A.validated_degree < N:
        A = dataclasses.replace(A, validated_degree=None)
    report = CheckReport(name=f"d²=0 on {A.name}", checked_degree=N)
    for n in range(N + 1):
        for exps in A.ring.basis(n):
            report.checked += 1
            once = differential(A, A.ring.monomial(exps))
            twice = differential(A, once)
            if twice:
                report.record(A.ring.format_exponents(exps), f"d²= {twice}")
    log.info(report.summary())
    return report


def ensure_d_squared(A: SemifreeCDGA, N: int) -> SemifreeCDGA:
    """Validate d² = 0 up to N and return A marked as validated, or raise."""
    report = validate_d_squared(A, N)
    if not report.passed:
        raise ConstructionError(report.summary(), report)
    return A.with_validated_degree(N)


def working_cutoff(max_degree: int) -> int:
    """Ring cutoff for algebras validated up to ``max_degree``.

    Two extra degrees make d(d(m)) defined for every monomial m of degree <= max_degree.
    """
    return max_degree + 2


def rewrap(element: Element, ring: GradedRing) -> Element:
    """Reinterpret an element of a ring with the same generator list."""
    if element.ring.generators != ring.generators:
        raise DomainMismatchError("rings have different generators")
    return Element(ring, element.terms)


def scratch_ring(ring: GradedRing) -> GradedRing:
    """The free cover with one more degree of room, for evaluating formulas for d."""
    return GradedRing(generators=ring.generators, cutoff=ring.cutoff + 1)
