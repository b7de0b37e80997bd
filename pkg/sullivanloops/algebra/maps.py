"""Algebra morphisms and degree-shifting linear maps between semifree algebras."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from sullivanloops.algebra.cdga import SemifreeCDGA, differential
from sullivanloops.algebra.ring import Element, Exponents
from sullivanloops.errors import ConstructionError, DomainMismatchError, ModelError
from sullivanloops.reports import CheckReport

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """A multiplicative map determined by its values on generators."""

    name: str
    source: SemifreeCDGA
    target: SemifreeCDGA
    images: Mapping[str, Element]
    verified_degree: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def create(
        cls,
        name: str,
        source: SemifreeCDGA,
        target: SemifreeCDGA,
        images: Mapping[str, Element],
    ) -> AlgebraMorphism:
        resolved: dict[str, Element] = {}
        for g in source.generators:
            if g.name not in images:
                raise ModelError(f"{name}: no image for generator {g.name}")
            image = images[g.name]
            if image.ring is not target.ring and image.ring != target.ring:
                raise DomainMismatchError(f"{name}: image of {g.name} is not in {target.name}")
            degrees = image.degrees()
            if degrees and degrees != {g.degree}:
                raise ModelError(f"{name}: image of {g.name} has degree {sorted(degrees)}")
            resolved[g.name] = image
        return cls(name=name, source=source, target=target, images=resolved)

    def apply(self, a: Element) -> Element:
        if a.ring is not self.source.ring and a.ring != self.source.ring:
            raise DomainMismatchError(f"{self.name}: element is not in {self.source.name}")
        return self.target.ring.substitute(a, self.images, self._cache)

    __call__ = apply


def verify_chain_map(phi: AlgebraMorphism, N: int) -> CheckReport:
    """Check phi(d m) = d phi(m) on every source monomial of degree <= N."""
    report = CheckReport(name=f"chain map {phi.name}", checked_degree=N)
    ring = phi.source.ring
    for n in range(N + 1):
        for exps in ring.basis(n):
            report.checked += 1
            m = ring.monomial(exps)
            left = phi.apply(differential(phi.source, m))
            right = differential(phi.target, phi.apply(m))
            if left != right:
                report.record(ring.format_exponents(exps), f"φ(dm) = {left}, dφ(m) = {right}")
    log.info(report.summary())
    return report


def verified(phi: AlgebraMorphism, N: int) -> AlgebraMorphism:
    """Return phi marked as a chain map up to N, or raise ConstructionError."""
    report = verify_chain_map(phi, N)
    if not report.passed:
        raise ConstructionError(report.summary(), report)
    return dataclasses.replace(phi, verified_degree=N)


def compose(psi: AlgebraMorphism, phi: AlgebraMorphism) -> AlgebraMorphism:
    """psi ∘ phi; verified up to the smaller of the two verified degrees."""
    if psi.source.ring != phi.target.ring:
        raise DomainMismatchError(f"cannot compose {psi.name} after {phi.name}")
    images = {name: psi.apply(image) for name, image in phi.images.items()}
    composite = AlgebraMorphism.create(f"{psi.name}∘{phi.name}", phi.source, psi.target, images)
    if psi.verified_degree is not None and phi.verified_degree is not None:
        composite = dataclasses.replace(
            composite, verified_degree=min(psi.verified_degree, phi.verified_degree)
        )
    return composite


def identity(A: SemifreeCDGA) -> AlgebraMorphism:
    images = {g.name: A.ring.gen(g.name) for g in A.generators}
    phi = AlgebraMorphism.create(f"id_{A.name}", A, A, images)
    return dataclasses.replace(phi, verified_degree=A.cutoff - 1)


@dataclass(frozen=True, eq=False)
class GradedLinearMap:
    """A linear map raising degree by ``shift``, defined monomial by monomial."""

    name: str
    source: SemifreeCDGA
    target: SemifreeCDGA
    shift: int
    action: Callable[[Exponents], Element]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def apply(self, a: Element) -> Element:
        if a.ring is not self.source.ring and a.ring != self.source.ring:
            raise DomainMismatchError(f"{self.name}: element is not in {self.source.name}")
        total: dict[Exponents, Fraction] = {}
        for exps, coeff in a.terms.items():
            image = self._cache.get(exps)
            if image is None:
                image = self.action(exps)
                expected = self.source.ring.degree_of(exps) + self.shift
                if image and image.degrees() != {expected}:
                    raise ConstructionError(f"{self.name} does not raise degree by {self.shift}")
                self._cache[exps] = image
            for e, c in image.terms.items():
                total[e] = total.get(e, Fraction(0)) + coeff * c
        return Element.from_terms(self.target.ring, total.items())

    __call__ = apply


def verify_graded_commutation(f: GradedLinearMap, N: int) -> CheckReport:
    """Check d f = (-1)^shift f d on every source monomial w with |w| + shift <= N."""
    sign = -1 if f.shift % 2 else 1
    top = N - f.shift
    report = CheckReport(name=f"d∘{f.name} = (-1)^{f.shift} {f.name}∘d", checked_degree=max(top, -1))
    ring = f.source.ring
    for n in range(top + 1):
        for exps in ring.basis(n):
            report.checked += 1
            w = ring.monomial(exps)
            left = differential(f.target, f.apply(w))
            right = f.apply(differential(f.source, w)).scale(sign)
            if left != right:
                report.record(ring.format_exponents(exps), f"d f(w) = {left}, ±f(dw) = {right}")
    log.info(report.summary())
    return report
