"""Exact graded-commutative algebra: rings, semifree CDGAs and their maps."""

from sullivanloops.algebra.cdga import (
    DerivationSpec,
    SemifreeCDGA,
    differential,
    embed,
    ensure_d_squared,
    extend_derivation,
    monomial_basis,
    relabel,
    rewrap,
    scratch_ring,
    tensor,
    validate_d_squared,
    working_cutoff,
)
from sullivanloops.algebra.maps import (
    AlgebraMorphism,
    GradedLinearMap,
    compose,
    identity,
    verified,
    verify_chain_map,
    verify_graded_commutation,
)
from sullivanloops.algebra.ring import Element, Generator, GradedRing, Monomial, Origin


def multiply(a: Element, b: Element) -> Element:
    """Canonical product with Koszul signs and relations applied."""
    return a * b


__all__ = [
    "AlgebraMorphism",
    "DerivationSpec",
    "Element",
    "Generator",
    "GradedLinearMap",
    "GradedRing",
    "Monomial",
    "Origin",
    "SemifreeCDGA",
    "compose",
    "differential",
    "embed",
    "ensure_d_squared",
    "extend_derivation",
    "identity",
    "monomial_basis",
    "multiply",
    "relabel",
    "rewrap",
    "scratch_ring",
    "tensor",
    "validate_d_squared",
    "verified",
    "verify_chain_map",
    "verify_graded_commutation",
    "working_cutoff",
]
