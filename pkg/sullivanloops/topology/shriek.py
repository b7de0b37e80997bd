"""The degree-m linear map standing for the shriek of δ_in."""

from __future__ import annotations

from fractions import Fraction

from sullivanloops.algebra import Element, GradedLinearMap
from sullivanloops.algebra.ring import Exponents
from sullivanloops.errors import ConstructionError
from sullivanloops.loops import LoopModelBundle, copy_name


def shriek_delta_in(bundle: LoopModelBundle, euler: Element, dimension: int) -> GradedLinearMap:
    """(a ⊗ X ⊗ Y) ↦ (½(a⁽¹⁾ + a⁽²⁾) · X · Y) · E from M_{LM×_M LM} to M'_LM.

    ``euler`` is the diagonal class already carried into M'_LM, and a monomial
    of the fiber product is split into its ∧V part a and its bar parts X·Y.
    """
    source = bundle.fiber_product
    target = bundle.mprime
    if euler.ring != target.ring:
        raise ConstructionError("the diagonal class must live in the two-copy model")
    ring = source.ring
    base_positions = {i for i, g in enumerate(ring.generators) if not g.origin.is_bar}
    bar_positions = sorted(i for i, g in enumerate(ring.generators) if g.origin.is_bar)
    copies = {
        c: {g.name: target.ring.gen(copy_name(g.name, c)) for g in bundle.base.generators}
        for c in (1, 2)
    }
    half = Fraction(1, 2)

    def action(exps: Exponents) -> Element:
        width = len(exps)
        base_part = tuple(exps[i] if i in base_positions else 0 for i in range(width))
        bar_part = tuple(exps[i] if i in bar_positions else 0 for i in range(width))
        a = ring.monomial(base_part)
        symmetrized = (
            target.ring.substitute(a, copies[1]) + target.ring.substitute(a, copies[2])
        ).scale(half)
        bars = target.ring.from_powers(
            {ring.generators[i].name: exps[i] for i in bar_positions if exps[i]}
        )
        return symmetrized * bars * euler

    return GradedLinearMap(
        name="δ_in^!",
        source=source,
        target=target,
        shift=dimension,
        action=action,
    )


def diagonal_obstructions(bundle: LoopModelBundle, euler: Element) -> list[str]:
    """Base generators v with E · (v⁽¹⁾ − v⁽²⁾) ≠ 0 in M'_LM.

    d′(v̄⁽ⁱ⁾) starts with ±(v⁽¹⁾ − v⁽²⁾), so the shriek map commutes with d only
    when this list is empty, as it is for the quotient models of CP^n and for
    odd spheres. Products beyond the cutoff are not examined.
    """
    ring = bundle.mprime.ring
    top = ring.cutoff - max(euler.degrees(), default=0)
    found = []
    for g in bundle.base.generators:
        if g.degree > top:
            continue
        difference = ring.gen(copy_name(g.name, 1)) - ring.gen(copy_name(g.name, 2))
        if euler * difference:
            found.append(g.name)
    return found
