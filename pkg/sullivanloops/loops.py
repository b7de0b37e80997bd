"""Sullivan models of the free loop space and of the spaces around the loop coproduct.

Naming: a base generator ``v`` gives ``vbar`` in the loop model, ``vbar1`` and
``vbar2`` in the fiber product, and ``v1``, ``v2``, ``vbar1``, ``vbar2`` in
both the two-copy model M'_LM and M_LM ⊗ M_LM.
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator

from sullivanloops.algebra import (
    AlgebraMorphism,
    DerivationSpec,
    Element,
    Generator,
    GradedRing,
    Origin,
    SemifreeCDGA,
    ensure_d_squared,
    extend_derivation,
    relabel,
    rewrap,
    scratch_ring,
    tensor,
    verified,
    working_cutoff,
)
from sullivanloops.algebra.cdga import differential
from sullivanloops.errors import (
    ConstructionError,
    CutoffExceededError,
    NotSimplyConnectedError,
    SeriesDivergenceError,
)
from sullivanloops.reports import CheckReport

log = logging.getLogger(__name__)


class SeriesConvention(str, Enum):
    """How the exponential series in the differential of M'_LM is evaluated."""

    PATH_HALVES = "path-halves"
    AS_DISPLAYED = "as-displayed"


def bar_name(name: str) -> str:
    return f"{name}bar"


def copy_name(name: str, copy: int) -> str:
    return f"{name}{copy}"


_COPY_ORIGINS = {1: (Origin.COPY1, Origin.BAR1), 2: (Origin.COPY2, Origin.BAR2)}


def _copy_generator(g: Generator, copy: int) -> Generator:
    base_origin, bar_origin = _COPY_ORIGINS[copy]
    origin = bar_origin if g.origin.is_bar else base_origin
    return Generator(copy_name(g.name, copy), g.degree, origin)


def _require_simply_connected(M: SemifreeCDGA) -> None:
    low = [g.name for g in M.generators if g.degree <= 1]
    if low:
        raise NotSimplyConnectedError(
            f"{M.name} has generators of degree <= 1: {', '.join(low)}"
        )


def _require_range(M: SemifreeCDGA, N: int) -> int:
    cutoff = working_cutoff(N)
    if M.cutoff < cutoff:
        raise CutoffExceededError(f"{M.name} was built for degrees below {M.cutoff - 1}, not {N}")
    return cutoff


def _base_differentials(M: SemifreeCDGA, scratch: GradedRing, rename=lambda n: n) -> dict[str, Element]:
    """Differentials of base generators carried into a scratch ring, where they fit."""
    images = {g.name: scratch.gen(rename(g.name)) for g in M.generators}
    result = {}
    for g in M.generators:
        if g.degree + 1 <= scratch.cutoff:
            result[g.name] = scratch.substitute(M.raw_differential[g.name], images)
    return result


def verify_word_length(A: SemifreeCDGA, N: int) -> CheckReport:
    """Check that d preserves V̄-word length on every monomial of degree <= N."""
    report = CheckReport(name=f"word length preserved by d on {A.name}", checked_degree=N)
    ring = A.ring
    for n in range(N + 1):
        for exps in ring.basis(n):
            report.checked += 1
            image = differential(A, ring.monomial(exps))
            lengths = image.word_lengths()
            if lengths and lengths != {ring.word_length(exps)}:
                report.record(ring.format_exponents(exps), f"d = {image}")
    log.info(report.summary())
    return report


def _ensure_word_length(A: SemifreeCDGA, N: int) -> None:
    report = verify_word_length(A, N)
    if not report.passed:
        raise ConstructionError(report.summary(), report)


def build_loop_model(M: SemifreeCDGA, N: int) -> SemifreeCDGA:
    """(∧V ⊗ ∧V̄, d) with d(v̄) = -s(dv), s(v) = v̄, s(v̄) = 0."""
    _require_simply_connected(M)
    cutoff = _require_range(M, N)
    bars = [Generator(bar_name(g.name), g.degree - 1, Origin.BAR1) for g in M.generators]
    ring = GradedRing.create(
        M.generators + tuple(bars),
        cutoff=cutoff,
        truncations=dict(M.ring.truncations),
        killed=M.ring.killed,
    )
    scratch = scratch_ring(ring)
    base_d = _base_differentials(M, scratch)
    s = DerivationSpec(
        shift=-1,
        values={
            **{g.name: scratch.gen(bar_name(g.name)) for g in M.generators},
            **{b.name: scratch.zero() for b in bars},
        },
    )
    values: dict[str, Element] = {}
    for g in M.generators:
        if g.name not in base_d:
            continue
        if g.degree + 1 <= cutoff:
            values[g.name] = rewrap(base_d[g.name], ring.cover)
        values[bar_name(g.name)] = rewrap(-extend_derivation(s, base_d[g.name]), ring.cover)
    loop = SemifreeCDGA.create(f"L{M.name}", ring, values)
    loop = ensure_d_squared(loop, N)
    _ensure_word_length(loop, N)
    return loop


def build_fiber_product_model(M: SemifreeCDGA, N: int) -> SemifreeCDGA:
    """(∧V ⊗ ∧V̄⁽¹⁾ ⊗ ∧V̄⁽²⁾, d) with d(v̄⁽¹⁾) = -s(dv) and d(v̄⁽²⁾) = -s′(dv)."""
    _require_simply_connected(M)
    cutoff = _require_range(M, N)
    bars = {
        copy: [
            Generator(copy_name(bar_name(g.name), copy), g.degree - 1, _COPY_ORIGINS[copy][1])
            for g in M.generators
        ]
        for copy in (1, 2)
    }
    ring = GradedRing.create(
        M.generators + tuple(bars[1]) + tuple(bars[2]),
        cutoff=cutoff,
        truncations=dict(M.ring.truncations),
        killed=M.ring.killed,
    )
    scratch = scratch_ring(ring)
    base_d = _base_differentials(M, scratch)
    zero_bars = {b.name: scratch.zero() for copy in (1, 2) for b in bars[copy]}
    suspensions = {
        copy: DerivationSpec(
            shift=-1,
            values={
                **{g.name: scratch.gen(copy_name(bar_name(g.name), copy)) for g in M.generators},
                **zero_bars,
            },
        )
        for copy in (1, 2)
    }
    values: dict[str, Element] = {}
    for g in M.generators:
        if g.name not in base_d:
            continue
        if g.degree + 1 <= cutoff:
            values[g.name] = rewrap(base_d[g.name], ring.cover)
        for copy in (1, 2):
            image = -extend_derivation(suspensions[copy], base_d[g.name])
            values[copy_name(bar_name(g.name), copy)] = rewrap(image, ring.cover)
    fiber = SemifreeCDGA.create(f"L{M.name}×_{M.name}L{M.name}", ring, values)
    fiber = ensure_d_squared(fiber, N)
    _ensure_word_length(fiber, N)
    return fiber


class _LazyDifferential(Mapping):
    """Generator values of d′ where bar values are computed on first use."""

    def __init__(
        self,
        names: tuple[str, ...],
        known: dict[str, Element],
        compute: Callable[[str], Element],
    ) -> None:
        self._names = names
        self._values = dict(known)
        self._compute = compute
        self._active: set[str] = set()

    def __getitem__(self, name: str) -> Element:
        if name in self._values:
            return self._values[name]
        if name not in self._names:
            raise KeyError(name)
        if name in self._active:
            raise ConstructionError(f"the differential of {name} depends on itself")
        self._active.add(name)
        try:
            value = self._compute(name)
        finally:
            self._active.discard(name)
        self._values[name] = value
        return value

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __len__(self) -> int:
        return len(self._names)


def build_mprime_model(
    M: SemifreeCDGA,
    N: int,
    convention: SeriesConvention = SeriesConvention.PATH_HALVES,
) -> SemifreeCDGA:
    """The relative model of (p₀, p_{1/2}) on V⁽¹⁾ ⊕ V⁽²⁾ ⊕ V̄⁽¹⁾ ⊕ V̄⁽²⁾.

    With PATH_HALVES, d′(v̄⁽¹⁾) = (v⁽¹⁾ - v⁽²⁾) - Σ_{n≥1} (s₁d′)ⁿ/n! (v⁽²⁾) where s₁
    sends both copies of v to v̄⁽¹⁾, and symmetrically for v̄⁽²⁾.  AS_DISPLAYED uses
    s′(v⁽ⁱ⁾) = v̄⁽ⁱ⁾ with the series based at v⁽ⁱ⁾; that series does not terminate
    once d has a nonlinear part and raises SeriesDivergenceError.
    """
    _require_simply_connected(M)
    cutoff = _require_range(M, N)
    gens = tuple(
        _copy_generator(g, copy) for copy in (1, 2) for g in M.generators
    ) + tuple(
        Generator(copy_name(bar_name(g.name), copy), g.degree - 1, _COPY_ORIGINS[copy][1])
        for copy in (1, 2)
        for g in M.generators
    )
    ring = GradedRing.create(
        gens,
        cutoff=cutoff,
        truncations={copy_name(n, c): k for n, k in M.ring.truncations for c in (1, 2)},
        killed={copy_name(n, c) for n in M.ring.killed for c in (1, 2)},
    )
    scratch = scratch_ring(ring)
    known: dict[str, Element] = {}
    for copy in (1, 2):
        for name, value in _base_differentials(M, scratch, lambda n, c=copy: copy_name(n, c)).items():
            known[copy_name(name, copy)] = value

    base_of = {copy_name(bar_name(g.name), c): (g, c) for g in M.generators for c in (1, 2)}
    zero_bars = {name: scratch.zero() for name in base_of}

    def suspension(target_copy: int | None) -> DerivationSpec:
        # None sends each copy to its own bar; otherwise both copies go to one bar.
        values = dict(zero_bars)
        for g in M.generators:
            for c in (1, 2):
                bar_copy = c if target_copy is None else target_copy
                values[copy_name(g.name, c)] = scratch.gen(copy_name(bar_name(g.name), bar_copy))
        return DerivationSpec(shift=-1, values=values)

    if convention is SeriesConvention.PATH_HALVES:
        suspensions = {1: suspension(1), 2: suspension(2)}
    else:
        shared = suspension(None)
        suspensions = {1: shared, 2: shared}

    lazy = _LazyDifferential(tuple(g.name for g in gens), known, lambda name: _bar_value(name))
    d_prime = DerivationSpec(shift=1, values=lazy)

    def _bar_value(name: str) -> Element:
        g, c = base_of[name]
        other = 2 if c == 1 else 1
        own, foreign = scratch.gen(copy_name(g.name, c)), scratch.gen(copy_name(g.name, other))
        start = foreign if convention is SeriesConvention.PATH_HALVES else own
        total = own - foreign
        term = start
        cap = g.degree + 1
        for k in range(1, cap + 1):
            term = extend_derivation(suspensions[c], extend_derivation(d_prime, term)) / k
            if not term:
                log.debug("series for d′(%s) terminated after %d terms", name, k - 1)
                return total
            total = total - term
        raise SeriesDivergenceError(
            f"series for d′({name}) did not vanish within {cap} iterations"
        )

    values: dict[str, Element] = {}
    for g in gens:
        if g.origin.is_bar:
            if g.degree + 1 <= cutoff:
                values[g.name] = rewrap(lazy[g.name], ring.cover)
        elif g.degree + 1 <= cutoff and g.name in known:
            values[g.name] = rewrap(known[g.name], ring.cover)
    mprime = SemifreeCDGA.create(f"M′L{M.name}", ring, values)
    return ensure_d_squared(mprime, N)


@dataclass(frozen=True, eq=False)
class LoopModelBundle:
    """All algebras and structure maps built from one base model."""

    base: SemifreeCDGA
    loop: SemifreeCDGA
    mprime: SemifreeCDGA
    fiber_product: SemifreeCDGA
    loop_square: SemifreeCDGA
    base_square: SemifreeCDGA
    cutoff: int
    convention: SeriesConvention = SeriesConvention.PATH_HALVES
    delta_out: AlgebraMorphism | None = None
    delta_in: AlgebraMorphism | None = None
    rho: AlgebraMorphism | None = None
    lambda_p0: AlgebraMorphism | None = None
    lambda_p0_p_half: AlgebraMorphism | None = None
    multiplication: AlgebraMorphism | None = None

    @property
    def algebras(self) -> tuple[SemifreeCDGA, ...]:
        return (self.base, self.loop, self.mprime, self.fiber_product, self.loop_square)

    @property
    def morphisms(self) -> tuple[AlgebraMorphism, ...]:
        maps = (
            self.delta_out,
            self.delta_in,
            self.rho,
            self.lambda_p0,
            self.lambda_p0_p_half,
            self.multiplication,
        )
        return tuple(m for m in maps if m is not None)


def _gens(A: SemifreeCDGA, names: Mapping[str, str]) -> dict[str, Element]:
    return {source: A.ring.gen(target) for source, target in names.items()}


def _collapse_images(bundle: LoopModelBundle, target: SemifreeCDGA, bar_target) -> dict[str, Element]:
    images: dict[str, str] = {}
    for g in bundle.base.generators:
        for c in (1, 2):
            images[copy_name(g.name, c)] = g.name
            images[copy_name(bar_name(g.name), c)] = bar_target(g.name, c)
    return _gens(target, images)


def delta_out_representative(bundle: LoopModelBundle) -> AlgebraMorphism:
    """μ ⊗ id ⊗ id : M_LM ⊗ M_LM → M_{LM×_M LM}."""
    images = _collapse_images(
        bundle, bundle.fiber_product, lambda name, c: copy_name(bar_name(name), c)
    )
    phi = AlgebraMorphism.create("δ_out", bundle.loop_square, bundle.fiber_product, images)
    return verified(phi, bundle.cutoff)


def delta_in_representative(bundle: LoopModelBundle) -> AlgebraMorphism:
    """μ ⊗ id ⊗ id : M'_LM → M_{LM×_M LM}."""
    images = _collapse_images(
        bundle, bundle.fiber_product, lambda name, c: copy_name(bar_name(name), c)
    )
    phi = AlgebraMorphism.create("δ_in", bundle.mprime, bundle.fiber_product, images)
    return verified(phi, bundle.cutoff)


def rho(bundle: LoopModelBundle) -> AlgebraMorphism:
    """μ ⊗ μ̄ : M'_LM → M_LM, sending both copies of v and of v̄ to v and v̄."""
    images = _collapse_images(bundle, bundle.loop, lambda name, c: bar_name(name))
    phi = AlgebraMorphism.create("ρ", bundle.mprime, bundle.loop, images)
    return verified(phi, bundle.cutoff)


def lambda_p0(bundle: LoopModelBundle) -> AlgebraMorphism:
    """The inclusion (∧V, d) → M_LM."""
    images = _gens(bundle.loop, {g.name: g.name for g in bundle.base.generators})
    phi = AlgebraMorphism.create("λ_p0", bundle.base, bundle.loop, images)
    return verified(phi, bundle.cutoff)


def lambda_p0_p_half(bundle: LoopModelBundle) -> AlgebraMorphism:
    """The inclusion M_M ⊗ M_M → M'_LM, v⊗1 ↦ v⁽¹⁾ and 1⊗v ↦ v⁽²⁾."""
    names = {
        copy_name(g.name, c): copy_name(g.name, c)
        for g in bundle.base.generators
        for c in (1, 2)
    }
    phi = AlgebraMorphism.create(
        "λ_p0×p½", bundle.base_square, bundle.mprime, _gens(bundle.mprime, names)
    )
    return verified(phi, bundle.cutoff)


def multiplication(bundle: LoopModelBundle) -> AlgebraMorphism:
    """μ : M_M ⊗ M_M → M_M."""
    names = {copy_name(g.name, c): g.name for g in bundle.base.generators for c in (1, 2)}
    phi = AlgebraMorphism.create("μ", bundle.base_square, bundle.base, _gens(bundle.base, names))
    return verified(phi, bundle.cutoff)


def square(A: SemifreeCDGA, name: str) -> SemifreeCDGA:
    """A ⊗ A with the copies tagged 1 and 2."""
    first = relabel(A, f"{A.name}(1)", lambda g: _copy_generator(g, 1))
    second = relabel(A, f"{A.name}(2)", lambda g: _copy_generator(g, 2))
    return tensor(first, second, name)


def to_copy(bundle: LoopModelBundle, element: Element, copy: int) -> Element:
    """Carry an element of the loop model (or the base) into the given tensor copy."""
    if element.ring == bundle.loop.ring:
        target = bundle.loop_square.ring
    elif element.ring == bundle.base.ring:
        target = bundle.base_square.ring
    else:
        raise ConstructionError("only loop-model and base elements have tensor copies")
    images = {g.name: target.gen(copy_name(g.name, copy)) for g in element.ring.generators}
    return target.substitute(element, images)


def build_bundle(
    M: SemifreeCDGA,
    N: int,
    convention: SeriesConvention = SeriesConvention.PATH_HALVES,
) -> LoopModelBundle:
    """Build every algebra and structure map, validating d² and the chain-map property up to N."""
    log.info("building loop models of %s up to degree %d", M.name, N)
    base = ensure_d_squared(M, N)
    loop = build_loop_model(base, N)
    loop_square = ensure_d_squared(square(loop, f"L{M.name}⊗L{M.name}"), N)
    _ensure_word_length(loop_square, N)
    bundle = LoopModelBundle(
        base=base,
        loop=loop,
        mprime=build_mprime_model(base, N, convention),
        fiber_product=build_fiber_product_model(base, N),
        loop_square=loop_square,
        base_square=ensure_d_squared(square(base, f"{M.name}⊗{M.name}"), N),
        cutoff=N,
        convention=convention,
    )
    return dataclasses.replace(
        bundle,
        delta_out=delta_out_representative(bundle),
        delta_in=delta_in_representative(bundle),
        rho=rho(bundle),
        lambda_p0=lambda_p0(bundle),
        lambda_p0_p_half=lambda_p0_p_half(bundle),
        multiplication=multiplication(bundle),
    )
