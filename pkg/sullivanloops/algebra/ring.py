"""Free graded-commutative rings and their elements.

A ring is a free graded-commutative algebra over the rationals on a sorted
list of generators, optionally quotiented by power truncations g^k = 0 on
even generators and by setting "killed" generators to zero.  The killed
generators and the truncations only matter in the quotient; ``cover()``
returns the free ring on the same generators, in which the formulas of the
loop-space models are evaluated before reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from sullivanloops.errors import CutoffExceededError, DomainMismatchError, ModelError

Exponents = tuple[int, ...]
Scalar = int | Fraction
Product = tuple[int, Exponents] | None

# Monomial products remembered per ring, least recently used evicted first.
PRODUCT_CACHE_SIZE = 1 << 16


class Origin(IntEnum):
    """Which tensor factor or suspension a generator belongs to.

    The integer value is the first component of the canonical generator order,
    so that the ∧V factors always precede the ∧V̄ factors in a monomial.
    """

    BASE = 0
    COPY1 = 1
    COPY2 = 2
    BAR1 = 3
    BAR2 = 4

    @property
    def is_bar(self) -> bool:
        return self in (Origin.BAR1, Origin.BAR2)


@dataclass(frozen=True)
class Generator:
    """A named generator of a free graded-commutative algebra."""

    name: str
    degree: int
    origin: Origin = Origin.BASE

    def __post_init__(self) -> None:
        if not self.name:
            raise ModelError("generator name must not be empty")
        if self.degree < 1:
            raise ModelError(f"generator {self.name} has degree {self.degree} < 1")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def sort_key(self) -> tuple[int, int, str]:
        return (int(self.origin), self.degree, self.name)


@dataclass(frozen=True)
class Monomial:
    """A canonical monomial with its coefficient."""

    exponents: Exponents
    coefficient: Fraction = Fraction(1)


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class GradedRing:
    """Free graded-commutative ring modulo truncations and killed generators."""

    generators: tuple[Generator, ...]
    truncations: tuple[tuple[str, int], ...] = ()
    killed: frozenset[str] = field(default_factory=frozenset)
    cutoff: int = 0

    @classmethod
    def create(
        cls,
        generators: Iterable[Generator],
        cutoff: int,
        truncations: Mapping[str, int] | None = None,
        killed: Iterable[str] = (),
    ) -> GradedRing:
        """Build a ring, sorting generators into canonical order and validating relations."""
        gens = tuple(sorted(generators, key=lambda g: g.sort_key))
        names = [g.name for g in gens]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ModelError(f"duplicate generator names: {', '.join(duplicates)}")
        by_name = {g.name: g for g in gens}

        truncations = dict(truncations or {})
        for name, power in truncations.items():
            if name not in by_name:
                raise ModelError(f"truncation on unknown generator {name}")
            if by_name[name].is_odd:
                raise ModelError(f"truncation on odd generator {name}")
            if power < 2:
                raise ModelError(f"truncation {name}^{power} must have power >= 2")

        killed = frozenset(killed)
        for name in killed:
            if name not in by_name:
                raise ModelError(f"unknown killed generator {name}")
            if name in truncations:
                raise ModelError(f"generator {name} is both killed and truncated")

        if cutoff < 0:
            raise ModelError(f"degree cutoff must be nonnegative, got {cutoff}")

        return cls(
            generators=gens,
            truncations=tuple(sorted(truncations.items())),
            killed=killed,
            cutoff=cutoff,
        )

    # Derived data, computed once per ring.

    @cached_property
    def index(self) -> dict[str, int]:
        return {g.name: i for i, g in enumerate(self.generators)}

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @cached_property
    def odd_positions(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.is_odd)

    @cached_property
    def bar_positions(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.origin.is_bar)

    @cached_property
    def bounds(self) -> tuple[int | None, ...]:
        """Largest admissible exponent per position, None when unbounded."""
        truncated = dict(self.truncations)
        result: list[int | None] = []
        for g in self.generators:
            if g.name in self.killed:
                result.append(0)
            elif g.is_odd:
                result.append(1)
            elif g.name in truncated:
                result.append(truncated[g.name] - 1)
            else:
                result.append(None)
        return tuple(result)

    @cached_property
    def _products(self) -> Callable[[Exponents, Exponents], Product]:
        return lru_cache(maxsize=PRODUCT_CACHE_SIZE)(self._multiply_uncached)

    @cached_property
    def _bases(self) -> dict[int, tuple[Exponents, ...]]:
        return {}

    @cached_property
    def cover(self) -> GradedRing:
        """The free ring on the same generators, without truncations or killed generators."""
        if not self.truncations and not self.killed:
            return self
        return GradedRing(generators=self.generators, cutoff=self.cutoff)

    @property
    def is_free(self) -> bool:
        return not self.truncations and not self.killed

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self.index[name]]
        except KeyError:
            raise ModelError(f"unknown generator {name}") from None

    # Monomial-level arithmetic.

    def degree_of(self, exps: Exponents) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    def word_length(self, exps: Exponents) -> int:
        return sum(exps[i] for i in self.bar_positions)

    def admissible(self, exps: Exponents) -> bool:
        return all(b is None or e <= b for e, b in zip(exps, self.bounds))

    def multiply_exponents(self, left: Exponents, right: Exponents) -> Product:
        """Product of two canonical monomials as (sign, exponents), or None when it vanishes."""
        return self._products(left, right)

    def _multiply_uncached(self, left: Exponents, right: Exponents) -> Product:
        degree = self.degree_of(left) + self.degree_of(right)
        if degree > self.cutoff:
            raise CutoffExceededError(
                f"product of degree {degree} exceeds the cutoff {self.cutoff}"
            )

        result: Product
        swaps = 0
        odd_after = 0
        vanishes = False
        for p in reversed(self.odd_positions):
            if right[p]:
                if left[p]:
                    vanishes = True
                    break
                swaps += odd_after
            if left[p]:
                odd_after += 1
        if vanishes:
            result = None
        else:
            exps = tuple(a + b for a, b in zip(left, right))
            if self.admissible(exps):
                result = (-1 if swaps % 2 else 1, exps)
            else:
                result = None
        return result

    def basis(self, degree: int) -> tuple[Exponents, ...]:
        """All admissible monomials of the given degree, in ascending lexicographic order."""
        if degree > self.cutoff:
            raise CutoffExceededError(
                f"degree {degree} exceeds the cutoff {self.cutoff}"
            )
        if degree < 0:
            return ()
        cached = self._bases.get(degree)
        if cached is not None:
            return cached

        found: list[Exponents] = []
        count = len(self.generators)

        def _fill(position: int, remaining: int, prefix: list[int]) -> None:
            if position == count:
                if remaining == 0:
                    found.append(tuple(prefix))
                return
            deg = self.degrees[position]
            bound = self.bounds[position]
            top = remaining // deg
            if bound is not None:
                top = min(top, bound)
            for e in range(top + 1):
                prefix.append(e)
                _fill(position + 1, remaining - e * deg, prefix)
                prefix.pop()

        _fill(0, degree, [])
        result = tuple(sorted(found))
        self._bases[degree] = result
        return result

    def format_exponents(self, exps: Exponents) -> str:
        factors = []
        for g, e in zip(self.generators, exps):
            if e == 1:
                factors.append(g.name)
            elif e > 1:
                factors.append(f"{g.name}^{e}")
        return "*".join(factors) if factors else "1"

    # Element constructors.

    @property
    def unit_exponents(self) -> Exponents:
        return (0,) * len(self.generators)

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return Element(self, {self.unit_exponents: Fraction(1)})

    def scalar(self, value: Scalar) -> Element:
        return Element.from_terms(self, [(self.unit_exponents, _as_fraction(value))])

    def gen(self, name: str) -> Element:
        """The generator as an element; zero when it is killed in this ring."""
        return self.from_powers({name: 1})

    def monomial(self, exps: Exponents, coefficient: Scalar = 1) -> Element:
        if len(exps) != len(self.generators):
            raise ModelError("exponent vector length does not match the generator count")
        exps = tuple(exps)
        if not self.admissible(exps):
            return self.zero()
        return Element.from_terms(self, [(exps, _as_fraction(coefficient))])

    def from_powers(self, powers: Mapping[str, int], coefficient: Scalar = 1) -> Element:
        """The monomial with the given generator powers (canonical order, no sign)."""
        exps = [0] * len(self.generators)
        for name, power in powers.items():
            if name not in self.index:
                raise ModelError(f"unknown generator {name}")
            exps[self.index[name]] = power
        return self.monomial(tuple(exps), coefficient)

    def reduce(self, element: Element) -> Element:
        """Push an element of this ring or of its cover into this ring."""
        if element.ring is not self and element.ring != self and element.ring != self.cover:
            raise DomainMismatchError("element does not belong to this ring or its cover")
        return Element.from_terms(
            self, ((e, c) for e, c in element.terms.items() if self.admissible(e))
        )

    def lift(self, element: Element) -> Element:
        """View an element of this ring as an element of the cover."""
        if element.ring != self:
            raise DomainMismatchError("element does not belong to this ring")
        return Element(self.cover, element.terms)

    def substitute(
        self,
        element: Element,
        images: Mapping[str, Element],
        cache: dict[Exponents, Element] | None = None,
    ) -> Element:
        """Apply the algebra map determined by generator images to an element of another ring.

        The image of a monomial is the product of the generator images in the
        source's canonical order, so Koszul signs come from ``multiply``.
        """
        source = element.ring
        total: dict[Exponents, Fraction] = {}
        for exps, coeff in element.terms.items():
            image = cache.get(exps) if cache is not None else None
            if image is None:
                image = self.one()
                for g, e in zip(source.generators, exps):
                    if not e:
                        continue
                    try:
                        factor = images[g.name]
                    except KeyError:
                        raise ModelError(f"no image for generator {g.name}") from None
                    for _ in range(e):
                        image = image * factor
                        if not image:
                            break
                    if not image:
                        break
                if cache is not None:
                    cache[exps] = image
            for e, c in image.terms.items():
                total[e] = total.get(e, Fraction(0)) + coeff * c
        return Element.from_terms(self, total.items())

    def random_element(self, degree: int, rng, terms: int = 3, spread: int = 5) -> Element:
        """A random homogeneous element, for property checks."""
        basis = self.basis(degree)
        if not basis:
            return self.zero()
        chosen = [rng.choice(basis) for _ in range(terms)]
        return Element.from_terms(
            self,
            ((e, Fraction(rng.randint(-spread, spread), rng.randint(1, 3))) for e in chosen),
        )


class Element:
    """An immutable rational linear combination of canonical monomials."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: GradedRing, terms: Mapping[Exponents, Fraction]) -> None:
        self.ring = ring
        self.terms = dict(terms)
        self._hash: int | None = None

    @classmethod
    def from_terms(
        cls, ring: GradedRing, terms: Iterable[tuple[Exponents, Fraction]]
    ) -> Element:
        """Sum the given terms, dropping zero coefficients."""
        acc: dict[Exponents, Fraction] = {}
        for exps, coeff in terms:
            acc[exps] = acc.get(exps, Fraction(0)) + coeff
        return cls(ring, {e: c for e, c in acc.items() if c != 0})

    # Inspection.

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        for exps in sorted(self.terms):
            yield Monomial(exps, self.terms[exps])

    def monomials(self) -> list[Monomial]:
        return list(self)

    def coefficient(self, exps: Exponents) -> Fraction:
        return self.terms.get(exps, Fraction(0))

    def degrees(self) -> set[int]:
        return {self.ring.degree_of(e) for e in self.terms}

    def word_lengths(self) -> set[int]:
        return {self.ring.word_length(e) for e in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero."""
        degrees = self.degrees()
        if not degrees:
            return None
        if len(degrees) > 1:
            raise ValueError(f"element {self} is not homogeneous")
        return next(iter(degrees))

    @property
    def leading_exponents(self) -> Exponents:
        """The first monomial in canonical order."""
        if not self.terms:
            raise ValueError("zero element has no leading monomial")
        return min(self.terms)

    def homogeneous_part(self, degree: int) -> Element:
        return Element(
            self.ring, {e: c for e, c in self.terms.items() if self.ring.degree_of(e) == degree}
        )

    # Arithmetic.

    def _check(self, other: Element) -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise DomainMismatchError("operands belong to different algebras")

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            self._check(other)
            return other
        return self.ring.scalar(other)

    def __add__(self, other) -> Element:
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            value = terms.get(e, Fraction(0)) + c
            if value:
                terms[e] = value
            else:
                terms.pop(e, None)
        return Element(self.ring, terms)

    def __radd__(self, other) -> Element:
        if isinstance(other, int) and other == 0:
            return self
        return self + other

    def __neg__(self) -> Element:
        return Element(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Element:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Element:
        return self._coerce(other) - self

    def scale(self, factor: Scalar) -> Element:
        factor = _as_fraction(factor)
        if factor == 0:
            return self.ring.zero()
        return Element(self.ring, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other) -> Element:
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        acc: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                product = ring.multiply_exponents(e1, e2)
                if product is None:
                    continue
                sign, exps = product
                acc[exps] = acc.get(exps, Fraction(0)) + sign * c1 * c2
        return Element(ring, {e: c for e, c in acc.items() if c != 0})

    def __rmul__(self, other) -> Element:
        return self.scale(other)

    def __truediv__(self, other: Scalar) -> Element:
        return self.scale(1 / _as_fraction(other))

    def __pow__(self, power: int) -> Element:
        result = self.ring.one()
        for _ in range(power):
            result = result * self
        return result

    # Comparison and display.

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return (other.ring is self.ring or other.ring == self.ring) and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.scalar(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for monomial in self:
            coeff = monomial.coefficient
            label = self.ring.format_exponents(monomial.exponents)
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            if label == "1":
                body = str(magnitude)
            elif magnitude == 1:
                body = label
            else:
                body = f"{magnitude}*{label}"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Element({self})"


def product_of_gens(ring: GradedRing, names: Iterable[str]) -> Element:
    """Product of generators in the given order (signs included)."""
    result = ring.one()
    for name in names:
        result = result * ring.gen(name)
    return result


def all_exponent_vectors(ring: GradedRing, max_degree: int) -> Iterator[Exponents]:
    """Admissible monomials of every degree up to max_degree."""
    return itertools.chain.from_iterable(ring.basis(n) for n in range(max_degree + 1))
