"""Reading and writing model description files.

A model file is a list of statements, one per line or separated by ``;``,
with ``#`` comments::

    model CP1
    generator x : 2
    generator y : 3
    d y = x^2
    relation x^2 = 0
    dimension 2
    fundamental x

Polynomials follow the grammar

    <EXPRESSION> -> { + | - } <TERM> { ( + | - ) <TERM> }
    <TERM>       -> <FACTOR> { [ * ] <FACTOR> }
    <FACTOR>     -> <ATOM> [ ^ <INTEGER> ]
    <ATOM>       -> <INTEGER> | <NAME> | ( <EXPRESSION> )
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from sullivanloops.algebra import Element, Generator, GradedRing, SemifreeCDGA, rewrap, working_cutoff
from sullivanloops.errors import CutoffExceededError, ParseError

log = logging.getLogger(__name__)

MAX_DEGREE = 255
MAX_EXPONENT = 256
PARSE_CUTOFF = 256
MAX_NESTING = 64
MAX_LITERAL_DIGITS = 1000

KEYWORDS = frozenset({"model", "generator", "d", "relation", "dimension", "fundamental"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


class Lexer:
    """Model-file lexer.

    Produces a flat token stream in which statement separators (newline and
    ``;``) appear as SEP tokens and comments are dropped.
    """

    grammar = {
        r"#[^\n]*": "COMMENT",
        r"[ \t\r]+": "SPACE",
        r"[\n;]": "SEP",
        r"[0-9]+": "INTEGER",
        r"[A-Za-z_][A-Za-z0-9_]*": "NAME",
        r"\+": "PLUS",
        r"\-": "MINUS",
        r"\*": "STAR",
        r"\^": "CARET",
        r"\(": "LEFT_PAREN",
        r"\)": "RIGHT_PAREN",
        r":": "COLON",
        r"=": "EQUALS",
    }

    def __init__(self) -> None:
        self.regex = re.compile(
            "|".join(f"(?P<{kind}>{pattern})" for pattern, kind in self.grammar.items())
        )

    def tokenize(self, text: str) -> Iterator[Token]:
        line, line_start, index = 1, 0, 0
        while index < len(text):
            match = self.regex.match(text, index)
            if not match:
                raise ParseError(
                    f"unexpected character {text[index]!r}", line, index - line_start + 1
                )
            kind = match.lastgroup
            if kind == "INTEGER" and len(match.group()) > MAX_LITERAL_DIGITS:
                raise ParseError("integer literal too long", line, index - line_start + 1)
            if kind not in ("COMMENT", "SPACE"):
                yield Token(kind, match.group(), line, index - line_start + 1)
            if match.group() == "\n":
                line += 1
                line_start = match.end()
            index = match.end()


def _statements(tokens: Iterator[Token]) -> Iterator[list[Token]]:
    current: list[Token] = []
    for token in tokens:
        if token.kind == "SEP":
            if current:
                yield current
            current = []
        else:
            current.append(token)
    if current:
        yield current


class ExpressionParser:
    """Evaluate a polynomial token list in a free graded ring.

    Products of odd generators keep their Koszul signs; an odd generator
    occurring twice in one monomial is an error rather than a silent zero.
    """

    def __init__(self, ring: GradedRing) -> None:
        self.ring = ring

    def parse(self, tokens: list[Token]) -> Element:
        if not tokens:
            raise ParseError("expected a polynomial")
        self.tokens = tokens
        self.position = 0
        self.depth = 0
        value = self.__expression()
        if self.position < len(tokens):
            token = tokens[self.position]
            raise ParseError(f"unexpected {token.text!r}", token.line, token.column)
        return value

    def __expression(self) -> Element:
        negative = False
        if self.__accept("MINUS"):
            negative = True
        else:
            self.__accept("PLUS")
        value = self.__term()
        if negative:
            value = -value
        while self.__peek("PLUS") or self.__peek("MINUS"):
            operator = self.__current()
            self.position += 1
            term = self.__term()
            value = value + term if operator.kind == "PLUS" else value - term
        return value

    def __term(self) -> Element:
        value = self.__factor()
        while any(self.__peek(kind) for kind in ("STAR", "INTEGER", "NAME", "LEFT_PAREN")):
            anchor = self.__current()
            self.__accept("STAR")
            value = self.__product(value, self.__factor(), anchor)
        return value

    def __factor(self) -> Element:
        anchor = self.__current()
        value = self.__atom()
        if self.__accept("CARET"):
            exponent = self.__expect("INTEGER")
            power = int(exponent.text)
            if power > MAX_EXPONENT:
                raise ParseError(
                    f"exponent {power} exceeds {MAX_EXPONENT}", exponent.line, exponent.column
                )
            result = self.ring.one()
            for _ in range(power):
                result = self.__product(result, value, anchor)
            value = result
        return value

    def __atom(self) -> Element:
        token = self.__current()
        if self.__accept("INTEGER"):
            return self.ring.scalar(int(token.text))
        if self.__accept("NAME"):
            if token.text not in self.ring.index:
                raise ParseError(f"undeclared generator {token.text}", token.line, token.column)
            return self.ring.gen(token.text)
        if self.__accept("LEFT_PAREN"):
            self.depth += 1
            if self.depth > MAX_NESTING:
                raise ParseError("parentheses nested too deeply", token.line, token.column)
            value = self.__expression()
            self.__expect("RIGHT_PAREN")
            self.depth -= 1
            return value
        raise self.__error("expected a number, a generator or '('")

    def __product(self, left: Element, right: Element, anchor: Token) -> Element:
        odd = self.ring.odd_positions
        for a in left.terms:
            for b in right.terms:
                for p in odd:
                    if a[p] and b[p]:
                        name = self.ring.generators[p].name
                        raise ParseError(
                            f"odd generator {name} appears with exponent > 1",
                            anchor.line,
                            anchor.column,
                        )
        try:
            return left * right
        except CutoffExceededError:
            raise ParseError(
                f"polynomial degree exceeds {PARSE_CUTOFF}", anchor.line, anchor.column
            ) from None

    def __current(self) -> Token | None:
        if self.position < len(self.tokens):
            return self.tokens[self.position]
        return None

    def __peek(self, kind: str) -> bool:
        token = self.__current()
        return token is not None and token.kind == kind

    def __accept(self, kind: str) -> bool:
        if self.__peek(kind):
            self.position += 1
            return True
        return False

    def __expect(self, kind: str) -> Token:
        token = self.__current()
        if not self.__accept(kind):
            raise self.__error(f"expected {kind.lower().replace('_', ' ')}")
        return token

    def __error(self, message: str) -> ParseError:
        token = self.__current()
        if token is None:
            last = self.tokens[-1]
            return ParseError(f"{message} at end of statement", last.line, last.column + len(last.text))
        return ParseError(f"{message}, found {token.text!r}", token.line, token.column)


@dataclass(frozen=True)
class ModelDescription:
    """A parsed model: generators in declaration order and polynomials in the parse ring."""

    name: str
    generators: tuple[tuple[str, int], ...]
    differentials: tuple[tuple[str, Element], ...]
    truncations: tuple[tuple[str, int], ...]
    dimension: int
    fundamental: Element

    @property
    def ring(self) -> GradedRing:
        return self.fundamental.ring

    def differential_of(self, name: str) -> Element:
        return dict(self.differentials).get(name, self.ring.zero())


@dataclass
class _Statement:
    keyword: Token
    tokens: list[Token]


class ModelParser:
    """Two passes: collect declarations, then evaluate polynomials against them."""

    def __init__(self) -> None:
        self.lexer = Lexer()

    def parse(self, text: str, name: str = "M") -> ModelDescription:
        statements = [self.__statement(tokens) for tokens in _statements(self.lexer.tokenize(text))]

        generators: dict[str, int] = {}
        raw_differentials: dict[str, _Statement] = {}
        truncations: dict[str, int] = {}
        singletons: dict[str, _Statement] = {}
        for statement in statements:
            keyword = statement.keyword.text
            if keyword in ("model", "dimension", "fundamental"):
                if keyword in singletons:
                    raise self.__at(statement.keyword, f"{keyword} given twice")
                singletons[keyword] = statement
            elif keyword == "generator":
                gen_name, degree = self.__generator(statement)
                if gen_name in generators:
                    raise self.__at(statement.tokens[0], f"duplicate generator {gen_name}")
                generators[gen_name] = degree
            elif keyword == "d":
                target = self.__name(statement, 0)
                self.__require(statement, 1, "EQUALS")
                if target.text in raw_differentials:
                    raise self.__at(target, f"differential of {target.text} given twice")
                raw_differentials[target.text] = _Statement(target, statement.tokens[2:])
            elif keyword == "relation":
                gen_name, power = self.__relation(statement)
                if gen_name in truncations:
                    raise self.__at(statement.tokens[0], f"relation on {gen_name} given twice")
                truncations[gen_name] = power

        if "model" in singletons:
            name = self.__name(singletons["model"], 0).text
            self.__end(singletons["model"], 1)
        for required in ("dimension", "fundamental"):
            if required not in singletons:
                raise ParseError(f"missing {required} statement")
        if not generators:
            raise ParseError("a model needs at least one generator")

        ring = GradedRing.create(
            (Generator(n, deg) for n, deg in generators.items()), cutoff=PARSE_CUTOFF
        )
        evaluator = ExpressionParser(ring)

        for gen_name, power in truncations.items():
            if gen_name not in generators:
                raise ParseError(f"relation on undeclared generator {gen_name}")
            if generators[gen_name] % 2:
                raise ParseError(f"relation on odd generator {gen_name}")

        differentials = []
        for gen_name in generators:
            statement = raw_differentials.pop(gen_name, None)
            if statement is None:
                continue
            value = evaluator.parse(statement.tokens)
            degrees = value.degrees()
            if len(degrees) > 1:
                raise self.__at(statement.keyword, f"d {gen_name} is not homogeneous: {value}")
            if degrees and degrees != {generators[gen_name] + 1}:
                raise self.__at(
                    statement.keyword,
                    f"d {gen_name} has degree {degrees.pop()}, expected {generators[gen_name] + 1}",
                )
            if value:
                differentials.append((gen_name, value))
        for gen_name, statement in raw_differentials.items():
            raise self.__at(statement.keyword, f"differential of undeclared generator {gen_name}")

        dimension_statement = singletons["dimension"]
        dimension = int(self.__require(dimension_statement, 0, "INTEGER").text)
        self.__end(dimension_statement, 1)
        if dimension < 1:
            raise self.__at(dimension_statement.keyword, "dimension must be positive")

        fundamental_statement = singletons["fundamental"]
        fundamental = evaluator.parse(fundamental_statement.tokens)
        if len(fundamental) != 1 or next(iter(fundamental)).coefficient != 1:
            raise self.__at(
                fundamental_statement.keyword, f"fundamental must be a single monomial, got {fundamental}"
            )
        if fundamental.degree != dimension:
            raise self.__at(
                fundamental_statement.keyword,
                f"fundamental {fundamental} has degree {fundamental.degree}, expected {dimension}",
            )

        log.debug("parsed model %s with %d generators", name, len(generators))
        return ModelDescription(
            name=name,
            generators=tuple(generators.items()),
            differentials=tuple(differentials),
            truncations=tuple(truncations.items()),
            dimension=dimension,
            fundamental=fundamental,
        )

    def __statement(self, tokens: list[Token]) -> _Statement:
        keyword = tokens[0]
        if keyword.kind != "NAME" or keyword.text not in KEYWORDS:
            raise self.__at(keyword, f"unknown statement {keyword.text!r}")
        return _Statement(keyword, tokens[1:])

    def __generator(self, statement: _Statement) -> tuple[str, int]:
        token = self.__name(statement, 0)
        name = token.text
        if name in KEYWORDS:
            raise self.__at(token, f"{name} is a reserved word")
        if name[-1].isdigit() or name.endswith("bar"):
            raise self.__at(token, f"generator names may not end in a digit or 'bar': {name}")
        self.__require(statement, 1, "COLON")
        degree_token = self.__require(statement, 2, "INTEGER")
        self.__end(statement, 3)
        degree = int(degree_token.text)
        if not 1 <= degree <= MAX_DEGREE:
            raise self.__at(degree_token, f"degree must lie in 1..{MAX_DEGREE}, got {degree}")
        return name, degree

    def __relation(self, statement: _Statement) -> tuple[str, int]:
        name = self.__name(statement, 0).text
        self.__require(statement, 1, "CARET")
        power_token = self.__require(statement, 2, "INTEGER")
        self.__require(statement, 3, "EQUALS")
        zero = self.__require(statement, 4, "INTEGER")
        self.__end(statement, 5)
        if int(zero.text) != 0:
            raise self.__at(zero, "only relations of the form g^k = 0 are supported")
        power = int(power_token.text)
        if not 2 <= power <= MAX_EXPONENT:
            raise self.__at(power_token, f"relation power must lie in 2..{MAX_EXPONENT}")
        return name, power

    def __name(self, statement: _Statement, position: int) -> Token:
        return self.__require(statement, position, "NAME")

    def __require(self, statement: _Statement, position: int, kind: str) -> Token:
        tokens = statement.tokens
        if position >= len(tokens):
            anchor = tokens[-1] if tokens else statement.keyword
            raise ParseError(
                f"expected {kind.lower()} after {anchor.text!r}",
                anchor.line,
                anchor.column + len(anchor.text),
            )
        token = tokens[position]
        if token.kind != kind:
            raise self.__at(token, f"expected {kind.lower()}, found {token.text!r}")
        return token

    def __end(self, statement: _Statement, position: int) -> None:
        if position < len(statement.tokens):
            raise self.__at(statement.tokens[position], f"unexpected {statement.tokens[position].text!r}")

    @staticmethod
    def __at(token: Token, message: str) -> ParseError:
        return ParseError(message, token.line, token.column)


def parse_model(text: str, name: str = "M") -> ModelDescription:
    """Parse model text; ``name`` is used when the text has no model statement."""
    return ModelParser().parse(text, name)


def load_model(path: str | Path) -> ModelDescription:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read model file {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"model file {path} is not UTF-8 text") from None
    name = re.sub(r"\W", "_", path.stem)
    if not name or name[0].isdigit():
        name = f"M_{name}"
    return parse_model(text, name=name)


def format_model(description: ModelDescription) -> str:
    """Canonical text of a model; parsing it gives back an equal description."""
    lines = [f"model {description.name}"]
    lines += [f"generator {name} : {degree}" for name, degree in description.generators]
    lines += [f"d {name} = {value}" for name, value in description.differentials]
    lines += [f"relation {name}^{power} = 0" for name, power in description.truncations]
    lines.append(f"dimension {description.dimension}")
    lines.append(f"fundamental {description.fundamental}")
    return "\n".join(lines) + "\n"


def killed_generators(description: ModelDescription) -> frozenset[str]:
    """Generators whose differential vanishes modulo the relations.

    Such a generator is zero in the quotient model, while its suspension
    still appears in the loop-space models.
    """
    quotient = GradedRing.create(
        description.ring.generators,
        cutoff=PARSE_CUTOFF,
        truncations=dict(description.truncations),
    )
    return frozenset(
        name
        for name, value in description.differentials
        if value and not quotient.reduce(value)
    )


def base_model(
    description: ModelDescription,
    max_degree: int,
    orientation: int = 1,
) -> tuple[SemifreeCDGA, Element]:
    """The base algebra built for degrees up to ``max_degree`` and its fundamental cocycle."""
    if description.dimension + 2 > max_degree:
        raise CutoffExceededError(
            f"max degree {max_degree} leaves no room above the dimension {description.dimension}"
        )
    cutoff = working_cutoff(max_degree)
    ring = GradedRing.create(
        description.ring.generators,
        cutoff=cutoff,
        truncations=dict(description.truncations),
        killed=killed_generators(description),
    )
    values = {
        name: rewrap(value, ring.cover)
        for name, value in description.differentials
        if ring.generator(name).degree + 1 <= cutoff
    }
    algebra = SemifreeCDGA.create(description.name, ring, values)
    fundamental = ring.reduce(rewrap(description.fundamental, ring.cover)).scale(orientation)
    log.info(
        "base model %s: %d generators, killed %s",
        description.name,
        len(ring.generators),
        ", ".join(sorted(ring.killed)) or "none",
    )
    return algebra, fundamental
