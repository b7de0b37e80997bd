"""Exception hierarchy for sullivanloops.

Input problems exit with status 2, mathematical failures with status 1.
"""

from __future__ import annotations


class SullivanError(Exception):
    """Base class for every error raised by sullivanloops."""

    exit_code = 1


class InputError(SullivanError):
    """The user supplied something unusable."""

    exit_code = 2


class ParseError(InputError):
    """A model file could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}, column {self.column}: {self.message}"
        return self.message


class ModelError(InputError):
    """A model is structurally invalid (bad degrees, name clashes, unstable relations)."""


class ConfigError(InputError):
    """Invalid run configuration."""


class UnknownClassError(InputError):
    """A class label does not name a basis class of the table."""


class CutoffExceededError(InputError):
    """A computation would leave the validated degree range."""


class DomainMismatchError(SullivanError):
    """Operands belong to different algebras."""


class IncompleteDerivationError(SullivanError):
    """A derivation has no value on a generator it is applied to."""


class NotSimplyConnectedError(ModelError):
    """The base model has a generator of degree <= 1."""


class SeriesDivergenceError(SullivanError):
    """The exponential series of a path-space differential failed to terminate."""


class ConstructionError(SullivanError):
    """A constructed algebra or map failed its own verification."""

    def __init__(self, message: str, report=None) -> None:
        super().__init__(message)
        self.report = report


class NotClosedError(SullivanError):
    """An element expected to be a cocycle has nonzero differential."""

    def __init__(self, message: str, witness=None) -> None:
        super().__init__(message)
        self.witness = witness


class PoincareDualityError(SullivanError):
    """The cohomology pairing is degenerate."""


class OrientationError(SullivanError):
    """The top cohomology is not one-dimensional or misses the fundamental class."""


class UnverifiedMorphismError(SullivanError):
    """An induced map was requested for a morphism not verified as a chain map."""


class HodgeError(SullivanError):
    """A class representative mixes word lengths."""
