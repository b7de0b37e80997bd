"""Exact sparse linear algebra over the rationals.

Vectors are dicts from column index to nonzero Fraction.  Rows of an echelon
basis are keyed by their pivot, the smallest index with a nonzero entry, and
carry two provenance vectors that are combined alongside the row itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sullivanloops.errors import SullivanError

SparseVector = dict[int, Fraction]


def axpy(target: SparseVector, factor: Fraction, source: SparseVector) -> None:
    """target += factor * source, in place, dropping zeros."""
    if not factor:
        return
    for index, value in source.items():
        updated = target.get(index, Fraction(0)) + factor * value
        if updated:
            target[index] = updated
        else:
            target.pop(index, None)


def scaled(vector: SparseVector, factor: Fraction) -> SparseVector:
    return {i: v * factor for i, v in vector.items()} if factor else {}


@dataclass
class Row:
    vector: SparseVector
    witness: SparseVector = field(default_factory=dict)
    coords: SparseVector = field(default_factory=dict)


@dataclass
class Reduction:
    """Result of reducing a vector: remainder plus the combination of rows removed."""

    remainder: SparseVector
    witness: SparseVector
    coords: SparseVector

    @property
    def leading(self) -> int | None:
        return min(self.remainder) if self.remainder else None


class EchelonBasis:
    """Incrementally built echelon basis with pivot-normalized rows."""

    def __init__(self) -> None:
        self.rows: dict[int, Row] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vector: SparseVector) -> Reduction:
        """Fully reduce ``vector``: eliminate every entry sitting on a pivot.

        Rows only have entries at or after their pivot, so walking pivots in
        increasing order never reintroduces an eliminated entry.
        """
        remainder = dict(vector)
        witness: SparseVector = {}
        coords: SparseVector = {}
        last = -1
        while True:
            pending = [i for i in remainder if i > last and i in self.rows]
            if not pending:
                break
            pivot = min(pending)
            row = self.rows[pivot]
            factor = remainder[pivot]
            axpy(remainder, -factor, row.vector)
            axpy(witness, factor, row.witness)
            axpy(coords, factor, row.coords)
            last = pivot
        return Reduction(remainder, witness, coords)

    def insert(
        self,
        vector: SparseVector,
        witness: SparseVector | None = None,
        coords: SparseVector | None = None,
    ) -> tuple[int | None, Reduction]:
        """Add a vector; return the new pivot (None if dependent) and the reduction.

        The stored row is the normalized remainder, with its provenance being
        the given tags minus whatever the reduction subtracted.
        """
        reduction = self.reduce(vector)
        pivot = reduction.leading
        if pivot is None:
            return None, reduction
        own_witness = dict(witness or {})
        axpy(own_witness, Fraction(-1), reduction.witness)
        own_coords = dict(coords or {})
        axpy(own_coords, Fraction(-1), reduction.coords)
        scale = 1 / reduction.remainder[pivot]
        self.rows[pivot] = Row(
            vector=scaled(reduction.remainder, scale),
            witness=scaled(own_witness, scale),
            coords=scaled(own_coords, scale),
        )
        return pivot, reduction


def kernel_basis(columns: Sequence[SparseVector]) -> list[SparseVector]:
    """Basis of {c : Σ c_j columns[j] = 0}, one vector per dependent column.

    The vector for column j has coefficient 1 at j and otherwise only involves
    earlier columns.
    """
    echelon = EchelonBasis()
    kernel: list[SparseVector] = []
    for j, column in enumerate(columns):
        pivot, reduction = echelon.insert(column, witness={j: Fraction(1)})
        if pivot is None:
            vector = {j: Fraction(1)}
            axpy(vector, Fraction(-1), reduction.witness)
            kernel.append(vector)
    return kernel


def rank(columns: Iterable[SparseVector]) -> int:
    echelon = EchelonBasis()
    return sum(1 for column in columns if echelon.insert(column)[0] is not None)


def dense_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a dense matrix given as rows."""
    return rank({j: v for j, v in enumerate(row) if v} for row in matrix)


def invert(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise SullivanError("only square matrices can be inverted")
    work = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(size)]
        for i, row in enumerate(matrix)
    ]
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        lead = work[col][col]
        work[col] = [v / lead for v in work[col]]
        for r in range(size):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [row[size:] for row in work]


def matmul(left: Sequence[Sequence[Fraction]], right: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    inner = len(right)
    cols = len(right[0]) if right else 0
    return [
        [sum((row[k] * right[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)]
        for row in left
    ]
