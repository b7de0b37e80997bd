"""Word-length (Hodge) decomposition of the loop-model cohomology."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

from sullivanloops.cohomology import CohomologyClass, CohomologyTable, induced_map
from sullivanloops.errors import HodgeError
from sullivanloops.linalg import dense_rank
from sullivanloops.loops import LoopModelBundle
from sullivanloops.reports import CheckReport
from sullivanloops.topology.coproduct import CoproductEngine

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HodgeBigrading:
    """Word length of every basis class, indexed like the table."""

    table: CohomologyTable
    word_lengths: dict[tuple[int, int], int]

    def word_length(self, cls: CohomologyClass) -> int:
        return self.word_lengths[(cls.degree, cls.index)]

    def split(self, degree: int) -> dict[int, int]:
        """dim H^n_(i) for every i that occurs in degree n."""
        counts = Counter(
            self.word_lengths[(degree, cls.index)] for cls in self.table.classes(degree)
        )
        return dict(sorted(counts.items()))

    def classes_of_length(self, degree: int, length: int) -> list[CohomologyClass]:
        return [
            cls
            for cls in self.table.classes(degree)
            if self.word_lengths[(degree, cls.index)] == length
        ]

    def to_dict(self) -> dict[str, dict[str, int]]:
        return {
            str(n): {str(i): count for i, count in self.split(n).items()}
            for n in range(self.table.top + 1)
        }


def hodge_decomposition(table: CohomologyTable) -> HodgeBigrading:
    """Label each class of H*(LM) with the V̄-word length of its representative."""
    lengths: dict[tuple[int, int], int] = {}
    for cls in table.all_classes():
        found = cls.representative.word_lengths()
        if len(found) != 1:
            raise HodgeError(
                f"representative of [{cls.label}] mixes word lengths {sorted(found)}"
            )
        (length,) = found
        if length > cls.degree:
            raise HodgeError(f"[{cls.label}] has word length {length} above its degree")
        lengths[(cls.degree, cls.index)] = length
    log.debug("word-length split of %s computed on %d classes", table.algebra.name, len(lengths))
    return HodgeBigrading(table=table, word_lengths=lengths)


def _lengths_in(bigrading: HodgeBigrading, degree: int, coordinates) -> set[int]:
    return {
        bigrading.word_lengths[(degree, index)]
        for index, coeff in enumerate(coordinates)
        if coeff
    }


def verify_hodge_respect(
    engine: CoproductEngine,
    bigrading: HodgeBigrading,
    N: int | None = None,
) -> CheckReport:
    """Φ^∨ sends H_(i) ⊗ H_(j) into H_(i+j) on every basis pair with p + q + m + 1 <= N."""
    N = N if N is not None else engine.cutoff
    report = CheckReport(name="Φ^∨ adds word lengths", checked_degree=N - 1)
    for u, v in engine.basis_pairs():
        if u.degree + v.degree + engine.dimension + 1 > N:
            continue
        report.checked += 1
        value = engine.value(
            engine.loop_table.unit_vector(u), engine.loop_table.unit_vector(v)
        )
        if value.is_zero:
            continue
        expected = bigrading.word_length(u) + bigrading.word_length(v)
        found = _lengths_in(bigrading, value.degree, value.coordinates)
        if found != {expected}:
            report.record(
                f"[{u.label}] ⊗ [{v.label}]",
                f"expected word length {expected}, found {sorted(found)}",
            )
    log.info(report.summary())
    return report


def verify_zero_word_length(
    bundle: LoopModelBundle,
    base_table: CohomologyTable,
    bigrading: HodgeBigrading,
) -> CheckReport:
    """H^n_(0)(LM) is the image of H^n(M) under λ_p0, degree by degree.

    The comparison is with unreduced H*(M): the unit sits in word length 0.
    """
    loop_table = bigrading.table
    top = min(base_table.top, loop_table.top)
    report = CheckReport(name="H_(0)(LM) = H(M) through λ_p0", checked_degree=top)
    report.notes.append("compared with unreduced H*(M); H^0 contains the unit")
    for n in range(top + 1):
        report.checked += 1
        matrix = induced_map(bundle.lambda_p0, n, base_table, loop_table)
        zero_length = {cls.index for cls in bigrading.classes_of_length(n, 0)}
        if dense_rank(matrix) != base_table.dimension(n):
            report.record(f"H^{n}", "λ_p0 is not injective on cohomology")
        if len(zero_length) != base_table.dimension(n):
            report.record(
                f"H^{n}",
                f"dim H_(0) = {len(zero_length)} but dim H(M) = {base_table.dimension(n)}",
            )
        for r, row in enumerate(matrix):
            if r not in zero_length and any(row):
                report.record(f"H^{n}", "image of H(M) meets a class of positive word length")
                break
    log.info(report.summary())
    return report
