"""Lazily built computation state for one model and one run configuration."""

from __future__ import annotations

import logging
from functools import cached_property

from sullivanloops.algebra import Element, SemifreeCDGA
from sullivanloops.cohomology import CohomologyTable, cohomology_table
from sullivanloops.config import RunConfig
from sullivanloops.loops import LoopModelBundle, SeriesConvention, build_bundle
from sullivanloops.modelfile import ModelDescription, base_model
from sullivanloops.topology import (
    CoproductEngine,
    DualBasis,
    HodgeBigrading,
    build_engine,
    hodge_decomposition,
    poincare_dual_basis,
)

log = logging.getLogger(__name__)


class Session:
    """Every algebra, table and map a command may need, each built on first use."""

    def __init__(
        self,
        description: ModelDescription,
        config: RunConfig,
        convention: SeriesConvention = SeriesConvention.PATH_HALVES,
    ) -> None:
        self.description = description
        self.config = config
        self.convention = convention

    @property
    def name(self) -> str:
        return self.description.name

    @property
    def max_degree(self) -> int:
        return self.config.max_degree

    @property
    def dimension(self) -> int:
        return self.description.dimension

    @cached_property
    def _base(self) -> tuple[SemifreeCDGA, Element]:
        return base_model(self.description, self.max_degree, self.config.orientation)

    @property
    def base(self) -> SemifreeCDGA:
        return self._base[0]

    @property
    def fundamental(self) -> Element:
        return self._base[1]

    @cached_property
    def bundle(self) -> LoopModelBundle:
        return build_bundle(self.base, self.max_degree, self.convention)

    @cached_property
    def base_table(self) -> CohomologyTable:
        return cohomology_table(self.bundle.base, self.max_degree)

    @cached_property
    def loop_table(self) -> CohomologyTable:
        return cohomology_table(self.bundle.loop, self.max_degree)

    @cached_property
    def mprime_table(self) -> CohomologyTable:
        return cohomology_table(self.bundle.mprime, self.max_degree)

    @cached_property
    def fiber_table(self) -> CohomologyTable:
        return cohomology_table(self.bundle.fiber_product, self.max_degree)

    @cached_property
    def dual(self) -> DualBasis:
        return poincare_dual_basis(self.base_table, self.dimension, self.fundamental)

    @cached_property
    def engine(self) -> CoproductEngine:
        return build_engine(self.bundle, self.dual, self.loop_table)

    @cached_property
    def bigrading(self) -> HodgeBigrading:
        return hodge_decomposition(self.loop_table)
