"""String-topology operations on the loop models of a Poincaré duality space."""

from sullivanloops.topology.coproduct import (
    CoproductEngine,
    CoproductEntry,
    SymmetryRecord,
    build_engine,
    coproduct_sweep,
    dual_loop_coproduct,
    euler_class_delta_in,
    symmetry_signs,
    verify_anticommutation,
    verify_image_inclusion,
    verify_proposition2,
)
from sullivanloops.topology.duality import (
    DualBasis,
    diagonal_euler_class,
    euler_characteristic,
    poincare_dual_basis,
)
from sullivanloops.topology.hodge import (
    HodgeBigrading,
    hodge_decomposition,
    verify_hodge_respect,
    verify_zero_word_length,
)
from sullivanloops.topology.shriek import diagonal_obstructions, shriek_delta_in

__all__ = [
    "CoproductEngine",
    "CoproductEntry",
    "DualBasis",
    "HodgeBigrading",
    "SymmetryRecord",
    "build_engine",
    "coproduct_sweep",
    "diagonal_euler_class",
    "diagonal_obstructions",
    "dual_loop_coproduct",
    "euler_characteristic",
    "euler_class_delta_in",
    "hodge_decomposition",
    "poincare_dual_basis",
    "shriek_delta_in",
    "symmetry_signs",
    "verify_anticommutation",
    "verify_hodge_respect",
    "verify_image_inclusion",
    "verify_proposition2",
    "verify_zero_word_length",
]
