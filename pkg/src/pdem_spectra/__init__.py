"""Solvable position-dependent-mass Schrodinger potentials and their verification."""
from .families import (
    Family,
    FamilySpec,
    InadmissibleParameters,
    Kind,
    LevelFunction,
    jacobi_es,
    laguerre_es,
    make_family,
    qes,
    shifted_spec,
)
from .pct import (
    BEN_DANIEL_DUKE,
    ZHU_KROEMER,
    AmbiguityParams,
    BoundaryProbe,
    ambiguity_shift,
    boundary_condition_ok,
    pct_rhs,
    prefactor_log_derivative,
    shift_coefficients,
)
from .qes import QesSolution, qes_matrix, qes_solve
from .susy import (
    PartnerPotential,
    PartnerTag,
    build_intertwiner,
    intertwine,
    make_partner,
    partner_veff_closed,
    partner_veff_generic,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityParams",
    "BEN_DANIEL_DUKE",
    "BoundaryProbe",
    "Family",
    "FamilySpec",
    "InadmissibleParameters",
    "Kind",
    "LevelFunction",
    "PartnerPotential",
    "PartnerTag",
    "QesSolution",
    "ZHU_KROEMER",
    "ambiguity_shift",
    "boundary_condition_ok",
    "build_intertwiner",
    "intertwine",
    "jacobi_es",
    "laguerre_es",
    "make_family",
    "make_partner",
    "partner_veff_closed",
    "partner_veff_generic",
    "pct_rhs",
    "prefactor_log_derivative",
    "qes",
    "qes_matrix",
    "qes_solve",
    "shift_coefficients",
    "shifted_spec",
]
