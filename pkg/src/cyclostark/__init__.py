"""Exact arithmetic for real abelian fields: group rings, unit lattices,
Fitting ideals, and the construction and verification of the distinguished
half-integral units predicted by the rank-one leading-term identity."""

from .cyclotomic import CyclotomicNumber, zeta_power
from .groupring import (
    FiniteAbelianGroup,
    GCharacter,
    GroupRingElement,
    IdealLattice,
    character_idempotent,
    characters_of,
    reduced_norm,
)
from .lattice import (
    FiniteGModule,
    GLattice,
    Presentation,
    WedgeSpace,
    annihilates,
    classical_fitting_ideal,
    exterior_power,
    minor_fitting_invariant,
    presentation_of,
    quotient_invariants,
    rubin_lattice,
)
from .lseries import (
    LValueReport,
    all_reports,
    equivariant_leading_term,
    l_derivative_at_zero,
    vanishing_order,
)
from .numberfield import (
    MultiplicativeElement,
    Place,
    PlaceSet,
    RealAbelianField,
    SUnitBasis,
    dirichlet_regulator,
    express_in_basis,
    log_abs,
    places_of,
)
from .starkunit import (
    SelmerFixture,
    StarkUnit,
    cyclotomic_stark_unit,
    euler_factor_product,
    evaluation_ideal,
    isotypic_dimension_check,
    rank_one_idempotent,
    t_modified_unit,
    verify_annihilation,
    verify_fitting_equality,
    verify_integrality,
    verify_regulator_identity,
)

__version__ = "0.1.0"

__all__ = [
    "CyclotomicNumber",
    "FiniteAbelianGroup",
    "FiniteGModule",
    "GCharacter",
    "GLattice",
    "GroupRingElement",
    "IdealLattice",
    "LValueReport",
    "MultiplicativeElement",
    "Place",
    "PlaceSet",
    "Presentation",
    "RealAbelianField",
    "SUnitBasis",
    "SelmerFixture",
    "StarkUnit",
    "WedgeSpace",
    "all_reports",
    "annihilates",
    "character_idempotent",
    "characters_of",
    "classical_fitting_ideal",
    "cyclotomic_stark_unit",
    "dirichlet_regulator",
    "equivariant_leading_term",
    "euler_factor_product",
    "evaluation_ideal",
    "express_in_basis",
    "exterior_power",
    "isotypic_dimension_check",
    "l_derivative_at_zero",
    "log_abs",
    "minor_fitting_invariant",
    "places_of",
    "presentation_of",
    "quotient_invariants",
    "rank_one_idempotent",
    "reduced_norm",
    "rubin_lattice",
    "t_modified_unit",
    "vanishing_order",
    "verify_annihilation",
    "verify_fitting_equality",
    "verify_integrality",
    "verify_regulator_identity",
    "zeta_power",
    "__version__",
]
