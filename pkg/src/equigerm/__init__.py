"""Local-analytic invariants of families of complete-intersection germs.

The package computes multiplicities of modules over local rings of analytic
germs (Buchsbaum-Rim, associated, Segre), Milnor numbers and their sectional
sequences, and the em invariant of a germ with a function, and uses their
constancy across a one-parameter family to certify the equisingularity
conditions Whitney A, Thom A_f, and W_f.  Exact rational arithmetic
throughout; every generic choice is seeded and every multiplicity records
the draws that agreed on it.
"""

from .ring import ParseError, Polynomial, RingSpec, format_polynomial, parse_polynomial
from .series import INF, Series
from .basis import (
    INFINITE,
    BasisConfig,
    ResourceLimitExceeded,
    StandardBasis,
    SubmoduleOfFree,
    colength,
    fitting_ideal_0,
    matrix_minors,
    scale_module,
    standard_basis,
)
from .family import (
    FamilyShapeError,
    FiberGerm,
    GermFamily,
    JacobianKind,
    apply_retraction,
    jacobian_matrix,
    jacobian_module,
    load_family,
    parse_family,
    restrict_to_line,
)
from .arcs import (
    Arc,
    ArcNotOnGerm,
    ArcTestResult,
    OrderProfile,
    arc_dependence_test,
    pull_back,
    pull_back_orders,
)
from .invariants import (
    GenericityConfig,
    GenericityUnstable,
    InternalConsistencyError,
    MultiplicityResult,
    NotICIS,
    associated_multiplicities,
    br_multiplicity,
    cosupport_summed_associated,
    em_invariant,
    em_via_milnor,
    localized_colength,
    milnor_hypersurface,
    milnor_icis,
    polar_multiplicity,
    samuel_multiplicity,
    sectional_milnor_sequence,
    segre_numbers,
)
from .equisingularity import (
    CheckConfig,
    ConstancyReport,
    chain_milnor_report,
    check_af,
    check_wf,
    check_whitney_a,
    le_greuel_colength,
)

__version__ = "1.0.0"

__all__ = [
    "Arc",
    "ArcNotOnGerm",
    "ArcTestResult",
    "BasisConfig",
    "CheckConfig",
    "ConstancyReport",
    "FamilyShapeError",
    "FiberGerm",
    "GenericityConfig",
    "GenericityUnstable",
    "GermFamily",
    "INF",
    "INFINITE",
    "InternalConsistencyError",
    "JacobianKind",
    "MultiplicityResult",
    "NotICIS",
    "OrderProfile",
    "ParseError",
    "Polynomial",
    "ResourceLimitExceeded",
    "RingSpec",
    "Series",
    "StandardBasis",
    "SubmoduleOfFree",
    "apply_retraction",
    "arc_dependence_test",
    "associated_multiplicities",
    "br_multiplicity",
    "chain_milnor_report",
    "check_af",
    "check_wf",
    "check_whitney_a",
    "colength",
    "cosupport_summed_associated",
    "em_invariant",
    "em_via_milnor",
    "fitting_ideal_0",
    "format_polynomial",
    "jacobian_matrix",
    "jacobian_module",
    "le_greuel_colength",
    "load_family",
    "localized_colength",
    "matrix_minors",
    "milnor_hypersurface",
    "milnor_icis",
    "parse_family",
    "parse_polynomial",
    "polar_multiplicity",
    "pull_back",
    "pull_back_orders",
    "restrict_to_line",
    "samuel_multiplicity",
    "scale_module",
    "sectional_milnor_sequence",
    "segre_numbers",
    "standard_basis",
]
