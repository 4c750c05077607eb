"""rcdkit: exact regular conditional distributions on finite spaces.

Finite measurable spaces carry sub-σ-algebras as partitions and measures as
exact rational weight vectors, so rcd construction, the conditioning
identity, essential uniqueness, triviality equivalences, iterated
conditioning, and the two-directional triviality equivalence theorem are all
verified as strict equalities. A semi-analytic lab on [0,1] × {0,1} realizes
the classical counterexample where conditional triviality fails, in exact
interval arithmetic with a numeric quadrature cross-check.
"""

from ._backend import backend_name
from .continuum import (
    DiracProductKernel,
    GEvent,
    HybridMeasure,
    Interval,
    PiecewiseDensity,
    RectEvent,
    discretization_study,
    generate_event_battery,
    hybrid_mass,
    intersection_mass,
    kernel_integral,
    remark5_identity_check,
    singleton_is_null,
    theorem7_consequence_report,
    triviality_failure,
)
from .engine import (
    IdentityWitness,
    Kernel,
    RcdReport,
    Remark2Verdict,
    check_rcd,
    compute_rcd,
    conditional_triviality,
    essentially_equal,
    is_g_measurable,
    remark2_equivalence,
    universal_conditioner,
)
from .errors import (
    AtomlessViolation,
    CoverError,
    EmptyBlockError,
    InconsistentVerdict,
    InvariantViolation,
    NullConditioningError,
    OverlapError,
    ParseError,
    PartitionError,
    RcdkitError,
)
from .iterated import (
    IteratedKernel,
    ProductEvent,
    Theorem7Report,
    build_iterated,
    check_iterated,
    diagonal_agreement_set,
    in_product_sigma,
    is_product_measurable,
    lemma3_lhs,
    lemma3_rhs,
    theorem7_check,
)
from .measures import RationalMeasure, condition, is_trivial_on, mass
from .spaces import (
    Event,
    FinitePartition,
    FiniteSpace,
    atom_of,
    generated_partition,
    make_partition,
    one_block_partition,
    sigma_contains,
    singleton_partition,
)

__version__ = "0.1.0"

__all__ = [
    "AtomlessViolation",
    "CoverError",
    "DiracProductKernel",
    "EmptyBlockError",
    "Event",
    "FinitePartition",
    "FiniteSpace",
    "GEvent",
    "HybridMeasure",
    "IdentityWitness",
    "InconsistentVerdict",
    "Interval",
    "InvariantViolation",
    "IteratedKernel",
    "Kernel",
    "NullConditioningError",
    "OverlapError",
    "ParseError",
    "PartitionError",
    "PiecewiseDensity",
    "ProductEvent",
    "RationalMeasure",
    "RcdReport",
    "RcdkitError",
    "RectEvent",
    "Remark2Verdict",
    "Theorem7Report",
    "atom_of",
    "backend_name",
    "build_iterated",
    "check_iterated",
    "check_rcd",
    "compute_rcd",
    "condition",
    "conditional_triviality",
    "diagonal_agreement_set",
    "discretization_study",
    "essentially_equal",
    "generate_event_battery",
    "generated_partition",
    "hybrid_mass",
    "in_product_sigma",
    "intersection_mass",
    "is_g_measurable",
    "is_product_measurable",
    "is_trivial_on",
    "kernel_integral",
    "lemma3_lhs",
    "lemma3_rhs",
    "make_partition",
    "mass",
    "one_block_partition",
    "remark2_equivalence",
    "remark5_identity_check",
    "sigma_contains",
    "singleton_is_null",
    "singleton_partition",
    "theorem7_check",
    "theorem7_consequence_report",
    "triviality_failure",
    "universal_conditioner",
]
