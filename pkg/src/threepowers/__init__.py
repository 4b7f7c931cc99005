"""Exact counting engine for paired equal sums of three like powers."""

from .analysis import (
    BoundCatalog,
    ScalingRow,
    ScalingTable,
    bound_catalog,
    fit_growth_exponent,
    scaling_experiment,
)
from .arith import ExponentPair, gcd6, mobius, pow_nat
from .counting import (
    CountReport,
    SolutionPair,
    brute_force_oracle,
    count_report,
    list_nontrivial,
    primitive_nontrivial,
    trivial_count_closed_form,
)
from .enumerator import (
    AggregateTable,
    CanonicalTriple,
    CollisionSummary,
    KeyAggregate,
    MemoryBudgetExceeded,
    PowerKey,
    aggregate,
    build_aggregates,
    canonical_triples,
    summarize,
)
from .geometry import (
    LinearSpaceFamily,
    RootOfUnity,
    StandardPlane,
    linear_space_count,
    nonstandard_plane_probe,
    planes_on_X,
    singular_candidates,
    standard_planes,
    verify_plane_containment,
)

__version__ = "0.1.0"
