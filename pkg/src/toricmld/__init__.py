"""Exact minimal log discrepancies of simplicial toric varieties.

Everything is computed in exact rational arithmetic: lattices of valuations
as finite overlattices of Z^d, simplicial fans, the piecewise-linear
log-discrepancy function, fibration normal forms, and the box-principle
witness construction relating base and total-space discrepancies.
"""

from .exactmath import SingularMatrixError, hnf, invariant_factors, snf, solve_exact
from .lattice import (
    DegenerateBasisError,
    Lattice,
    NotInLatticeError,
    NotSublatticeError,
    QuotientGroup,
    ZeroVectorError,
)
from .mfs import (
    BadParameterError,
    BaseMultipleMismatchError,
    DegenerateSimplexError,
    FamilySweepRow,
    FiberData,
    InvalidMfsError,
    NonSurjectiveError,
    ToricMfs,
    ValidationReport,
    example_family,
    generic_fiber,
    generic_fiber_group,
    loglog_slope,
    make_mfs,
    sweep_family,
    validate,
)
from .mld import (
    DEFAULT_GUARD,
    EmptyFanError,
    InvalidWeightsError,
    MldResult,
    TooLargeError,
    cyclic_quotient,
    mld,
    mld_bruteforce,
    mld_cyclic,
)
from .toric import (
    DimensionMismatchError,
    Fan,
    NonSimplicialError,
    SimplicialCone,
    ToricVariety,
    WrongShapeError,
    barycentric,
    find_containing_cone,
    is_complete,
    log_discrepancy,
)
from .witness import (
    EffectiveDelta,
    EpsDeltaCertificate,
    NoPairFoundError,
    NotInBaseLatticeError,
    PreconditionFailedError,
    WitnessReport,
    check_eps_delta,
    dirichlet_pair,
    effective_delta,
    find_witness,
    lift_to_X,
)

__version__ = "0.1.0"

__all__ = [
    "Lattice",
    "QuotientGroup",
    "Fan",
    "SimplicialCone",
    "ToricVariety",
    "MldResult",
    "ToricMfs",
    "FiberData",
    "ValidationReport",
    "FamilySweepRow",
    "WitnessReport",
    "EffectiveDelta",
    "EpsDeltaCertificate",
    "hnf",
    "snf",
    "invariant_factors",
    "solve_exact",
    "barycentric",
    "log_discrepancy",
    "find_containing_cone",
    "is_complete",
    "mld",
    "mld_cyclic",
    "mld_bruteforce",
    "cyclic_quotient",
    "validate",
    "generic_fiber",
    "generic_fiber_group",
    "make_mfs",
    "example_family",
    "sweep_family",
    "loglog_slope",
    "lift_to_X",
    "dirichlet_pair",
    "find_witness",
    "effective_delta",
    "check_eps_delta",
    "DEFAULT_GUARD",
    "SingularMatrixError",
    "DegenerateBasisError",
    "NotInLatticeError",
    "NotSublatticeError",
    "ZeroVectorError",
    "DimensionMismatchError",
    "NonSimplicialError",
    "WrongShapeError",
    "EmptyFanError",
    "TooLargeError",
    "InvalidWeightsError",
    "InvalidMfsError",
    "DegenerateSimplexError",
    "NonSurjectiveError",
    "BaseMultipleMismatchError",
    "BadParameterError",
    "NotInBaseLatticeError",
    "NoPairFoundError",
    "PreconditionFailedError",
]
