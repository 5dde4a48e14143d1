"""Nonadiabatic transition probabilities of driven two-level systems.

The closed forms come from the monodromy of the hypergeometric equation the
sweep model reduces to; every analytic step is backed by an independent
numerical oracle (time-domain propagation, complex-contour continuation,
normal-form residuals).
"""

from ._backend import COMPILED
from .errors import (
    BasisIllConditioned,
    DegenerateAsymptote,
    MaxStepsExceeded,
    MonosweepError,
    NonConvergence,
    NormDriftExceeded,
    PoleInC,
    PreconditionViolated,
    SingularConnection,
    StepUnderflow,
    WeightSumViolation,
    ZeroCoupling,
)
from .models import (
    MultiLevelParams,
    ProfileShape,
    ScaledParams,
    SweepClass,
    SweepModel,
    SweepProfile,
    TwoLevelParams,
    asymptotic_excited_state,
    asymptotic_ground_state,
    hamiltonian_at,
    multilevel_hamiltonian,
)
from .monodromy import (
    HypergeometricParams,
    LandauZenerLimit,
    MonodromyData,
    connection_matrix,
    extremal_probabilities,
    extremal_probabilities_scaled,
    global_monodromy,
    hypergeometric_params,
    initial_coefficients,
    limit_formula,
    local_monodromy,
    monodromy_element11,
    numeric_monodromy,
    phase_factor,
    transition_probability,
    transition_probability_assembled,
    transition_probability_scaled,
)
from .numerics import (
    ArcSegment,
    ContourPath,
    IntegratorConfig,
    LineSegment,
    eval_2f1,
    integrate_linear_ode,
)
from .okubo import (
    OkuboSystem,
    build_okubo,
    lambda_independence_check,
    okubo_residual,
    propagate_via_okubo,
    transform_chain,
)
from .propagator import (
    PropagationConfig,
    PropagationResult,
    class_invariance_check,
    propagate,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "ArcSegment",
    "BasisIllConditioned",
    "ContourPath",
    "DegenerateAsymptote",
    "HypergeometricParams",
    "IntegratorConfig",
    "LandauZenerLimit",
    "LineSegment",
    "MaxStepsExceeded",
    "MonodromyData",
    "MonosweepError",
    "MultiLevelParams",
    "NonConvergence",
    "NormDriftExceeded",
    "OkuboSystem",
    "PoleInC",
    "PreconditionViolated",
    "ProfileShape",
    "PropagationConfig",
    "PropagationResult",
    "ScaledParams",
    "SingularConnection",
    "StepUnderflow",
    "SweepClass",
    "SweepModel",
    "SweepProfile",
    "TwoLevelParams",
    "WeightSumViolation",
    "ZeroCoupling",
    "asymptotic_excited_state",
    "asymptotic_ground_state",
    "build_okubo",
    "class_invariance_check",
    "connection_matrix",
    "eval_2f1",
    "extremal_probabilities",
    "extremal_probabilities_scaled",
    "global_monodromy",
    "hamiltonian_at",
    "hypergeometric_params",
    "initial_coefficients",
    "integrate_linear_ode",
    "lambda_independence_check",
    "limit_formula",
    "local_monodromy",
    "monodromy_element11",
    "multilevel_hamiltonian",
    "numeric_monodromy",
    "okubo_residual",
    "phase_factor",
    "propagate",
    "propagate_via_okubo",
    "transform_chain",
    "transition_probability",
    "transition_probability_assembled",
    "transition_probability_scaled",
]
