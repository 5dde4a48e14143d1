"""Exception types shared across the package."""


class MonosweepError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(MonosweepError):
    """A series evaluation exhausted its term budget before converging."""


class PoleInC(MonosweepError):
    """The lower hypergeometric parameter is a non-positive integer."""


class StepUnderflow(MonosweepError):
    """The adaptive integrator was forced below the minimum step size."""


class MaxStepsExceeded(MonosweepError):
    """The adaptive integrator hit its step budget."""


class SingularConnection(MonosweepError):
    """The connection-matrix prefactor is resonantly small (degenerate input)."""


class DegenerateAsymptote(MonosweepError):
    """Both asymptotic level splitting and coupling vanish; no ground state."""


class NormDriftExceeded(MonosweepError):
    """Norm conservation of a propagated state broke the trust threshold."""


class BasisIllConditioned(MonosweepError):
    """The fundamental-solution frame is numerically singular at the base point."""


class WeightSumViolation(MonosweepError):
    """Okubo reduction weights do not sum to one."""


class ZeroCoupling(MonosweepError):
    """A vanishing coupling makes the Okubo variable change non-invertible."""


class PreconditionViolated(MonosweepError):
    """A limit formula was requested outside its regime of validity."""
