"""Exception hierarchy shared by every module."""


class NonLimitError(ValueError):
    """Base class for all errors raised by :mod:`nonlimit`."""


class DomainError(NonLimitError):
    """An input lies outside the domain where a formula is defined."""


class EvaluationError(NonLimitError):
    """A function evaluation produced a non-finite value."""


class InsufficientSamplesError(NonLimitError):
    """A grid signal or field is too short for the requested operator."""


class ExcludedStepError(DomainError):
    """The step makes ``1 + lam*tau + tau**2 * omega**2`` vanish."""


class PoleError(DomainError):
    """The step hits ``2 + lam*tau = 0``, a pole of the cycle ratio."""


class OffGridError(DomainError):
    """Evaluation was requested away from the integer step lattice."""


class RejectedInitialData(DomainError):
    """Initial data excluded from the van der Pol Cauchy problem."""
