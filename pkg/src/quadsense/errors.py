"""Exception types shared across the toolkit.

Scenario/usage problems and physics-domain problems are kept separate so the
CLI can map them to distinct exit codes (2 and 3 respectively).
"""


class QuadsenseError(Exception):
    """Base class for all toolkit errors."""


class ScenarioError(QuadsenseError):
    """Malformed scenario input: unknown keys, missing or inconsistent fields."""


class PhysicsDomainError(QuadsenseError):
    """A computation was requested outside its physical/mathematical domain."""


class SingularityError(PhysicsDomainError):
    """Evaluation at a singular point (e.g. the mechanical susceptibility at zero frequency)."""


class PoleError(PhysicsDomainError):
    """A denominator in a closed-form expression vanished."""


class MarginalStabilityError(PhysicsDomainError):
    """The drift matrix is not strictly stable, so no stationary state exists."""


class UndefinedResponseError(PhysicsDomainError):
    """The mechanical response vanishes, so input-referred noise is undefined."""


class OptimizerError(QuadsenseError):
    """The constrained optimizer could not produce a feasible result."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
