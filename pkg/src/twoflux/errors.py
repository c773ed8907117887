"""Exception types raised by the twoflux solvers."""


class TwoFluxError(Exception):
    """Base class for all twoflux errors."""


class InvalidPartitionError(TwoFluxError):
    """Breakpoints or partition points are non-monotone or out of range."""


class StateDomainError(TwoFluxError):
    """A state value lies outside the admissible interval [u_min, u_max]."""


class InvalidInputError(TwoFluxError):
    """Initial data does not meet the solver's requirements (e.g. unbounded variation)."""


class DivergentIntegralError(TwoFluxError):
    """An integral over the real line does not converge (mismatched far-field values)."""


class StaleSampleError(TwoFluxError):
    """A snapshot was requested at a time separated from the state by a collision event."""


class CFLError(TwoFluxError):
    """The time step violates the CFL restriction of the finite volume scheme."""


class ConfigError(TwoFluxError):
    """A problem or experiment configuration is incomplete or inconsistent."""


class ResourceError(TwoFluxError):
    """A solver resource guard tripped.  Carries diagnostic stats."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class FrontCapError(ResourceError):
    """The front tracking engine exceeded its configured front count cap."""


class CollisionCapError(ResourceError):
    """The front tracking engine exceeded its configured collision count cap."""


class InfeasibleInterfaceError(TwoFluxError):
    """No admissible trace pair was found for an interface Riemann problem.

    Should be unreachable for data satisfying the problem's assumptions; the
    candidate list is attached for diagnosis.
    """

    def __init__(self, message, candidates=None):
        super().__init__(message)
        self.candidates = list(candidates or [])
