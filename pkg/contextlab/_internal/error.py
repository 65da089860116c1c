"""Error types for contextlab"""


class ContextLabError(Exception):
    """Base class for all contextlab errors"""

    def __init__(self, msg):
        Exception.__init__(self, msg)
        self.msg = msg

    def __str__(self):
        return '%s::%s' % (self.__class__.__name__, self.msg)

    def __repr__(self):
        return self.__str__()


class NormalizationError(ContextLabError):
    """A vector that must be a unit vector is not."""


class DimensionError(ContextLabError):
    """Operands live on different Hilbert spaces, or a dimension is not a power of two."""


class HermiticityError(ContextLabError):
    """An operator that must be Hermitian is not."""


class ScenarioError(ContextLabError):
    """A contextuality scenario is malformed."""


class ScenarioNotFoundError(ScenarioError):
    """No registered scenario has this name, and no readable file has this path."""


class GraphBudgetError(ContextLabError):
    """Graph too large for exact enumeration."""


class LinearProgramError(ContextLabError):
    """The packing LP did not reach an optimum. Should never happen: w=0 is feasible."""


class MappingError(ContextLabError):
    """A Pauli term has no readout mapping, or a gate step is out of range."""


class VerificationError(ContextLabError):
    """An identity of the verification suite does not hold."""


class UsageError(ContextLabError):
    """Bad command line input."""


class PolarizationError(ContextLabError):
    """Pseudopure polarization outside (0, 1]."""
