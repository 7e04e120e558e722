"""Exception hierarchy shared by all triadic modules."""


class TriadicError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(TriadicError):
    """Vector/matrix dimensions are inconsistent."""


class NonNormalizedError(TriadicError):
    """A probability vector or row has negative entries or does not sum to 1."""


class ImpossibleObservationError(TriadicError):
    """Some observable value has zero marginal probability."""


class InvalidCountsError(TriadicError):
    """Counts passed to a count-based model are out of range (e.g. n >= N)."""


class TooLargeError(TriadicError):
    """An enumeration or exhaustive scan would exceed its size guard."""


class InvalidLossError(TriadicError):
    """A loss function violates its validity constraints."""


class ImproperLossError(TriadicError):
    """A loss required to be proper fails the properness inequalities."""


class EmptyRegionError(TriadicError):
    """A region estimator maps some observation to the empty set."""


class NotCoherentError(TriadicError):
    """A construction requiring a logically coherent test received an incoherent one."""


class NotRegionBasedError(TriadicError):
    """A certification requiring a region-based test received a non-region-based one."""


class ReplayFailedError(TriadicError):
    """An internally verified construction failed to reproduce its input (a bug, never expected)."""


class SizeTooSmallError(TriadicError):
    """The parameter space is too small for the requested construction."""


class ScenarioParseError(TriadicError):
    """A scenario document could not be parsed."""


class ScenarioValidationError(TriadicError):
    """A scenario document parsed but fails validation for its task."""
