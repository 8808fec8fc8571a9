"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`RelkitError`
so callers (and the command line tool) can separate numerical verdicts from
programming mistakes.
"""


class RelkitError(Exception):
    """Base class for all library errors."""


class ShapeError(RelkitError, ValueError):
    """Array arguments have incompatible or unexpected shapes."""


class SpectrumError(RelkitError):
    """A requested point lies in (or numerically too close to) the spectrum."""


class DomainError(RelkitError):
    """A family or model was evaluated outside its natural domain."""


class NotContractionError(RelkitError):
    """A matrix expected to be a (selfadjoint) contraction is not one."""


class AmbiguousRankError(RelkitError):
    """No clear singular value gap, so a numerical rank cannot be decided."""


class HypothesisError(RelkitError):
    """Input violates the hypotheses of a representation identity.

    :param flag: name of the classification flag that failed, e.g.
      ``"nonnegative"``.
    """

    def __init__(self, flag, message=None):
        self.flag = flag
        super().__init__(message or "not " + flag.replace("_", " "))


class ClassMismatchError(RelkitError):
    """A family does not belong to the class an operation requires."""


class QuadratureError(RelkitError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class RealizationError(RelkitError):
    """Moment data cannot be realized by a selfadjoint passive system."""
