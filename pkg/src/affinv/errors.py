"""Exception hierarchy shared by every affinv module."""


class AffinvError(Exception):
    """Base class for all library errors."""


class ValidationError(AffinvError, ValueError):
    """Input failed a precondition (maps to CLI exit code 2)."""


class DegenerateBody(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass


class DimMismatch(ValidationError):
    pass


class SingularMap(ValidationError):
    pass


class UnsupportedDimension(ValidationError):
    pass


class UnknownId(ValidationError):
    pass


class NonConvergence(AffinvError):
    pass


class ToleranceAmbiguity(AffinvError):
    pass


class EmptyFixedSet(AffinvError):
    pass


class OutsideNeighborhood(AffinvError):
    pass


class EvaluationUnstable(AffinvError):
    pass


class TargetNotFixed(ValidationError):
    def __init__(self, message, element=None, displacement=None):
        super().__init__(message)
        self.element = element
        self.displacement = displacement


class TargetNotInterior(ValidationError):
    pass


class MinDeltaReached(AffinvError):
    pass
