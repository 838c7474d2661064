"""Exception hierarchy shared by every dsvis module."""


class DsvisError(Exception):
    """Base class for all library errors."""


class ValidationError(DsvisError, ValueError):
    """Input data violates a documented invariant."""


class NonMonotonicXError(ValidationError):
    pass


class LengthMismatchError(ValidationError):
    pass


class NonFiniteValueError(ValidationError):
    pass


class TooShortError(ValidationError):
    pass


class InvalidBucketCountError(ValidationError):
    pass


class EmptyViewError(ValidationError):
    pass


class InvalidNOutError(ValidationError):
    pass


class UnknownAlgorithmError(ValidationError):
    pass


class InvalidConfigError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class EvenKernelError(ValidationError):
    pass


class EmptyMaskError(ValidationError):
    pass


class ImageSmallerThanWindowError(ValidationError):
    pass


class InvalidViewUpdateError(ValidationError):
    pass


class EmptyIntersectionError(ValidationError):
    pass


class OutOfDomainError(ValidationError):
    pass


class InsufficientOverlapError(ValidationError):
    pass


class NoPairsError(ValidationError):
    pass


class NoPeaksError(ValidationError):
    """No strict local extremum exists; MAEP is undefined for the pair."""


class TooLongError(ValidationError):
    pass


class UnsupportedAlgorithmError(ValidationError):
    pass


class ParseError(DsvisError, ValueError):
    """A series or records file could not be parsed."""
