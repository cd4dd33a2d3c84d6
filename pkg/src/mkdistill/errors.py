"""Exception hierarchy shared by all modules."""


class MkDistillError(Exception):
    """Base class for every error raised by this package."""


class InputError(MkDistillError, ValueError):
    """Invalid user-supplied data (maps to CLI exit code 2)."""


class NormalizationError(InputError):
    pass


class IndexRangeError(InputError):
    pass


class NegativeCoefficientError(InputError):
    pass


class SplitMismatchError(InputError):
    pass


class NonUnitVectorError(InputError):
    pass


class NotADensityMatrixError(InputError):
    pass


class ParseError(InputError):
    pass


class DimensionCapError(MkDistillError):
    """Requested dense object exceeds the configured qubit cap."""


class SamplingTimeoutError(MkDistillError, RuntimeError):
    pass


class AlignmentFailedError(MkDistillError, RuntimeError):
    pass


class TheoremViolation(MkDistillError, AssertionError):
    """A checked bound or identity failed; indicates a bug, not bad input."""
