"""Exception types raised by the toolkit."""


class TreecastError(Exception):
    """Base class for all toolkit errors."""


class SeriesTooShort(TreecastError):
    """The series has too few observations for the requested operation."""


class EmptyTrainingSet(TreecastError):
    """A regressor was asked to fit zero examples."""


class EmptyDataset(TreecastError):
    """A dataset-level operation received no series."""


class DimensionMismatch(TreecastError):
    """An input vector does not match the trained feature count."""


class ZeroFeatureMean(TreecastError):
    """A multiplicative transform hit a training row whose feature mean is zero."""


class SpecMismatch(TreecastError):
    """A transform spec was used with an operation it does not support."""


class DegenerateScale(TreecastError):
    """The scaled-error denominator is zero (seasonally constant history)."""


class NonFiniteValue(TreecastError):
    """An input file contains a NaN or infinite value."""


class DuplicateSeriesName(TreecastError):
    """Two series in one file share a name."""


class ParseError(TreecastError):
    """Malformed input file.

    Carries the 1-based line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
