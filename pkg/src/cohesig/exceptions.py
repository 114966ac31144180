"""Exception hierarchy shared by all cohesig modules."""


class CohesigError(Exception):
    """Base class for every error raised by this package."""


class EmptyDocumentError(CohesigError):
    """A document contained no segments after parsing."""


class LemmaTableParseError(CohesigError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class FormatError(CohesigError):
    """A serialized file (alignment TSV, signal CSV, manifest) is malformed."""


class TooFewSegmentsError(CohesigError):
    """A cohesion signal needs at least two segments."""


class FilterWindowError(CohesigError):
    """The smoothing window does not fit the signal."""


class ZeroNormError(CohesigError):
    """Correlation normalization is undefined for an all-zero signal."""


class SignalLengthError(CohesigError):
    """Signals compared against each other must have equal length."""


class ComparisonError(CohesigError):
    """Boundary sets from documents of different lengths were compared."""
