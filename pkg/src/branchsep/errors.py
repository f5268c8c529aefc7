"""Exception types shared across the library."""


class BranchSepError(Exception):
    """Base class for all errors raised by this library."""


class UnknownOrder(BranchSepError):
    """A series vanishes up to a finite truncation order, so its order is unknown."""


class ExponentGroupMismatch(BranchSepError):
    """Operands live over different exponent groups."""


class Indeterminate(BranchSepError):
    """A sign or comparison cannot be decided at the available truncation."""


class DegreeTooHigh(BranchSepError):
    """A root computation leaves the supported scalar fields."""


class DenominatorBound(BranchSepError):
    """Puiseux exponent denominators exceeded the configured bound."""


class ZeroPolynomial(BranchSepError):
    """The zero polynomial was passed where a nonzero one is required."""


class NotAnEdge(BranchSepError):
    """The given segment is not an edge of the polygon."""


class NoEdges(BranchSepError):
    """The polygon consists of a single vertex."""


class NonConvergence(BranchSepError):
    """An iteration exceeded its step bound; signals a bug or an out-of-model input."""


class NoRealRoot(BranchSepError):
    """A guaranteed real root was not found; this is a test-surface signal."""


class EmptyDomain(BranchSepError):
    """The sample domain is empty."""


class ChainBroken(BranchSepError):
    """A guaranteed chain construction failed at some step."""

    def __init__(self, step, reason):
        super().__init__(f"chain broken at step {step}: {reason}")
        self.step = step
        self.reason = reason


class SoundnessViolation(BranchSepError):
    """The decision pipeline and the independent oracle disagree."""


class ParseError(BranchSepError):
    """Malformed input text."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column
