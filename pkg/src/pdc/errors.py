"""Exception hierarchy shared by every module of the package."""


class PDCError(Exception):
    """Base class for all errors raised by pdc."""


class DimensionMismatch(PDCError, ValueError):
    pass


class EmptyPieceList(PDCError, ValueError):
    pass


class MalformedProblem(PDCError, ValueError):
    pass


class NotSeparable(PDCError):
    """Raised when a separating functional is requested for sets that meet."""


class NotNormalized(PDCError, ValueError):
    pass


class NonzeroOffset(PDCError, ValueError):
    pass


class RouteDisagreement(PDCError, RuntimeError):
    """Two formulations of the same condition returned different verdicts.

    The formulations are mathematically equivalent, so this always signals
    a defect in the geometry kernel.
    """


class CertificateError(PDCError, RuntimeError):
    """A certificate produced by the solver failed independent verification."""


class GridTooLarge(PDCError, ValueError):
    pass


class ParseError(PDCError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class UnsupportedDimension(PDCError, ValueError):
    pass
