"""Exception hierarchy shared by the certifiers."""


class CertifierError(Exception):
    """Base class for every error raised by nexcert."""


class DimensionError(CertifierError, ValueError):
    pass


class MalformedMapError(CertifierError, ValueError):
    pass


class NotPiecewiseAffineError(CertifierError):
    """The requested operation needs the exact (piecewise-affine) fragment."""


class ResourceLimitError(CertifierError):
    """A configured cap (dimension, piece count) was exceeded."""


class NonexpansivenessError(CertifierError):
    """The map is not nonexpansive, or could not be shown to be."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContractBreachError(CertifierError):
    """A quantity that must be monotone (by nonexpansiveness) was not."""


class PreconditionError(CertifierError, ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ProblemFileError(CertifierError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class InconclusiveLimitError(CertifierError):
    """A limit needed for an exact structure (graph, reach) was inconclusive."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict
