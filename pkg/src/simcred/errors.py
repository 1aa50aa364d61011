"""Exception types raised across the toolkit."""


class SimcredError(Exception):
    """Base class for all toolkit errors."""


class DomainError(SimcredError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class DegenerateDataError(DomainError):
    """The data cannot support the requested computation (e.g. a constant
    reference curve, from which no relative threshold can be derived)."""


class AlignmentError(SimcredError):
    """Two series cannot be brought onto a common grid."""


class EstimationError(SimcredError):
    """Spectral estimation cannot produce a meaningful result."""


class CsvError(SimcredError):
    """A data file is malformed; the message carries file/line context."""


class ManifestError(SimcredError):
    """A run manifest is malformed or references bad inputs."""
