"""
UCERT - Error types
"""

from typing import Optional


class UcertError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionError(UcertError, ValueError):
    """Qubit counts or array shapes do not match."""


class ArgumentError(UcertError, ValueError):
    """An argument is outside its documented range."""


class CapabilityError(UcertError):
    """The requested size exceeds a configured simulation cap."""


class ConfigurationError(UcertError):
    """A certification or simulation configuration is invalid."""


class RecordFormatError(UcertError):
    """A graph, generator or measurement-record file could not be parsed."""


class NotCertifiableError(UcertError):
    """The target lies outside the family the certification routine supports."""

    def __init__(self, message: str, vertex: Optional[int] = None):
        super().__init__(message)
        self.vertex = vertex
