"""
Exception hierarchy shared by every package.

Each error carries the process exit code the CLI reports for it:
2 for usage, parameter and configuration problems, 1 for protocol failures.
"""


class PirError(Exception):
    """Base class for all toolkit errors."""
    exit_code = 2


# =============================================================================
# USAGE / PARAMETER ERRORS (exit 2)
# =============================================================================

class ConfigError(PirError):
    """Bundle or database file is malformed, incomplete or references missing files."""


class ParameterError(PirError, ValueError):
    """A construction hypothesis does not hold."""


class FieldError(ParameterError):
    """Invalid field description or missing root of unity."""


class FieldMismatchError(FieldError):
    """Elements of two different fields were combined."""


class ZeroInverseError(FieldError, ZeroDivisionError):
    def __init__(self, message: str = "zero has no inverse"):
        super().__init__(message)


class AlgebraError(ParameterError):
    """Malformed polynomial, Hasse vector or multiplicity."""


class MvfError(ParameterError):
    """Unsupported matching vector family shape or invalid family file."""


class LiftError(ParameterError):
    """Target set is not covered by the multiplicity lift."""

    def __init__(self, message: str, residue: int):
        super().__init__(message)
        self.residue = residue


class EncodingError(PirError, ValueError):
    """Field element bytes are malformed."""


class BudgetExceededError(PirError):
    """A search or enumeration would exceed its configured budget."""


# =============================================================================
# PROTOCOL ERRORS (exit 1)
# =============================================================================

class ProtocolError(PirError):
    exit_code = 1


class WireError(ProtocolError):
    """Malformed frame or payload."""


class RemoteQueryError(ProtocolError):
    """A server timed out, was unreachable or replied with an ERROR frame."""

    def __init__(self, message: str, server: str):
        super().__init__(f"server {server}: {message}")
        self.server = server


class ReconstructionError(ProtocolError):
    """Answers are missing or mis-sized, or reconstruction disagrees with the database."""
