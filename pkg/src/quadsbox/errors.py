"""
Exception types raised across the toolkit.
"""


class QuadSboxError(Exception):
    """Base exception for all toolkit errors."""

    pass


class FieldDomainError(QuadSboxError):
    """Exception raised for invalid field parameters or out-of-field values."""

    pass


class PreconditionError(QuadSboxError):
    """Exception raised when an operation is called outside its domain."""

    pass


class NotAPermutationError(QuadSboxError):
    """Exception raised when a bijective table is required but not supplied."""

    pass


class TheoryConsistencyError(QuadSboxError):
    """Exception raised when a closed form disagrees with direct computation."""

    pass
