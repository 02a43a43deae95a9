"""
Module: errors
Component: Shared exception hierarchy
Purpose: One base class for every refusal the library raises, split by cause.

Exceptions handled:
- InvalidInputError: a precondition of an operation is violated (bad symbol,
  overlapping label sets, non-critical cell, non-prime characteristic, ...)
- SizeLimitError: an exhaustive computation was refused because the complex
  exceeds the configured cell ceiling
"""


class StripHomologyError(Exception):
    """Base class of all strip_homology errors."""


class InvalidInputError(StripHomologyError, ValueError):
    """Raised when an operation receives input outside its preconditions."""


class SizeLimitError(StripHomologyError, RuntimeError):
    """Raised when a computation would exceed a configured size ceiling."""
