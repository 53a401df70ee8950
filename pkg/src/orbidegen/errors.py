"""Shared exception types."""

from __future__ import annotations


class ValidationError(ValueError):
    """Input data violates a structural invariant; message names the offender."""


class ResourceLimitError(RuntimeError):
    """A hard size cap (vertex count, permutation budget) was exceeded."""
