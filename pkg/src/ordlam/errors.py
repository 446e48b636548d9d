"""Shared error types."""


class InvariantError(Exception):
    """An internal invariant was broken (a bug, never a user-input error)."""
