"""Root of the scatterchain exception hierarchy."""

from __future__ import annotations


class ScatterChainError(Exception):
    """Base class for every error raised by scatterchain."""
