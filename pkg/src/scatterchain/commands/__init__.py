"""Command-line entry points."""

from .cli import cli, run_cli

__all__ = ["cli", "run_cli"]
