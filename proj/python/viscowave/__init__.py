"""Python bindings for the viscowave solver."""

import json

from ._viscowave import (
    IoError,
    NumericalError,
    ValidationError,
    green,
    incomplete_gamma,
    modal_kernel,
    solve,
)
from ._viscowave import run_command as _run_command

__all__ = [
    "IoError",
    "NumericalError",
    "ValidationError",
    "green",
    "incomplete_gamma",
    "modal_kernel",
    "run_command",
    "solve",
]


def run_command(name, overrides=None):
    """Run green, solve, oracle, sweep or bound-check; returns the summary dict."""
    return json.loads(_run_command(name, dict(overrides or {})))
