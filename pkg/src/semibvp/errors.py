"""Exception types shared across the package."""

from __future__ import annotations


class SemibvpError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(SemibvpError, ValueError):
    """A grid, solver or run configuration value is unusable."""


class EvaluationError(SemibvpError, RuntimeError):
    """A model callback produced a non-finite value.

    ``node`` identifies the grid interval (or ``N`` for the boundary rows)
    where the bad value appeared.
    """

    def __init__(self, message: str, node: int | None = None):
        super().__init__(message)
        self.node = node


class LinearSolveError(SemibvpError, RuntimeError):
    """The structured linear system could not be solved reliably."""


class DivergenceError(SemibvpError, RuntimeError):
    """Newton updates grew past the divergence guard."""


class ContinuationError(SemibvpError, RuntimeError):
    """A refinement level failed to converge.

    Carries the zero-based ``level`` and the last mean update norm seen there.
    """

    def __init__(self, message: str, level: int, update_norm: float):
        super().__init__(message)
        self.level = level
        self.update_norm = update_norm
