"""Exception hierarchy shared by the model, the solvers and the CLI."""

from __future__ import annotations

from typing import Any

__all__ = [
    "ConfigError",
    "DomainError",
    "HybridLinkError",
    "InfeasibleError",
    "OutputError",
    "QuadratureError",
    "RootFindingError",
]


class HybridLinkError(Exception):
    """Base class for every error raised by ``hybrid_link``."""


class DomainError(HybridLinkError, ValueError):
    """An argument lies outside the domain of the formula."""


class ConfigError(HybridLinkError, ValueError):
    """A configuration document could not be turned into a ``RunConfig``.

    Attributes:
        key: Offending key, if known.
        line: 1-based line number in the source document, if known.
    """

    def __init__(self, message: str, *, key: str | None = None, line: int | None = None) -> None:
        self.key = key
        self.line = line
        where = ""
        if key is not None:
            where = f"{key}: "
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(f"{where}{message}")


class QuadratureError(HybridLinkError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, *, estimate: float, error: float) -> None:
        self.estimate = estimate
        self.error = error
        super().__init__(f"{message} (best estimate {estimate:.12g} ± {error:.3g})")


class RootFindingError(HybridLinkError, ArithmeticError):
    """Bracketed root finding failed (bad bracket or iteration limit)."""

    def __init__(self, message: str, *, best_estimate: float | None = None) -> None:
        self.best_estimate = best_estimate
        suffix = "" if best_estimate is None else f" (best estimate {best_estimate:.12g})"
        super().__init__(f"{message}{suffix}")


class InfeasibleError(HybridLinkError):
    """A requested target cannot be reached with the given parameters."""

    def __init__(self, message: str, *, diagnostic: dict[str, Any] | None = None) -> None:
        self.diagnostic = diagnostic or {}
        super().__init__(message)


class OutputError(HybridLinkError, OSError):
    """An output file could not be written."""

    def __init__(self, message: str, *, path: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")
