"""Custom exceptions for ipdsaw."""

from __future__ import annotations

from typing import Sequence


class IpdsawError(Exception):
    """Base exception for ipdsaw."""

    pass


class InvalidConfigurationError(IpdsawError):
    """Raised when a stretch vector or lattice path violates its invariants."""

    pass


class InvalidWalkError(IpdsawError):
    """Raised when a walk is not pinned to 0 where required."""

    pass


class DomainError(IpdsawError):
    """Raised when a parameter lies outside the mathematical domain of an operation."""

    pass


class BudgetExceededError(IpdsawError):
    """Raised when a length or enumeration guard is exceeded."""

    pass


class ConvergenceError(IpdsawError):
    """Raised when an iterative method fails to converge."""

    def __init__(self, message: str, last_values: Sequence[float] = ()) -> None:
        super().__init__(message)
        self.last_values = tuple(last_values)

    def __str__(self) -> str:
        base = super().__str__()
        if self.last_values:
            vals = ", ".join(f"{v:.12g}" for v in self.last_values)
            return f"{base} (last values: {vals})"
        return base


class EmptyEnsembleError(IpdsawError):
    """Raised when an estimator receives an empty ensemble."""

    pass


class RunConfigError(IpdsawError):
    """Raised when a run configuration (flags or INI file) is invalid."""

    pass


class SelfTestFailure(IpdsawError):
    """Raised when an oracle suite reports a failure."""

    pass
