"""Exception types shared across the package."""

from __future__ import annotations


class InvintError(Exception):
    """Base class for every error raised by this package."""


class ParseError(InvintError):
    """Malformed expression text.

    ``position`` is the character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownVariable(InvintError):
    """Expression references a name outside the declared variable set."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown variable {name!r} (at offset {position})")
        self.name = name
        self.position = position


class UnboundVariable(InvintError):
    """Evaluation environment is missing a binding for a variable."""


class DomainError(InvintError):
    """Evaluation left the real domain (log of a non-positive number,
    division by zero, even root of a negative, non-finite result)."""


class NonMonotone(InvintError):
    """Strict monotonicity screening failed.

    ``increasing`` and ``decreasing``, when present, are grid intervals
    (x_i, x_{i+1}) whose function values are ordered in opposite strict
    senses; together they witness the failure.
    """

    def __init__(
        self,
        message: str,
        increasing: tuple[float, float] | None = None,
        decreasing: tuple[float, float] | None = None,
    ):
        super().__init__(message)
        self.increasing = increasing
        self.decreasing = decreasing


class OutOfCodomain(InvintError):
    """Requested value lies outside the codomain (plus tolerance slack)."""


class NoConvergence(InvintError):
    """Iteration cap or refinement cap reached before the tolerance was met."""


class MaxSubdivision(InvintError):
    """Adaptive quadrature hit its subdivision depth cap; the integrand
    looks non-integrable or the tolerance is too tight."""


class BVRequired(InvintError):
    """Integrator function failed the monotonicity screen and was not
    declared of bounded variation by the caller."""


class InvalidAntiderivative(InvintError):
    """Claimed antiderivative fails the finite-difference derivative check."""
