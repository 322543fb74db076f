"""
Exception hierarchy for the toolkit.

Every error raised on purpose derives from ToolkitError so that the CLI and
the MCP server can map it to an exit code or an error payload.
"""

from __future__ import annotations

from typing import List, Optional


class ToolkitError(Exception):
    """Base exception for toolkit errors."""
    pass


class InvalidParametersError(ToolkitError, ValueError):
    """Raised when parameters fall outside an operation's hypotheses."""
    def __init__(self, what: str, reason: str):
        self.what = what
        self.reason = reason
        super().__init__(f"Invalid parameters for {what}: {reason}")


class CapExceededError(ToolkitError):
    """Raised when a computation would exceed a configured size cap."""
    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class NotNormalError(ToolkitError):
    """Raised when a quotient is requested by a non-normal subgroup."""
    def __init__(self, order: int):
        super().__init__(f"Subgroup of order {order} is not normal")


class NonAbelianError(ToolkitError):
    """Raised when an abelian-only operation receives a nonabelian group."""
    def __init__(self, order: int):
        super().__init__(f"Group of order {order} is not abelian")


class NotUnimodularError(ToolkitError):
    def __init__(self, det: int):
        super().__init__(f"Transform is not unimodular (det = {det})")


class NotPositiveDefiniteError(ToolkitError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"Form ({a}, {b}, {c}) is not positive definite")


class InvalidDiscriminantError(ToolkitError):
    def __init__(self, disc: int):
        super().__init__(f"Discriminant {disc} must be negative and congruent to 0 or 1 mod 4")


class SizeMismatchError(ToolkitError):
    def __init__(self, what: str, left: int, right: int):
        super().__init__(f"{what}: size mismatch ({left} vs {right})")


class CaseMismatchError(ToolkitError):
    """Raised when data built for one case is used with another."""
    def __init__(self, expected: str, got: str):
        super().__init__(f"Case mismatch: expected {expected!r}, got {got!r}")


class InvalidAutomorphismError(ToolkitError):
    def __init__(self, reason: str):
        super().__init__(f"Invalid automorphism: {reason}")


class UnknownCheckError(ToolkitError, KeyError):
    """Raised when a check id is not in the catalog."""
    def __init__(self, check_id: str, available: Optional[List[str]] = None):
        self.check_id = check_id
        message = f"Unknown check: {check_id}"
        if available:
            message += f". Available: {', '.join(available)}"
        self.message = message
        super().__init__(message)

    def __str__(self) -> str:
        return self.message
