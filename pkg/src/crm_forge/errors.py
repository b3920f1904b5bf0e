"""Service-level errors shared across auth, CRUD, and the GraphQL surface.

Each error carries a stable machine-readable ``code`` that rides in GraphQL
``extensions.code``; auth failures never leak whether an account exists.
"""

from __future__ import annotations

from typing import Optional

from .domain import Violation


class ApiError(Exception):
    code = "INTERNAL"

    def __init__(self, message: str, extensions: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.extensions = {"code": self.code, **(extensions or {})}


class Unauthenticated(ApiError):
    code = "UNAUTHENTICATED"

    def __init__(self, message: str = "authentication required"):
        super().__init__(message)


class Forbidden(ApiError):
    code = "FORBIDDEN"

    def __init__(self, message: str = "not allowed"):
        super().__init__(message)


class NotFound(ApiError):
    code = "NOT_FOUND"


class ValidationFailed(ApiError):
    code = "VALIDATION_FAILED"

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        detail = "; ".join(f"{v.field}: {v.message}" for v in violations)
        super().__init__(
            f"validation failed: {detail}",
            {"violations": [v.to_payload() for v in violations]},
        )


class EmailTaken(ApiError):
    code = "EMAIL_TAKEN"

    def __init__(self) -> None:
        super().__init__("email is already in use")


class WeakPassword(ApiError):
    code = "WEAK_PASSWORD"

    def __init__(self) -> None:
        super().__init__("password must be at least 8 characters")


class InvalidCredentials(ApiError):
    """Identical payload for unknown email and wrong password."""

    code = "INVALID_CREDENTIALS"

    def __init__(self) -> None:
        super().__init__("invalid email or password")


class InvalidToken(ApiError):
    """Identical payload for unknown, used, and expired recovery tokens."""

    code = "INVALID_TOKEN"

    def __init__(self) -> None:
        super().__init__("recovery token is invalid")


class BadWindow(ApiError):
    code = "BAD_WINDOW"


class BadRequest(ApiError):
    code = "BAD_USER_INPUT"
