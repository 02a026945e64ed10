import logging
from typing import Any

from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import exception_handler

logger = logging.getLogger(__name__)


class HeckeError(Exception):
    """Base class for every domain error raised by the library."""

    code = "hecke_error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self) -> dict[str, Any]:
        return {
            "error": self.code,
            "message": self.message,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


class DiagramParseError(HeckeError):
    code = "invalid_diagram"


class UnknownNodeError(HeckeError):
    code = "unknown_node"


class NonSphericalError(HeckeError):
    code = "non_spherical"


class ContextMismatchError(HeckeError):
    code = "context_mismatch"


class FieldArithmeticError(HeckeError):
    code = "field_error"


class GuardExceededError(HeckeError):
    code = "guard_exceeded"


class ClosureLimitError(HeckeError):
    code = "limit_exceeded"

    def __init__(
        self, message: str, partial: list[Any] | None = None, **details: Any
    ) -> None:
        super().__init__(message, **details)
        self.partial = partial or []


class MalformedWitnessError(HeckeError):
    code = "malformed_witness"


class DominanceError(HeckeError):
    code = "dominance_violated"


class InvariantViolation(HeckeError):
    code = "invariant_violation"


class TableDataError(HeckeError):
    code = "malformed_table"


def _jsonable(value: Any) -> Any:
    if isinstance(value, str | int | float | bool) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple | set | frozenset):
        return [_jsonable(v) for v in value]
    return str(value)


def custom_exception_handler(
    exc: Exception, context: dict[str, Any]
) -> Response | None:
    response = exception_handler(exc, context)

    if isinstance(exc, HeckeError):
        if isinstance(exc, InvariantViolation):
            logger.error(f"Invariant violated: {exc}", exc_info=True)
            return Response(
                exc.as_dict(), status=status.HTTP_500_INTERNAL_SERVER_ERROR
            )
        return Response(exc.as_dict(), status=status.HTTP_400_BAD_REQUEST)

    if isinstance(exc, ValueError):
        return Response(
            {
                "error": "invalid_parameters",
                "message": "Invalid request parameters",
                "details": {"parameter_error": str(exc)},
            },
            status=status.HTTP_400_BAD_REQUEST,
        )

    if response is None:
        logger.error(f"Unhandled exception: {exc}", exc_info=True)
        return Response(
            {
                "error": "server_error",
                "message": "An unexpected error occurred on the server.",
                "details": {"error_details": str(exc)},
            },
            status=status.HTTP_500_INTERNAL_SERVER_ERROR,
        )

    return response
