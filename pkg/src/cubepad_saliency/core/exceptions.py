"""Error handling for the toolkit."""

import json

from pydantic import ValidationError


class CubePadError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1

    def __init__(self, message: str, *, detail: str | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


# ---- data errors (exit 1) ----


class FormatError(CubePadError):
    """A file does not follow its declared format."""


class DataError(CubePadError):
    """Values are well-formed but unusable (NaN, Inf, missing frames)."""


class IoError(CubePadError, OSError):
    """Reading or writing an artifact failed."""


class ShapeError(CubePadError, ValueError):
    """Tensor dimensions do not chain."""


class DegenerateError(CubePadError, ValueError):
    """A statistic is undefined for the input, e.g. zero variance."""


class InfeasibleError(CubePadError):
    """No trajectory satisfies the angular velocity constraint."""


class InternalError(CubePadError):
    """An internal consistency check failed."""


# ---- usage errors (exit 2) ----


class ArgumentError(CubePadError, ValueError):
    """A caller supplied an argument outside its documented domain."""

    exit_code = 2


EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2

_FOREIGN_TO_EXIT_CODE: dict[type[Exception], int] = {
    ValidationError: EXIT_DATA_ERROR,
    json.JSONDecodeError: EXIT_DATA_ERROR,
    OSError: EXIT_DATA_ERROR,
}


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the command line exit code contract."""
    if isinstance(exc, CubePadError):
        return exc.exit_code
    for exc_cls, code in _FOREIGN_TO_EXIT_CODE.items():
        if isinstance(exc, exc_cls):
            return code
    return EXIT_DATA_ERROR
