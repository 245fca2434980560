"""Core utilities shared by every sub-package."""

from .exceptions import (
    ArgumentError,
    CubePadError,
    DataError,
    DegenerateError,
    FormatError,
    InfeasibleError,
    InternalError,
    IoError,
    ShapeError,
    exit_code_for,
)

__all__ = [
    "ArgumentError",
    "CubePadError",
    "DataError",
    "DegenerateError",
    "FormatError",
    "InfeasibleError",
    "InternalError",
    "IoError",
    "ShapeError",
    "exit_code_for",
]
