"""Spherical geometry data models."""

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator

from cubepad_saliency.core.exceptions import ArgumentError
from cubepad_saliency.tensor.models import FACE_ORDER


class FaceId(StrEnum):
    """Cube faces; alphabetical order is the cubemap stack order."""

    B = "B"
    D = "D"
    F = "F"
    L = "L"
    R = "R"
    T = "T"

    @property
    def index(self) -> int:
        """Position of the face in a cubemap stack."""
        return FACE_ORDER.index(self.value)


@dataclass(frozen=True)
class FaceAxes:
    """Outward normal and in-plane axes of a cube face (u grows right, v grows down)."""

    normal: tuple[float, float, float]
    u_axis: tuple[float, float, float]
    v_axis: tuple[float, float, float]


@dataclass(frozen=True)
class SphericalDirection:
    """Unit 3-vector in the world frame (x forward, y right of front, z up)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.0) > 1e-6:
            raise ArgumentError(f"Direction must be unit length, got norm {norm}")

    @classmethod
    def from_vector(cls, vec: npt.ArrayLike) -> "SphericalDirection":
        """Normalize any non-zero 3-vector."""
        arr = np.asarray(vec, dtype=np.float64)
        norm = float(np.linalg.norm(arr))
        if arr.shape != (3,) or norm == 0.0:
            raise ArgumentError("Direction needs a non-zero 3-vector")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    @classmethod
    def from_angles(cls, lon: float, lat: float) -> "SphericalDirection":
        """Direction of longitude ``lon`` and latitude ``lat`` (radians)."""
        return cls(
            math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


class NFoVSpec(BaseModel):
    """A perspective viewport on the sphere."""

    model_config = ConfigDict(frozen=True)

    lon: float = Field(0.0, description="Center longitude in radians, [-pi, pi).")
    lat: float = Field(0.0, description="Center latitude in radians, [-pi/2, pi/2].")
    fov_x: float = Field(math.pi / 2, gt=0.0, lt=math.pi, description="Horizontal FoV.")
    fov_y: float = Field(math.pi / 2, gt=0.0, lt=math.pi, description="Vertical FoV.")
    width: int = Field(64, ge=1, description="Output width in pixels.")
    height: int = Field(64, ge=1, description="Output height in pixels.")

    @field_validator("lon")
    @classmethod
    def wrap_longitude(cls, value: float) -> float:
        """Wrap longitude into [-pi, pi)."""
        return (value + math.pi) % (2 * math.pi) - math.pi

    @field_validator("lat")
    @classmethod
    def check_latitude(cls, value: float) -> float:
        """Latitude stays on the sphere."""
        if not -math.pi / 2 <= value <= math.pi / 2:
            raise ValueError(f"Latitude {value} outside [-pi/2, pi/2]")
        return value
