"""Viewpoints, fixation masks and metric reports."""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from pydantic import Field, field_validator

from cubepad_saliency.core.exceptions import ArgumentError
from cubepad_saliency.tensor.models import EquirectMap
from cubepad_saliency.types.common import IgnoreExtraModelMixin, Model


@dataclass(frozen=True)
class Viewpoint:
    """Viewing direction of one viewer at one frame, angles in radians."""

    frame: int
    lon: float
    lat: float

    def __post_init__(self) -> None:
        if not -math.pi / 2 <= self.lat <= math.pi / 2:
            raise ArgumentError(f"Latitude {self.lat} outside [-pi/2, pi/2]")
        object.__setattr__(self, "lon", (self.lon + math.pi) % (2 * math.pi) - math.pi)


@dataclass(frozen=True)
class FixationMask:
    """Binary [1, q, p] map of salient pixels."""

    mask: EquirectMap

    @property
    def pixels(self) -> npt.NDArray[np.bool_]:
        """Boolean [q, p] view of the mask."""
        return self.mask.data[0] > 0.5

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.pixels))


class ViewpointRecord(Model, IgnoreExtraModelMixin):
    """One line of a trajectory file."""

    frame: int = Field(..., ge=0, examples=[0])
    lon_deg: float = Field(..., description="Longitude in degrees, wrapped to [-180, 180).")
    lat_deg: float = Field(..., ge=-90.0, le=90.0, description="Latitude in degrees.")
    viewer: str = Field("unknown", examples=["viewer-01", "pilot"])
    score: float | None = Field(None, description="Saliency score of piloted viewpoints.")

    @field_validator("lon_deg")
    @classmethod
    def wrap_longitude(cls, value: float) -> float:
        return (value + 180.0) % 360.0 - 180.0

    def to_viewpoint(self) -> Viewpoint:
        return Viewpoint(self.frame, math.radians(self.lon_deg), math.radians(self.lat_deg))


class FrameMetrics(Model):
    """Scores of one predicted frame."""

    frame: int
    auc_judd: float
    auc_borji: float
    cc: float


class MetricsReport(Model):
    """Per-frame scores and their sequence means."""

    frames: list[FrameMetrics] = Field(default_factory=list)
    mean_auc_judd: float | None = None
    mean_auc_borji: float | None = None
    mean_cc: float | None = None

    @classmethod
    def from_frames(cls, frames: list[FrameMetrics]) -> "MetricsReport":
        if not frames:
            return cls()
        return cls(
            frames=frames,
            mean_auc_judd=float(np.mean([f.auc_judd for f in frames])),
            mean_auc_borji=float(np.mean([f.auc_borji for f in frames])),
            mean_cc=float(np.mean([f.cc for f in frames])),
        )
