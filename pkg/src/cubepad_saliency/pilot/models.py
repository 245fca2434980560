"""Candidate viewing angles and piloted trajectories."""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError
from cubepad_saliency.evaluation.models import ViewpointRecord
from cubepad_saliency.sphere.geometry import angles_to_directions


@dataclass(frozen=True)
class CandidateGrid:
    """NFoV centers (lon, lat) in radians sharing one field of view."""

    centers: tuple[tuple[float, float], ...]
    fov: float = math.pi / 2

    def __post_init__(self) -> None:
        unique: dict[tuple[float, float], None] = {}
        for lon, lat in self.centers:
            if not -math.pi / 2 <= lat <= math.pi / 2:
                raise ArgumentError(f"Candidate latitude {lat} outside [-pi/2, pi/2]")
            wrapped = (lon + math.pi) % (2 * math.pi) - math.pi
            unique.setdefault((round(wrapped, 12), round(lat, 12)), None)
        if not unique:
            raise ArgumentError("Candidate grid is empty")
        if not 0.0 < self.fov < math.pi:
            raise ArgumentError(f"Field of view must lie in (0, pi), got {self.fov}")
        object.__setattr__(self, "centers", tuple(unique))

    @classmethod
    def from_degrees(
        cls, centers: Iterable[tuple[float, float]], fov_deg: float = 90.0
    ) -> "CandidateGrid":
        return cls(
            tuple((math.radians(lon), math.radians(lat)) for lon, lat in centers),
            math.radians(fov_deg),
        )

    @classmethod
    def regular(
        cls,
        lon_step_deg: float = 10.0,
        lat_step_deg: float = 10.0,
        lat_limit_deg: float = 45.0,
        fov_deg: float = 90.0,
    ) -> "CandidateGrid":
        """Longitudes from -180° by ``lon_step_deg``, latitudes within ±``lat_limit_deg``."""
        if lon_step_deg <= 0.0 or lat_step_deg <= 0.0:
            raise ArgumentError("Grid steps must be positive")
        lons = np.arange(-180.0, 180.0 - 1e-9, lon_step_deg)
        lats = np.arange(-lat_limit_deg, lat_limit_deg + 1e-9, lat_step_deg)
        return cls.from_degrees(
            ((float(lon), float(lat)) for lat in lats for lon in lons), fov_deg
        )

    def __len__(self) -> int:
        return len(self.centers)

    def directions(self) -> np.ndarray:
        """Unit vectors of all centers, shape [N, 3]."""
        lon, lat = np.array(self.centers, dtype=np.float64).T
        return angles_to_directions(lon, lat)


@dataclass(frozen=True)
class ViewpointTrajectory:
    """One chosen candidate per frame with its score."""

    candidates: tuple[int, ...]
    lons: tuple[float, ...]
    lats: tuple[float, ...]
    scores: tuple[float, ...]

    @property
    def total(self) -> float:
        return float(sum(self.scores))

    def to_records(
        self, viewer: str = "pilot", frames: Sequence[int] | None = None
    ) -> list[ViewpointRecord]:
        """Trajectory as viewpoint records that evaluation can read back.

        ``frames`` numbers the records; by default they count from 0.
        """
        numbers = range(len(self.lons)) if frames is None else frames
        if len(numbers) != len(self.lons):
            raise ArgumentError(f"{len(self.lons)} trajectory steps, {len(numbers)} frame numbers")
        return [
            ViewpointRecord(
                frame=frame,
                lon_deg=math.degrees(lon),
                lat_deg=math.degrees(lat),
                viewer=viewer,
                score=score,
            )
            for frame, lon, lat, score in zip(numbers, self.lons, self.lats, self.scores)
        ]
