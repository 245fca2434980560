"""Benchmark configuration and report documents."""

import math
from enum import StrEnum

from pydantic import Field, field_validator

from cubepad_saliency.network.models import NetworkConfig, PipelineMode
from cubepad_saliency.padding.pad import overlap_face_width
from cubepad_saliency.types.common import Model

OVERLAP_FOV = math.radians(120.0)


class BenchMode(StrEnum):
    """Static pipelines compared by the benchmark."""

    EQUI = "equi"
    CUBEMAP_ZP = "cubemap_zp"
    CUBEMAP_CP = "cubemap_cp"
    OVERLAP = "overlap"

    @property
    def pipeline_mode(self) -> PipelineMode:
        return {
            BenchMode.EQUI: PipelineMode.EQUI,
            BenchMode.CUBEMAP_ZP: PipelineMode.ZP,
            BenchMode.CUBEMAP_CP: PipelineMode.CP,
            BenchMode.OVERLAP: PipelineMode.OVERLAP,
        }[self]

    def pixel_workload(self, p: int) -> int:
        """Pixels entering the network for an equirectangular width ``p``."""
        w = p // 4
        if self is BenchMode.EQUI:
            return p * (p // 2)
        if self is BenchMode.OVERLAP:
            return 6 * overlap_face_width(w, OVERLAP_FOV) ** 2
        return 6 * w * w


class BenchConfig(Model):
    """What to time and how often."""

    widths: list[int] = Field(default_factory=lambda: [480, 960], examples=[[480, 960]])
    modes: list[BenchMode] = Field(default_factory=lambda: list(BenchMode))
    reps: int = Field(20, ge=3, description="Timed repetitions per (mode, width).")
    warmup: int = Field(2, ge=0, description="Untimed runs before timing.")
    threads: int = Field(1, ge=1, description="Worker threads over frames.")
    batch: int = Field(1, ge=1, description="Frames processed per repetition.")
    seed: int = Field(0, ge=0)
    temporal: bool = Field(False, description="Also compare CP+ConvLSTM with EQUI+ConvLSTM.")
    z: int = Field(5, ge=1, description="ConvLSTM sequence length for the temporal comparison.")
    network: NetworkConfig = Field(default_factory=NetworkConfig)

    @field_validator("widths")
    @classmethod
    def check_widths(cls, value: list[int]) -> list[int]:
        """Widths are even and at least 64 pixels."""
        if not value:
            raise ValueError("At least one width is required")
        for p in value:
            if p < 64 or p % 2:
                raise ValueError(f"Width {p} must be even and at least 64")
        return value


class BenchRow(Model):
    """Timing of one (mode, width) cell."""

    mode: str
    p: int
    median_s: float
    min_s: float
    max_s: float
    fps: float
    pixels: int
    runs: int


class BenchEnvironment(Model):
    """Where the numbers were measured."""

    threads: int
    python: str
    numpy: str
    scipy: str
    platform: str
    package: str


class BenchReport(Model):
    rows: list[BenchRow] = Field(default_factory=list)
    temporal_rows: list[BenchRow] = Field(default_factory=list)
    overlap_ratio: float = Field(
        ..., description="Overlap face pixels over 90° face pixels at equal angular density."
    )
    environment: BenchEnvironment
