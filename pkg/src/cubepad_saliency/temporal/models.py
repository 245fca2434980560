"""Flow fields, loss weights and loss reports."""

from pydantic import Field

from cubepad_saliency.core.exceptions import ShapeError
from cubepad_saliency.tensor.models import EquirectMap
from cubepad_saliency.types.common import Model


class FlowField(EquirectMap):
    """Per-pixel displacement (dx, dy) in pixels per frame, dims [2, q, p]."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.channels != 2:
            raise ShapeError(f"FlowField needs dims [2, q, p], got {self.dims}")


class LossWeights(Model):
    """Weights of the temporal loss terms."""

    lambda_recons: float = Field(0.1, ge=0.0, alias="lambda_r")
    lambda_smooth: float = Field(0.7, ge=0.0, alias="lambda_s")
    lambda_motion: float = Field(0.001, ge=0.0, alias="lambda_m")
    epsilon: float = Field(0.5, ge=0.0, description="Motion margin in pixels.")
    z: int = Field(5, ge=1, description="Sequence length Z of one aggregation window.")


class StepLoss(Model):
    """Loss terms of one step t (map t against map t - 1)."""

    t: int
    recons: float
    smooth: float
    motion: float
    total: float


class LossBreakdown(Model):
    """Aggregated temporal loss over one window, with raw per-term sums."""

    recons: float = 0.0
    smooth: float = 0.0
    motion: float = 0.0
    total: float = 0.0
    steps: list[StepLoss] = Field(default_factory=list)

    def __add__(self, other: "LossBreakdown") -> "LossBreakdown":
        return LossBreakdown(
            recons=self.recons + other.recons,
            smooth=self.smooth + other.smooth,
            motion=self.motion + other.motion,
            total=self.total + other.total,
            steps=[*self.steps, *other.steps],
        )


class LossReport(Model):
    """Loss of a whole map sequence split into Z-map windows."""

    weights: LossWeights
    recons: float
    smooth: float
    motion: float
    total: float
    windows: list[LossBreakdown] = Field(default_factory=list)

    @classmethod
    def from_windows(cls, weights: LossWeights, windows: list[LossBreakdown]) -> "LossReport":
        overall = sum(windows, LossBreakdown())
        return cls(
            weights=weights,
            recons=overall.recons,
            smooth=overall.smooth,
            motion=overall.motion,
            total=overall.total,
            windows=windows,
        )
