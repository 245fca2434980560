"""Temporal losses over predicted saliency map sequences."""

from .flow import (
    blob_flow,
    constant_flow,
    flow_magnitude,
    motion_magnitude_saliency,
    rotation_flow,
    warp,
)
from .losses import loss_grad, loss_motion, loss_recons, loss_smooth, loss_total
from .models import FlowField, LossBreakdown, LossReport, LossWeights, StepLoss

__all__ = [
    "FlowField",
    "LossBreakdown",
    "LossReport",
    "LossWeights",
    "StepLoss",
    "blob_flow",
    "constant_flow",
    "flow_magnitude",
    "loss_grad",
    "loss_motion",
    "loss_recons",
    "loss_smooth",
    "loss_total",
    "motion_magnitude_saliency",
    "rotation_flow",
    "warp",
]
