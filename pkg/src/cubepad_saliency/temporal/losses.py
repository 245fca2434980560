"""Self-supervised temporal losses and their gradient with respect to the current map.

Every loss is a float64 mean over all N = c * q * p map values.
"""

import logging
from collections.abc import Sequence

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError, ShapeError
from cubepad_saliency.tensor.models import EquirectMap

from .flow import check_flow, flow_magnitude, warp
from .models import FlowField, LossBreakdown, LossWeights, StepLoss

LOG = logging.getLogger(__name__)


def _check_pair(a: EquirectMap, b: EquirectMap) -> None:
    if a.dims != b.dims:
        raise ShapeError(f"Saliency maps differ in dims: {a.dims} vs {b.dims}")


def _mean_square(diff: np.ndarray) -> float:
    return float(np.mean(np.square(diff, dtype=np.float64)))


def _static_mask(flow: FlowField, epsilon: float) -> np.ndarray:
    return flow_magnitude(flow) <= epsilon


def loss_recons(o_t: EquirectMap, o_prev: EquirectMap, flow: FlowField) -> float:
    """Mean squared error between O_t and the flow-warped O_{t-1}."""
    _check_pair(o_t, o_prev)
    warped = warp(o_prev, flow)
    return _mean_square(o_t.data.astype(np.float64) - warped.data)


def loss_smooth(o_t: EquirectMap, o_prev: EquirectMap) -> float:
    """Mean squared error between consecutive maps."""
    _check_pair(o_t, o_prev)
    return _mean_square(o_t.data.astype(np.float64) - o_prev.data)


def loss_motion(o_t: EquirectMap, flow: FlowField, epsilon: float) -> float:
    """Mean squared response left at pixels whose motion does not exceed ``epsilon``."""
    check_flow(o_t, flow)
    masked = np.where(_static_mask(flow, epsilon)[None], o_t.data.astype(np.float64), 0.0)
    return _mean_square(masked)


def loss_total(
    maps: Sequence[EquirectMap],
    flows: Sequence[FlowField],
    weights: LossWeights | None = None,
) -> LossBreakdown:
    """Weighted loss summed over the steps of one window of at most Z + 1 maps.

    ``flows[i]`` carries map ``i`` to map ``i + 1``.
    """
    weights = weights or LossWeights()
    if not 1 <= len(maps) <= weights.z + 1:
        raise ArgumentError(f"A loss window holds 1 to {weights.z + 1} maps, got {len(maps)}")
    if len(flows) != len(maps) - 1:
        raise ArgumentError(f"{len(maps)} maps need {len(maps) - 1} flows, got {len(flows)}")
    breakdown = LossBreakdown()
    for t in range(1, len(maps)):
        recons = loss_recons(maps[t], maps[t - 1], flows[t - 1])
        smooth = loss_smooth(maps[t], maps[t - 1])
        motion = loss_motion(maps[t], flows[t - 1], weights.epsilon)
        total = (
            weights.lambda_recons * recons
            + weights.lambda_smooth * smooth
            + weights.lambda_motion * motion
        )
        step = StepLoss(t=t, recons=recons, smooth=smooth, motion=motion, total=total)
        breakdown += LossBreakdown(
            recons=recons, smooth=smooth, motion=motion, total=total, steps=[step]
        )
    LOG.debug("Temporal loss over %d steps: %.6g", len(maps) - 1, breakdown.total)
    return breakdown


def loss_grad(
    o_t: EquirectMap,
    o_prev: EquirectMap,
    flow: FlowField,
    weights: LossWeights | None = None,
) -> EquirectMap:
    """Analytic dL_t/dO_t of the weighted per-step loss; O_{t-1} is held fixed."""
    weights = weights or LossWeights()
    _check_pair(o_t, o_prev)
    current = o_t.data.astype(np.float64)
    warped = warp(o_prev, flow).data
    static = _static_mask(flow, weights.epsilon)[None]
    grad = (2.0 / current.size) * (
        weights.lambda_recons * (current - warped)
        + weights.lambda_smooth * (current - o_prev.data)
        + weights.lambda_motion * np.where(static, current, 0.0)
    )
    return EquirectMap(grad.astype(np.float32))
