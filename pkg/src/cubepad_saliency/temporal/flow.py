"""Flow warping, synthetic flow fields and the motion-magnitude baseline."""

import logging

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError, ShapeError
from cubepad_saliency.sphere.sampling import sample_equirect
from cubepad_saliency.tensor.models import EquirectMap

from .models import FlowField

LOG = logging.getLogger(__name__)


def check_flow(m: EquirectMap, flow: FlowField) -> None:
    if m.dims[1:] != flow.dims[1:]:
        raise ShapeError(f"Flow {flow.dims} does not match map {m.dims}")


def warp(prev: EquirectMap, flow: FlowField) -> EquirectMap:
    """Sample ``prev`` at (x + dx, y + dy); columns wrap, rows clamp."""
    check_flow(prev, flow)
    ys, xs = np.indices((prev.height, prev.width), dtype=np.float64)
    return EquirectMap(sample_equirect(prev.data, xs + flow.data[0], ys + flow.data[1]))


def flow_magnitude(flow: FlowField) -> np.ndarray:
    """Per-pixel |m| = sqrt(dx^2 + dy^2) in float64, dims [q, p]."""
    dx = flow.data[0].astype(np.float64)
    dy = flow.data[1].astype(np.float64)
    return np.hypot(dx, dy)


def motion_magnitude_saliency(flow: FlowField) -> EquirectMap:
    """Min-max normalized flow magnitude as a [1, q, p] saliency map."""
    mag = flow_magnitude(flow)
    span = mag.max() - mag.min()
    if span == 0.0:
        return EquirectMap(np.zeros((1, *mag.shape), dtype=np.float32))
    return EquirectMap(((mag - mag.min()) / span)[None].astype(np.float32))


# ----------------------------
# Synthetic flows
# ----------------------------


def constant_flow(p: int, q: int, dx: float, dy: float) -> FlowField:
    """Same displacement at every pixel."""
    data = np.empty((2, q, p), dtype=np.float32)
    data[0] = dx
    data[1] = dy
    return FlowField(data)


def rotation_flow(p: int, q: int, degrees_per_frame: float) -> FlowField:
    """Flow of a camera panning about the vertical axis: a horizontal shift at every latitude."""
    return constant_flow(p, q, degrees_per_frame / 360.0 * p, 0.0)


def blob_flow(
    p: int,
    q: int,
    center: tuple[float, float],
    radius: float,
    displacement: tuple[float, float],
) -> FlowField:
    """A disc of pixels around ``center`` (x, y) moving by ``displacement``; zero elsewhere.

    Horizontal distance to the center wraps around the raster seam.
    """
    if radius <= 0.0:
        raise ArgumentError(f"Blob radius must be positive, got {radius}")
    ys, xs = np.indices((q, p), dtype=np.float64)
    ddx = np.abs(xs - center[0])
    ddx = np.minimum(ddx, p - ddx)
    inside = np.hypot(ddx, ys - center[1]) <= radius
    data = np.zeros((2, q, p), dtype=np.float32)
    data[0][inside] = displacement[0]
    data[1][inside] = displacement[1]
    LOG.debug("Blob flow covers %d pixels", int(inside.sum()))
    return FlowField(data)
