"""Ground-truth heatmaps from viewpoints and their binary fixation masks."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError, DegenerateError
from cubepad_saliency.sphere.geometry import equirect_directions, great_circle
from cubepad_saliency.sphere.models import SphericalDirection
from cubepad_saliency.tensor.models import EquirectMap

from .models import FixationMask, Viewpoint

LOG = logging.getLogger(__name__)

DEFAULT_SIGMA_DEG = 5.0
# kernels stop at the rim of a 90° viewport centered on the viewpoint
TRUNCATION_DEG = 45.0


def gt_heatmap(
    viewpoints: Sequence[Viewpoint], p: int, q: int, sigma_deg: float = DEFAULT_SIGMA_DEG
) -> EquirectMap:
    """Sum of truncated great-circle Gaussians, max-normalized to [0, 1]."""
    if not viewpoints:
        raise ArgumentError("Heatmap needs at least one viewpoint")
    if sigma_deg <= 0.0:
        raise ArgumentError(f"Gaussian sigma must be positive, got {sigma_deg}")
    dirs = equirect_directions(p, q)
    heat = np.zeros((q, p), dtype=np.float64)
    for vp in viewpoints:
        center = SphericalDirection.from_angles(vp.lon, vp.lat).as_array()
        dist = np.degrees(great_circle(dirs, center))
        kernel = np.exp(-(dist**2) / (2.0 * sigma_deg**2))
        heat += np.where(dist <= TRUNCATION_DEG, kernel, 0.0)
    peak = heat.max()
    if peak == 0.0:
        raise DegenerateError(f"No pixel center of the {p}x{q} raster lies near any viewpoint")
    LOG.debug("Heatmap from %d viewpoints, sigma %.2f°", len(viewpoints), sigma_deg)
    return EquirectMap((heat / peak)[None].astype(np.float32))


def binarize_gt(heatmap: EquirectMap) -> FixationMask:
    """Mark pixels above mean + 3 std (population std) of the heatmap."""
    values = heatmap.data.astype(np.float64)
    std = float(values.std())
    if std == 0.0 or not math.isfinite(std):
        raise DegenerateError("Cannot binarize a constant heatmap")
    threshold = float(values.mean()) + 3.0 * std
    mask = (values > threshold).astype(np.float32)
    if not mask.any():
        raise DegenerateError(f"No pixel exceeds the fixation threshold {threshold:.4g}")
    return FixationMask(EquirectMap(mask))
