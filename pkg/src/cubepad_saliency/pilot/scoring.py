"""Score candidate viewing angles on saliency maps."""

import logging
import math
from collections.abc import Sequence
from functools import lru_cache

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError
from cubepad_saliency.sphere.geometry import pixel_centers, render_nfov
from cubepad_saliency.sphere.models import NFoVSpec
from cubepad_saliency.tensor.models import EquirectMap

from .models import CandidateGrid

LOG = logging.getLogger(__name__)

WINDOW_SIZE = 64


@lru_cache(maxsize=8)
def window_weights(resolution: int, fov: float) -> np.ndarray:
    """Normalized [resolution, resolution] weights of a square gnomonic window.

    A pixel at tangent-plane offset (u, v) covers a solid angle proportional to
    (1 + u^2 + v^2)^-3/2 and sits at cos = (1 + u^2 + v^2)^-1/2 from the view axis. Weighting
    by both makes the score a spherical mean that prefers content near the window center, so
    a blob seen whole by several windows goes to the one centered closest to it.
    """
    half = pixel_centers(resolution) * math.tan(fov / 2)
    radius2 = 1.0 + half[None, :] ** 2 + half[:, None] ** 2
    weights = radius2**-2.0
    weights /= weights.sum()
    weights.flags.writeable = False
    return weights


def score_viewangles(
    sal: EquirectMap,
    grid: CandidateGrid,
    *,
    channel: int = 0,
    resolution: int = WINDOW_SIZE,
) -> np.ndarray:
    """Weighted mean saliency inside each candidate's NFoV, sampled on a fixed square window.

    ``channel`` selects a class map when ``sal`` carries one map per class.
    """
    if not 0 <= channel < sal.channels:
        raise ArgumentError(f"Channel {channel} outside [0, {sal.channels})")
    plane = EquirectMap(sal.data[channel : channel + 1])
    weights = window_weights(resolution, grid.fov)
    scores = np.empty(len(grid), dtype=np.float64)
    for idx, (lon, lat) in enumerate(grid.centers):
        spec = NFoVSpec(
            lon=lon, lat=lat, fov_x=grid.fov, fov_y=grid.fov, width=resolution, height=resolution
        )
        scores[idx] = np.sum(render_nfov(plane, spec).data[0] * weights)
    return scores


def score_sequence(
    maps: Sequence[EquirectMap], grid: CandidateGrid, *, channel: int = 0
) -> np.ndarray:
    """Candidate scores of every frame, shape [T, N]."""
    LOG.info("Scoring %d frames over %d candidates", len(maps), len(grid))
    return np.stack([score_viewangles(m, grid, channel=channel) for m in maps])
