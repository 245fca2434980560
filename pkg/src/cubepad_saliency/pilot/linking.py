"""Link per-frame candidate scores into a trajectory with bounded angular speed."""

import logging
import math

import numpy as np
import numpy.typing as npt

from cubepad_saliency.core.exceptions import ArgumentError, DataError, InfeasibleError
from cubepad_saliency.sphere.geometry import great_circle

from .models import CandidateGrid, ViewpointTrajectory

LOG = logging.getLogger(__name__)

DEFAULT_D_MAX = math.radians(15.0)


def transition_mask(grid: CandidateGrid, d_max: float) -> npt.NDArray[np.bool_]:
    """[N, N] matrix of candidate pairs at most ``d_max`` apart."""
    dirs = grid.directions()
    return great_circle(dirs[:, None, :], dirs[None, :, :]) <= d_max + 1e-12


def link_trajectory(
    scores: npt.ArrayLike, grid: CandidateGrid, d_max: float = DEFAULT_D_MAX
) -> ViewpointTrajectory:
    """Maximize the summed score subject to consecutive steps of at most ``d_max`` radians.

    Ties resolve to the smallest candidate index.
    """
    table = np.asarray(scores, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] != len(grid):
        raise ArgumentError(f"Scores must be [T >= 1, {len(grid)}], got {list(table.shape)}")
    if not np.isfinite(table).all():
        raise DataError("Candidate scores contain NaN or Inf values")
    if d_max <= 0.0:
        raise InfeasibleError(f"No step fits an angular bound of {d_max} rad")
    feasible = transition_mask(grid, d_max)

    best = table[0].copy()
    backpointers = []
    for t in range(1, table.shape[0]):
        # rows: candidate at t, columns: predecessor at t - 1
        reach = np.where(feasible, best[None, :], -np.inf)
        prev = np.argmax(reach, axis=1)
        best_prev = reach[np.arange(len(grid)), prev]
        if not np.isfinite(best_prev).any():
            raise InfeasibleError(f"No feasible transition into frame {t}")
        best = best_prev + table[t]
        backpointers.append(prev)

    path = [int(np.argmax(best))]
    for prev in reversed(backpointers):
        path.append(int(prev[path[-1]]))
    path.reverse()
    LOG.debug("Linked %d frames, total score %.6g", len(path), float(best.max()))
    return ViewpointTrajectory(
        candidates=tuple(path),
        lons=tuple(grid.centers[c][0] for c in path),
        lats=tuple(grid.centers[c][1] for c in path),
        scores=tuple(float(table[t, c]) for t, c in enumerate(path)),
    )
