"""Face adjacency table derived from the face axes.

Every side of every face is swept at evenly spaced edge parameters t in [-1, 1]; the neighbour
is the unique side of another face whose sweep hits the same directions, either in the same
order or reversed.
"""

import logging
from collections.abc import Iterator
from functools import lru_cache

import numpy as np

from cubepad_saliency.core.exceptions import InternalError
from cubepad_saliency.sphere.geometry import face_direction
from cubepad_saliency.sphere.models import FaceId

from .models import AdjacencyEntry, Side

LOG = logging.getLogger(__name__)

SWEEP_SAMPLES = 64
SWEEP_TOLERANCE = 1e-6


def side_coordinates(side: Side, t: float) -> tuple[float, float]:
    """Face coordinates (u, v) of edge parameter t; t runs along increasing column/row."""
    if side is Side.TOP:
        return t, -1.0
    if side is Side.BOTTOM:
        return t, 1.0
    if side is Side.LEFT:
        return -1.0, t
    return 1.0, t


def edge_sweep(face: FaceId, side: Side, samples: int = SWEEP_SAMPLES) -> np.ndarray:
    """Directions along one face edge, shape [samples, 3]."""
    ts = np.linspace(-1.0, 1.0, samples)
    return np.array(
        [face_direction(face, *side_coordinates(side, float(t))).as_array() for t in ts]
    )


class AdjacencyTable:
    """Lookup of the 24 (face, side) edge pairings."""

    def __init__(self, entries: list[AdjacencyEntry]):
        self._entries = {(e.face, e.side): e for e in entries}

    def lookup(self, face: FaceId, side: Side) -> AdjacencyEntry:
        """Neighbour of a face side."""
        return self._entries[(FaceId(face), Side(side))]

    def __iter__(self) -> Iterator[AdjacencyEntry]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)


@lru_cache(maxsize=1)
def build_adjacency() -> AdjacencyTable:
    """Derive the adjacency table; raises InternalError if the face axes are inconsistent."""
    sweeps = {(face, side): edge_sweep(face, side) for face in sorted(FaceId) for side in Side}
    entries = []
    for (face, side), sweep in sweeps.items():
        matches = []
        for (other, other_side), other_sweep in sweeps.items():
            if other is face:
                continue
            if np.allclose(sweep, other_sweep, atol=SWEEP_TOLERANCE, rtol=0.0):
                matches.append((other, other_side, False))
            elif np.allclose(sweep, other_sweep[::-1], atol=SWEEP_TOLERANCE, rtol=0.0):
                matches.append((other, other_side, True))
        if len(matches) != 1:
            raise InternalError(
                f"Edge {face}/{side} matched {len(matches)} neighbour edges",
                detail=str(matches),
            )
        other, other_side, rev = matches[0]
        entries.append(AdjacencyEntry(face, side, other, other_side, rev))
    table = AdjacencyTable(entries)
    LOG.debug("Derived face adjacency with %d entries", len(table))
    return table
