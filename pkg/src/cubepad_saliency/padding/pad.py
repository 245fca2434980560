"""Cube padding and the zero-padding baseline.

A face padded by ``k`` receives, on each side, the ``k`` rows of the neighbouring face nearest
to the shared edge. Pad depth d (d = 0 touching the edge) holds neighbour depth d, and the
position along the edge follows the adjacency orientation.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError, ShapeError
from cubepad_saliency.sphere.geometry import equirect_to_cubemap, render_cube_faces
from cubepad_saliency.tensor.models import CubeMap, EquirectMap, FloatArray, Tensor

from .adjacency import build_adjacency
from .models import CornerPolicy, CropRect, OverlapFaces, PaddedCubeMap, PadMode, Side

LOG = logging.getLogger(__name__)


class PadStrategy(Protocol):
    """Pluggable border fill for a stack of face images."""

    def pad(self, faces: FloatArray, k: int, value: float = 0.0) -> FloatArray:
        """Return ``faces`` [n, c, h, w] padded to [n, c, h + 2k, w + 2k].

        ``value`` fills cells that carry no image content.
        """


def _strip(face: FloatArray, side: Side, k: int) -> FloatArray:
    """The k rows of ``face`` nearest to ``side`` as [c, depth, along]."""
    if side is Side.TOP:
        return face[:, :k, :]
    if side is Side.BOTTOM:
        return face[:, ::-1, :][:, :k, :]
    if side is Side.LEFT:
        return face[:, :, :k].transpose(0, 2, 1)
    return face[:, :, ::-1][:, :, :k].transpose(0, 2, 1)


def _place(padded: FloatArray, side: Side, band: FloatArray, k: int, w: int) -> None:
    """Write a [c, depth, along] band into the pad ring of one [c, w + 2k, w + 2k] face."""
    if side is Side.TOP:
        padded[:, :k, k : k + w] = band[:, ::-1, :]
    elif side is Side.BOTTOM:
        padded[:, k + w :, k : k + w] = band
    elif side is Side.LEFT:
        padded[:, k : k + w, :k] = band[:, ::-1, :].transpose(0, 2, 1)
    else:
        padded[:, k : k + w, k + w :] = band.transpose(0, 2, 1)


def _average_corners(padded: FloatArray, k: int) -> None:
    """Fill each k x k corner with the mean of its two adjacent pad bands, mirrored."""
    for rows in (slice(None), slice(None, None, -1)):
        for cols in (slice(None), slice(None, None, -1)):
            # every corner is handled as the top-left one of a flipped view
            view = padded[..., rows, cols]
            above = view[..., :k, k : 2 * k][..., ::-1]
            beside = view[..., k : 2 * k, :k][..., ::-1, :]
            view[..., :k, :k] = (above + beside) * 0.5


@lru_cache(maxsize=1)
def _pad_plan() -> tuple[tuple[int, Side, int, Side, bool], ...]:
    return tuple(
        (e.face.index, e.side, e.neighbor.index, e.neighbor_side, e.reversed)
        for e in build_adjacency()
    )


@dataclass
class CubePadding(PadStrategy):
    """Fill each face border from its neighbouring cube faces."""

    corner_policy: CornerPolicy = CornerPolicy.AVERAGE

    def pad(self, faces: FloatArray, k: int, value: float = 0.0) -> FloatArray:
        n, c, h, w = faces.shape
        if n != 6 or h != w:
            raise ShapeError(f"Cube padding needs six square faces, got {list(faces.shape)}")
        if k == 0:
            return faces
        if k > w:
            raise ArgumentError(f"Pad width {k} exceeds face width {w}")
        padded = np.full((6, c, w + 2 * k, w + 2 * k), value, dtype=np.float32)
        padded[:, :, k : k + w, k : k + w] = faces
        for face, side, neighbor, neighbor_side, rev in _pad_plan():
            band = _strip(faces[neighbor], neighbor_side, k)
            if rev:
                band = band[:, :, ::-1]
            _place(padded[face], side, band, k, w)
        if self.corner_policy is CornerPolicy.AVERAGE:
            _average_corners(padded, k)
        return padded


@dataclass
class ZeroPadding(PadStrategy):
    """Constant border, each face padded in isolation."""

    def pad(self, faces: FloatArray, k: int, value: float = 0.0) -> FloatArray:
        if k == 0:
            return faces
        n, c, h, w = faces.shape
        padded = np.full((n, c, h + 2 * k, w + 2 * k), value, dtype=np.float32)
        padded[:, :, k : k + h, k : k + w] = faces
        return padded


def get_strategy(
    mode: PadMode, corner_policy: CornerPolicy = CornerPolicy.AVERAGE
) -> PadStrategy:
    """Padding strategy for a pad mode."""
    if PadMode(mode) is PadMode.CUBE:
        return CubePadding(corner_policy=corner_policy)
    return ZeroPadding()


def _check_pad_width(k: int, w: int) -> None:
    if k < 1 or k >= w:
        raise ArgumentError(f"Pad width must satisfy 1 <= k < w, got k={k} w={w}")


def cube_pad(
    cm: CubeMap, k: int, *, corner_policy: CornerPolicy = CornerPolicy.AVERAGE
) -> PaddedCubeMap:
    """Pad every face by ``k`` with content from its neighbours."""
    _check_pad_width(k, cm.face_width)
    padded = CubePadding(corner_policy=corner_policy).pad(cm.data, k)
    return PaddedCubeMap(Tensor(padded), k=k, corner_policy=corner_policy)


def zero_pad(cm: CubeMap, k: int) -> PaddedCubeMap:
    """Pad every face by ``k`` zeros. Any k >= 1 is allowed, faces are padded independently."""
    if k < 1:
        raise ArgumentError(f"Pad width must be at least 1, got k={k}")
    return PaddedCubeMap(Tensor(ZeroPadding().pad(cm.data, k)), k=k, corner_policy=None)


def overlap_face_width(w_base: int, fov: float) -> int:
    """Face width keeping the angular pixel density of a 90° face of ``w_base`` pixels."""
    return math.ceil(w_base * math.tan(fov / 2) / math.tan(math.pi / 4) - 1e-9)


def render_overlap_faces(m: EquirectMap, w_base: int, fov: float) -> OverlapFaces:
    """Render six faces with a field of view of at least 90° on the cube axes.

    The returned crop is the central region of each face covering exactly the 90° face.
    """
    if not math.pi / 2 - 1e-12 <= fov < math.pi:
        raise ArgumentError(f"Overlap field of view must lie in [90°, 180°), got {fov}")
    if w_base < 2:
        raise ArgumentError(f"Face width must be at least 2, got {w_base}")
    width = overlap_face_width(w_base, fov)
    size = min(width, round(width / math.tan(fov / 2)))
    start = (width - size) // 2
    LOG.info("Rendering overlap faces: fov=%.1f° width=%d", math.degrees(fov), width)
    if math.isclose(fov, math.pi / 2, abs_tol=1e-12):
        faces = equirect_to_cubemap(m, width)
    else:
        faces = CubeMap(render_cube_faces(m, width, fov))
    return OverlapFaces(faces=faces, crop=CropRect(top=start, left=start, size=size), fov=fov)
