"""Data models for face adjacency and padded cubemaps."""

from dataclasses import dataclass
from enum import StrEnum

from cubepad_saliency.sphere.models import FaceId
from cubepad_saliency.tensor.models import CubeMap, Tensor


class Side(StrEnum):
    """Sides of a face image."""

    TOP = "top"
    BOTTOM = "bottom"
    LEFT = "left"
    RIGHT = "right"


class PadMode(StrEnum):
    """Border fill used by convolution and pooling layers."""

    CUBE = "cube"
    ZERO = "zero"


class CornerPolicy(StrEnum):
    """How the k x k corner blocks of a cube-padded face are filled."""

    AVERAGE = "average"
    ZERO = "zero"


@dataclass(frozen=True)
class AdjacencyEntry:
    """One face side and the neighbouring face side it shares an edge with."""

    face: FaceId
    side: Side
    neighbor: FaceId
    neighbor_side: Side
    # the shared edge is traversed in opposite directions by the two faces
    reversed: bool


@dataclass(frozen=True)
class PaddedCubeMap:
    """Cubemap with a pad ring of width k, dims [6, c, w + 2k, w + 2k]."""

    tensor: Tensor
    k: int
    corner_policy: CornerPolicy | None

    @property
    def face_width(self) -> int:
        return self.tensor.dims[-1] - 2 * self.k

    def interior(self) -> CubeMap:
        """Crop the pad ring away."""
        k, w = self.k, self.face_width
        return CubeMap(self.tensor.data[:, :, k : k + w, k : k + w])


@dataclass(frozen=True)
class CropRect:
    """Square pixel region of a rendered face."""

    top: int
    left: int
    size: int

    def scaled(self, src_width: int, dst_width: int) -> "CropRect":
        """The same region on a face resized from ``src_width`` to ``dst_width`` pixels."""
        ratio = dst_width / src_width
        size = max(1, round(self.size * ratio))
        top = min(max(0, round(self.top * ratio)), dst_width - size)
        left = min(max(0, round(self.left * ratio)), dst_width - size)
        return CropRect(top=top, left=left, size=size)


@dataclass(frozen=True)
class OverlapFaces:
    """Six enlarged-FoV faces plus the region covering the central 90°."""

    faces: CubeMap
    crop: CropRect
    fov: float
