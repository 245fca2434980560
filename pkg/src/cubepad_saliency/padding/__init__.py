"""Cube padding: face adjacency, padded cubemaps and overlapping faces."""

from .adjacency import AdjacencyTable, build_adjacency
from .models import (
    AdjacencyEntry,
    CornerPolicy,
    CropRect,
    OverlapFaces,
    PaddedCubeMap,
    PadMode,
    Side,
)
from .pad import (
    CubePadding,
    PadStrategy,
    ZeroPadding,
    cube_pad,
    get_strategy,
    overlap_face_width,
    render_overlap_faces,
    zero_pad,
)

__all__ = [
    "AdjacencyEntry",
    "AdjacencyTable",
    "CornerPolicy",
    "CropRect",
    "CubePadding",
    "OverlapFaces",
    "PadMode",
    "PadStrategy",
    "PaddedCubeMap",
    "Side",
    "ZeroPadding",
    "build_adjacency",
    "cube_pad",
    "get_strategy",
    "overlap_face_width",
    "render_overlap_faces",
    "zero_pad",
]
