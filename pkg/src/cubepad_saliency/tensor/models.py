"""Dense float tensors and the equirectangular / cubemap wrappers."""

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from cubepad_saliency.core.exceptions import DataError, ShapeError

FloatArray = npt.NDArray[np.float32]

# Face order of every cubemap stack: Back, Down, Front, Left, Right, Top.
FACE_ORDER: tuple[str, ...] = ("B", "D", "F", "L", "R", "T")


@dataclass(frozen=True, eq=False)
class Tensor:
    """Immutable row-major float32 tensor.

    The wrapped array is made read-only on construction. Equality is bitwise.
    """

    data: FloatArray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        if arr.ndim < 1 or any(dim < 1 for dim in arr.shape):
            raise ShapeError(f"Tensor dims must be positive, got {list(arr.shape)}")
        if not np.isfinite(arr).all():
            raise DataError("Tensor contains NaN or Inf values")
        if arr.flags.writeable:
            arr = arr.view()
            arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def dims(self) -> list[int]:
        """Tensor dimensions, outermost first."""
        return list(self.data.shape)

    @property
    def size(self) -> int:
        return int(self.data.size)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Tensor) or self.data.shape != other.data.shape:
            return False
        return bool(np.array_equal(self.data.view(np.uint32), other.data.view(np.uint32)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dims={self.dims})"


class EquirectMap(Tensor):
    """Spherical raster of dims [c, q, p]; columns 0 and p - 1 are neighbours."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.data.ndim != 3:
            raise ShapeError(f"EquirectMap needs dims [c, q, p], got {self.dims}")
        if self.width < 2:
            raise ShapeError(f"EquirectMap width must be at least 2, got {self.width}")

    @property
    def channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def height(self) -> int:
        return int(self.data.shape[1])

    @property
    def width(self) -> int:
        return int(self.data.shape[2])

    @property
    def is_canonical(self) -> bool:
        """Full-sphere layout with p = 2q."""
        return self.width == 2 * self.height


class CubeMap(Tensor):
    """Stack of six square faces, dims [6, c, w, w], in ``FACE_ORDER``."""

    def __post_init__(self) -> None:
        super().__post_init__()
        shape = self.data.shape
        if self.data.ndim != 4 or shape[0] != len(FACE_ORDER) or shape[2] != shape[3]:
            raise ShapeError(f"CubeMap needs dims [6, c, w, w], got {self.dims}")

    @property
    def channels(self) -> int:
        return int(self.data.shape[1])

    @property
    def face_width(self) -> int:
        return int(self.data.shape[2])

    def face(self, name: str) -> FloatArray:
        """Return one face as a read-only [c, w, w] view."""
        return self.data[FACE_ORDER.index(name)]
