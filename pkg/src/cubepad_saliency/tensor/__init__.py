"""Dense float tensors, cubemap/equirect wrappers and file I/O."""

from .io import image_export, image_import, read_pfm, tensor_read, tensor_write, write_pfm
from .models import FACE_ORDER, CubeMap, EquirectMap, FloatArray, Tensor

__all__ = [
    "FACE_ORDER",
    "CubeMap",
    "EquirectMap",
    "FloatArray",
    "Tensor",
    "image_export",
    "image_import",
    "read_pfm",
    "tensor_read",
    "tensor_write",
    "write_pfm",
]
