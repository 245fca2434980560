"""Bit-exact tensor files and image import/export.

CPT1 layout, all little-endian::

    b"CPT1" | u32 ndim | u32 dims[ndim] | f32 data[prod(dims)]

PNG files are 8-bit grayscale or RGB and map linearly to [0, 1]. PFM files keep float32
values exactly and are written with scale -1.0 (little-endian).
"""

import logging
import re
from pathlib import Path

import numpy as np
from PIL import Image

from cubepad_saliency.core.exceptions import DataError, FormatError, IoError, ShapeError
from cubepad_saliency.types.common import StrPath

from .models import EquirectMap, FloatArray, Tensor

LOG = logging.getLogger(__name__)

MAGIC = b"CPT1"
_U32 = np.dtype("<u4")
_F32 = np.dtype("<f4")

_PFM_HEADER = re.compile(rb"^(PF|Pf)\s+(\d+)\s+(\d+)\s+([-+0-9.eE]+)\s")

# (position, r, g, b) stops of a jet-like ramp for grayscale saliency.
_COLORMAP_STOPS = np.array(
    [
        [0.0, 0.0, 0.0, 0.5],
        [0.125, 0.0, 0.0, 1.0],
        [0.375, 0.0, 1.0, 1.0],
        [0.625, 1.0, 1.0, 0.0],
        [0.875, 1.0, 0.0, 0.0],
        [1.0, 0.5, 0.0, 0.0],
    ]
)


def _read_bytes(path: StrPath) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"Could not read {path}", detail=str(exc)) from exc


def _write_bytes(path: StrPath, payload: bytes) -> None:
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise IoError(f"Could not write {path}", detail=str(exc)) from exc


# ----------------------------
# CPT1 tensors
# ----------------------------


def encode_tensor(tensor: Tensor) -> bytes:
    """Serialize a tensor to CPT1 bytes."""
    dims = np.asarray(tensor.data.shape, dtype=_U32)
    header = MAGIC + np.array([dims.size], dtype=_U32).tobytes() + dims.tobytes()
    return header + tensor.data.astype(_F32, copy=False).tobytes()


def decode_tensor(buf: bytes, *, source: str = "<bytes>") -> Tensor:
    """Parse CPT1 bytes, rejecting truncated or trailing data."""
    if len(buf) < 8 or buf[:4] != MAGIC:
        raise FormatError(f"{source}: missing CPT1 magic")
    ndim = int(np.frombuffer(buf, dtype=_U32, count=1, offset=4)[0])
    header_len = 8 + 4 * ndim
    if ndim == 0 or len(buf) < header_len:
        raise FormatError(f"{source}: bad dimension header (ndim={ndim})")
    dims = np.frombuffer(buf, dtype=_U32, count=ndim, offset=8).astype(np.int64)
    if (dims == 0).any():
        raise FormatError(f"{source}: zero-sized dimension in {dims.tolist()}")
    count = int(np.prod(dims))
    expected = header_len + 4 * count
    if len(buf) != expected:
        raise FormatError(
            f"{source}: payload is {len(buf) - header_len} bytes, dims {dims.tolist()} "
            f"need {4 * count}"
        )
    data = np.frombuffer(buf, dtype=_F32, count=count, offset=header_len)
    data = data.astype(np.float32).reshape(tuple(int(d) for d in dims))
    if not np.isfinite(data).all():
        raise DataError(f"{source}: tensor contains NaN or Inf values")
    return Tensor(data)


def tensor_read(path: StrPath) -> Tensor:
    """Read a CPT1 tensor file."""
    tensor = decode_tensor(_read_bytes(path), source=str(path))
    LOG.debug("Read tensor %s dims=%s", path, tensor.dims)
    return tensor


def tensor_write(tensor: Tensor, path: StrPath) -> None:
    """Write a tensor as CPT1; reading it back is bitwise identical."""
    _write_bytes(path, encode_tensor(tensor))
    LOG.debug("Wrote tensor %s dims=%s", path, tensor.dims)


# ----------------------------
# PFM
# ----------------------------


def read_pfm(path: StrPath) -> FloatArray:
    """Read a PFM file into a [c, h, w] float32 array."""
    buf = _read_bytes(path)
    match = _PFM_HEADER.match(buf)
    if match is None:
        raise FormatError(f"{path}: not a PFM file")
    channels = 3 if match.group(1) == b"PF" else 1
    width, height = int(match.group(2)), int(match.group(3))
    scale = float(match.group(4))
    dtype = np.dtype("<f4") if scale < 0 else np.dtype(">f4")
    count = width * height * channels
    offset = match.end()
    if len(buf) - offset != 4 * count:
        raise FormatError(f"{path}: PFM payload does not match {width}x{height}x{channels}")
    data = np.frombuffer(buf, dtype=dtype, count=count, offset=offset).astype(np.float32)
    # rows are stored bottom to top
    data = data.reshape(height, width, channels)[::-1].transpose(2, 0, 1)
    return np.ascontiguousarray(data)


def write_pfm(data: FloatArray, path: StrPath) -> None:
    """Write a [c, h, w] array (c in {1, 3}) as little-endian PFM."""
    channels, height, width = data.shape
    if channels not in (1, 3):
        raise FormatError(f"PFM stores 1 or 3 channels, got {channels}")
    tag = "PF" if channels == 3 else "Pf"
    header = f"{tag}\n{width} {height}\n-1.0\n".encode("ascii")
    body = np.ascontiguousarray(data.transpose(1, 2, 0)[::-1]).astype(_F32).tobytes()
    _write_bytes(path, header + body)


# ----------------------------
# PNG and dispatch
# ----------------------------


def apply_colormap(gray: FloatArray) -> FloatArray:
    """Map a [1, h, w] map in [0, 1] to a [3, h, w] jet-like RGB image."""
    values = np.clip(gray[0], 0.0, 1.0)
    rgb = [np.interp(values, _COLORMAP_STOPS[:, 0], _COLORMAP_STOPS[:, ch]) for ch in (1, 2, 3)]
    return np.stack(rgb).astype(np.float32)


def _read_png(path: StrPath) -> FloatArray:
    try:
        with Image.open(path) as img:
            img.load()
            mode = img.mode
            if mode == "P":
                img = img.convert("RGB")
                mode = "RGB"
            if mode not in ("L", "RGB"):
                raise FormatError(f"{path}: unsupported PNG mode {mode!r}; need 8-bit L or RGB")
            pixels = np.asarray(img, dtype=np.uint8)
    except FormatError:
        raise
    except OSError as exc:
        raise IoError(f"Could not read {path}", detail=str(exc)) from exc
    if pixels.ndim == 2:
        pixels = pixels[None]
    else:
        pixels = pixels.transpose(2, 0, 1)
    return pixels.astype(np.float32) / np.float32(255.0)


def _write_png(data: FloatArray, path: StrPath, *, colormap: bool) -> None:
    if colormap:
        if data.shape[0] != 1:
            raise ShapeError("Colormap export needs a single-channel map")
        data = apply_colormap(data)
    if data.shape[0] not in (1, 3):
        raise FormatError(f"PNG export supports 1 or 3 channels, got {data.shape[0]}")
    if data.min(initial=0.0) < 0.0 or data.max(initial=0.0) > 1.0:
        LOG.warning("Values outside [0, 1] clipped on PNG export", extra={"path": str(path)})
    pixels = np.rint(np.clip(data, 0.0, 1.0) * 255.0).astype(np.uint8)
    img = Image.fromarray(pixels[0] if pixels.shape[0] == 1 else pixels.transpose(1, 2, 0))
    try:
        img.save(path, format="PNG")
    except OSError as exc:
        raise IoError(f"Could not write {path}", detail=str(exc)) from exc


def image_import(path: StrPath) -> EquirectMap:
    """Load a PNG, PFM or CPT1 file as an equirectangular map."""
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        data = _read_png(path)
    elif suffix == ".pfm":
        data = read_pfm(path)
    elif suffix == ".cpt":
        data = tensor_read(path).data
    else:
        raise FormatError(f"{path}: unsupported image type {suffix!r}")
    emap = EquirectMap(data)
    LOG.debug("Imported %s as c=%d q=%d p=%d", path, emap.channels, emap.height, emap.width)
    return emap


def image_export(image: Tensor, path: StrPath, *, colormap: bool = False) -> None:
    """Write an equirect map or a single [c, h, w] face as PNG, PFM or CPT1.

    ``colormap`` renders single-channel saliency with a jet-like ramp (PNG only).
    """
    if image.data.ndim != 3:
        raise ShapeError(f"Image export needs dims [c, h, w], got {image.dims}")
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        _write_png(image.data, path, colormap=colormap)
    elif suffix == ".pfm":
        write_pfm(image.data, path)
    elif suffix == ".cpt":
        tensor_write(image, path)
    else:
        raise FormatError(f"{path}: unsupported image type {suffix!r}")
