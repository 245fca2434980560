"""Forward-pass CNN primitives over face stacks.

The ``*_faces`` functions work on raw [n, c, h, w] arrays (n = 6 for cubemaps, n = 1 for an
equirectangular raster) with an explicit padding strategy; the public wrappers take
``CubeMap`` values and pick the strategy from the layer.
"""

import logging
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from cubepad_saliency.core.exceptions import ArgumentError, ShapeError
from cubepad_saliency.padding.models import PadMode
from cubepad_saliency.padding.pad import PadStrategy, get_strategy
from cubepad_saliency.sphere.sampling import resize_matrix
from cubepad_saliency.tensor.models import CubeMap, FloatArray, Tensor

from .models import Activation, ConvLayer, MaxPoolLayer

LOG = logging.getLogger(__name__)


def conv_faces(
    x: FloatArray,
    kernel: FloatArray,
    bias: FloatArray | None,
    stride: int,
    strategy: PadStrategy,
) -> FloatArray:
    """Pad then cross-correlate every face with the shared kernel [c_out, c_in, k, k]."""
    c_out, c_in, kh, kw = kernel.shape
    if x.shape[1] != c_in:
        raise ShapeError(f"Convolution expects {c_in} input channels, got {x.shape[1]}")
    padded = strategy.pad(x, (kh - 1) // 2)
    windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
    out = np.tensordot(windows, kernel, axes=([1, 4, 5], [1, 2, 3]))  # [n, h', w', c_out]
    out = np.ascontiguousarray(out.transpose(0, 3, 1, 2), dtype=np.float32)
    if bias is not None:
        out += bias.reshape(1, c_out, 1, 1)
    return out


def maxpool_faces(
    x: FloatArray, kernel: int, stride: int, pad: int, strategy: PadStrategy
) -> FloatArray:
    """Windowed max after padding; zero padding fills 0.0."""
    padded = strategy.pad(x, pad, value=0.0)
    if kernel > padded.shape[-1] or kernel > padded.shape[-2]:
        raise ArgumentError(f"Pool kernel {kernel} exceeds padded size {list(padded.shape[2:])}")
    windows = sliding_window_view(padded, (kernel, kernel), axis=(2, 3))[:, :, ::stride, ::stride]
    return np.ascontiguousarray(windows.max(axis=(-2, -1)))


def resize_faces(x: FloatArray, height: int, width: int) -> FloatArray:
    """Half-pixel (align-corners-false) bilinear resize of [..., h, w], clamped at the borders."""
    *lead, h, w = x.shape
    if (h, w) == (height, width):
        return x
    n = math.prod(lead)
    cols = x.reshape(n, h, w).transpose(1, 0, 2).reshape(h, n * w).astype(np.float64)
    rows = (resize_matrix(height, h) @ cols).reshape(height, n, w).transpose(1, 0, 2)
    out = resize_matrix(width, w) @ rows.reshape(n * height, w).T
    return out.T.reshape(*lead, height, width).astype(np.float32)


def head_faces(x: FloatArray, head: FloatArray) -> FloatArray:
    """Per-pixel linear map c -> K by the [K, c, 1, 1] head weight."""
    if x.shape[1] != head.shape[1]:
        raise ShapeError(f"Head expects {head.shape[1]} channels, got {x.shape[1]}")
    out = np.tensordot(x, head[:, :, 0, 0], axes=([1], [1]))  # [n, h, w, K]
    return np.ascontiguousarray(out.transpose(0, 3, 1, 2), dtype=np.float32)


def relu(x: FloatArray) -> FloatArray:
    return np.maximum(x, np.float32(0.0))


def apply_conv(x: FloatArray, layer: ConvLayer, strategy: PadStrategy) -> FloatArray:
    out = conv_faces(x, layer.kernel, layer.bias, layer.stride, strategy)
    return relu(out) if layer.activation is Activation.RELU else out


# ----------------------------
# CubeMap operations
# ----------------------------


def conv2d(x: CubeMap, layer: ConvLayer) -> CubeMap:
    """Convolve every face with the layer's shared weights after padding per ``layer.pad_mode``."""
    return CubeMap(apply_conv(x.data, layer, get_strategy(layer.pad_mode)))


def maxpool(
    x: CubeMap,
    kernel: int,
    stride: int,
    pad_mode: PadMode = PadMode.CUBE,
    pad: int | None = None,
) -> CubeMap:
    """Per-face windowed max; ``pad`` defaults to (kernel - 1) // 2."""
    layer = MaxPoolLayer(kernel=kernel, stride=stride, pad_mode=pad_mode, pad=pad)
    out = maxpool_faces(x.data, kernel, stride, layer.pad_width, get_strategy(pad_mode))
    return CubeMap(out)


def upsample_bilinear(x: Tensor, factor: int) -> Tensor:
    """Upsample the last two dims by an integer factor; returns the input's own type."""
    if factor < 1:
        raise ArgumentError(f"Upsample factor must be a positive integer, got {factor}")
    if x.data.ndim < 2:
        raise ShapeError(f"Upsampling needs at least 2 dims, got {x.dims}")
    h, w = x.data.shape[-2:]
    return type(x)(resize_faces(x.data, h * factor, w * factor))


def saliency_head(m_l: CubeMap, w_fc: FloatArray) -> CubeMap:
    """M_S = m_l * W_fc as a 1x1 convolution."""
    w_fc = np.asarray(w_fc, dtype=np.float32)
    if w_fc.ndim != 4 or w_fc.shape[2:] != (1, 1):
        raise ShapeError(f"Head weight must be [K, c, 1, 1], got {list(w_fc.shape)}")
    return CubeMap(head_faces(m_l.data, w_fc))


def channel_max(m_s: CubeMap) -> CubeMap:
    """Per-pixel maximum over the class channels, dims [6, 1, w, w]."""
    return CubeMap(m_s.data.max(axis=1, keepdims=True))
