"""Bilinear samplers shared by projections, NFoV rendering, resizing and flow warping.

A sampler is described by its taps: four flat source indices and four float64 weights per
output pixel. One-off samples gather the taps directly; fixed geometries (projections between
rasters of known size) turn them into a cached sparse operator. Either way the weighted sum is
taken in float64 and rounded to float32 once, so constant inputs stay exactly constant and
integer sample positions reproduce the source bitwise.
"""

from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy import sparse

from cubepad_saliency.tensor.models import FloatArray

Coords = npt.NDArray[np.float64]
Indices = npt.NDArray[np.intp]
Taps = tuple[Indices, Coords]


def _split(coord: Coords) -> tuple[Indices, Coords]:
    lower = np.floor(coord)
    return lower.astype(np.intp), coord - lower


def _bilinear_weights(fx: Coords, fy: Coords) -> Coords:
    gx = 1.0 - fx
    gy = 1.0 - fy
    return np.stack([gx * gy, fx * gy, gx * fy, fx * fy])


def equirect_taps(xs: Coords, ys: Coords, height: int, width: int) -> Taps:
    """Taps into a q x p raster; columns wrap modulo p, rows clamp at the poles."""
    x0, fx = _split(np.asarray(xs, dtype=np.float64))
    y0, fy = _split(np.asarray(ys, dtype=np.float64))
    x1 = (x0 + 1) % width
    x0 = x0 % width
    y1 = np.clip(y0 + 1, 0, height - 1)
    y0 = np.clip(y0, 0, height - 1)
    index = np.stack([y0 * width + x0, y0 * width + x1, y1 * width + x0, y1 * width + x1])
    return index, _bilinear_weights(fx, fy)


def face_taps(face_idx: Indices, xs: Coords, ys: Coords, width: int) -> Taps:
    """Taps into a [6, w, w] face stack, clamping inside each face."""
    xs = np.clip(np.asarray(xs, dtype=np.float64), 0.0, width - 1)
    ys = np.clip(np.asarray(ys, dtype=np.float64), 0.0, width - 1)
    x0, fx = _split(xs)
    y0, fy = _split(ys)
    x1 = np.minimum(x0 + 1, width - 1)
    y1 = np.minimum(y0 + 1, width - 1)
    base = face_idx * width * width
    row0 = base + y0 * width
    row1 = base + y1 * width
    index = np.stack([row0 + x0, row0 + x1, row1 + x0, row1 + x1])
    return index, _bilinear_weights(fx, fy)


def gather(planes: FloatArray, taps: Taps) -> FloatArray:
    """Apply taps to [c, n_in] planes; returns [c, *tap shape]."""
    index, weights = taps
    out = np.zeros((planes.shape[0], *index.shape[1:]), dtype=np.float64)
    for corner in range(4):
        out += planes[:, index[corner]] * weights[corner]
    return out.astype(np.float32)


def sparse_operator(taps: Taps, n_in: int) -> sparse.csr_matrix:
    """Taps as an [n_out, n_in] float64 matrix; duplicate taps add up."""
    index, weights = taps
    n_out = index[0].size
    rows = np.broadcast_to(np.arange(n_out), (4, n_out)).ravel()
    return sparse.csr_matrix(
        (weights.reshape(4, -1).ravel(), (rows, index.reshape(4, -1).ravel())),
        shape=(n_out, n_in),
    )


def apply_operator(op: sparse.csr_matrix, planes: FloatArray) -> FloatArray:
    """[c, n_in] planes through an [n_out, n_in] operator; returns float32 [c, n_out]."""
    out = op @ planes.T.astype(np.float64)
    return np.ascontiguousarray(np.asarray(out).T, dtype=np.float32)


def sample_equirect(data: FloatArray, xs: Coords, ys: Coords) -> FloatArray:
    """Sample a [c, q, p] raster at continuous pixel coordinates. Returns [c, *xs.shape]."""
    c, height, width = data.shape
    return gather(data.reshape(c, -1), equirect_taps(xs, ys, height, width))


@lru_cache(maxsize=64)
def resize_matrix(n_out: int, n_in: int) -> sparse.csr_matrix:
    """Half-pixel linear interpolation as an [n_out, n_in] operator, clamped at both ends."""
    coords = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    coords = np.clip(coords, 0.0, n_in - 1)
    lower, frac = _split(coords)
    upper = np.minimum(lower + 1, n_in - 1)
    rows = np.tile(np.arange(n_out), 2)
    return sparse.csr_matrix(
        (np.concatenate([1.0 - frac, frac]), (rows, np.concatenate([lower, upper]))),
        shape=(n_out, n_in),
    )
