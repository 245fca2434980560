"""Equirectangular <-> cubemap projections, NFoV rendering and sphere rotation.

World frame: x forward, y right of front, z up. Longitude grows from the front towards the
right face, latitude towards the top face. A face pixel at row r and column s sits at
u = (2s + 1) / w - 1 and v = (2r + 1) / w - 1.
"""

import logging
import math
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.spatial.transform import Rotation

from cubepad_saliency.core.exceptions import ArgumentError
from cubepad_saliency.tensor.models import CubeMap, EquirectMap, FloatArray, Tensor

from .models import FaceAxes, FaceId, NFoVSpec, SphericalDirection
from .sampling import (
    apply_operator,
    equirect_taps,
    face_taps,
    sample_equirect,
    sparse_operator,
)

LOG = logging.getLogger(__name__)

Vectors = npt.NDArray[np.float64]

FACE_AXES: dict[FaceId, FaceAxes] = {
    FaceId.F: FaceAxes(normal=(1, 0, 0), u_axis=(0, 1, 0), v_axis=(0, 0, -1)),
    FaceId.R: FaceAxes(normal=(0, 1, 0), u_axis=(-1, 0, 0), v_axis=(0, 0, -1)),
    FaceId.B: FaceAxes(normal=(-1, 0, 0), u_axis=(0, -1, 0), v_axis=(0, 0, -1)),
    FaceId.L: FaceAxes(normal=(0, -1, 0), u_axis=(1, 0, 0), v_axis=(0, 0, -1)),
    FaceId.T: FaceAxes(normal=(0, 0, 1), u_axis=(0, 1, 0), v_axis=(1, 0, 0)),
    FaceId.D: FaceAxes(normal=(0, 0, -1), u_axis=(0, 1, 0), v_axis=(-1, 0, 0)),
}

# stack order B, D, F, L, R, T
_FACES = sorted(FaceId)
_NORMALS = np.array([FACE_AXES[f].normal for f in _FACES], dtype=np.float64)
_U_AXES = np.array([FACE_AXES[f].u_axis for f in _FACES], dtype=np.float64)
_V_AXES = np.array([FACE_AXES[f].v_axis for f in _FACES], dtype=np.float64)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def pixel_centers(n: int) -> Vectors:
    """Half-integer pixel centers of an n-pixel span mapped to [-1, 1]."""
    return (2.0 * np.arange(n, dtype=np.float64) + 1.0) / n - 1.0


def angles_to_directions(lon: npt.ArrayLike, lat: npt.ArrayLike) -> Vectors:
    """Unit vectors for longitude/latitude arrays (radians), shape [..., 3]."""
    lon, lat = np.broadcast_arrays(
        np.asarray(lon, dtype=np.float64), np.asarray(lat, dtype=np.float64)
    )
    cos_lat = np.cos(lat)
    return np.stack([cos_lat * np.cos(lon), cos_lat * np.sin(lon), np.sin(lat)], axis=-1)


def directions_to_angles(dirs: Vectors) -> tuple[Vectors, Vectors]:
    """Longitude in [-pi, pi] and latitude in [-pi/2, pi/2] of [..., 3] directions."""
    lon = np.arctan2(dirs[..., 1], dirs[..., 0])
    lat = np.arcsin(np.clip(dirs[..., 2], -1.0, 1.0))
    return lon, lat


def great_circle(a: Vectors, b: Vectors) -> Vectors:
    """Angle in radians between direction arrays, stable for tiny and near-antipodal angles."""
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    return np.arctan2(cross, dot)


def _gnomonic(
    forward: Vectors, right: Vectors, down: Vectors, us: Vectors, vs: Vectors
) -> Vectors:
    """Normalized forward + u * right + v * down on the [len(vs), len(us)] grid."""
    dirs = (
        forward[None, None, :]
        + us[None, :, None] * right[None, None, :]
        + vs[:, None, None] * down[None, None, :]
    )
    return dirs / np.linalg.norm(dirs, axis=-1, keepdims=True)


# ----------------------------
# Direction <-> pixel
# ----------------------------


def face_direction(face: FaceId, u: float, v: float) -> SphericalDirection:
    """Direction through face coordinates (u, v) in [-1, 1]^2."""
    if not (-1.0 <= u <= 1.0 and -1.0 <= v <= 1.0):
        raise ArgumentError(f"Face coordinates ({u}, {v}) outside [-1, 1]")
    axes = FACE_AXES[FaceId(face)]
    vec = np.add(np.add(axes.normal, np.multiply(u, axes.u_axis)), np.multiply(v, axes.v_axis))
    return SphericalDirection.from_vector(vec)


def directions_to_equirect(dirs: Vectors, p: int, q: int) -> tuple[Vectors, Vectors]:
    """Continuous pixel coordinates (x, y) of [..., 3] directions on a p x q raster."""
    lon, lat = directions_to_angles(dirs)
    xs = (lon / (2.0 * math.pi) + 0.5) * p - 0.5
    ys = (0.5 - lat / math.pi) * q - 0.5
    return xs, ys


def dir_to_equirect(d: SphericalDirection, p: int, q: int) -> tuple[float, float]:
    """Continuous pixel coordinate of a direction; x lies in [-0.5, p - 0.5] and wraps."""
    xs, ys = directions_to_equirect(d.as_array(), p, q)
    return float(xs), float(ys)


@lru_cache(maxsize=32)
def equirect_directions(p: int, q: int) -> Vectors:
    """Directions of all pixel centers of a p x q raster, shape [q, p, 3]."""
    lon = ((np.arange(p, dtype=np.float64) + 0.5) / p - 0.5) * 2.0 * math.pi
    lat = (0.5 - (np.arange(q, dtype=np.float64) + 0.5) / q) * math.pi
    return _readonly(angles_to_directions(lon[None, :], lat[:, None]))


@lru_cache(maxsize=32)
def face_directions(w: int) -> Vectors:
    """Directions of every face pixel center, shape [6, w, w, 3] in stack order."""
    centers = pixel_centers(w)
    return _readonly(
        np.stack(
            [_gnomonic(_NORMALS[i], _U_AXES[i], _V_AXES[i], centers, centers) for i in range(6)]
        )
    )


# ----------------------------
# Projections
# ----------------------------


@lru_cache(maxsize=32)
def _cubemap_operator(w: int, p: int, q: int) -> sparse.csr_matrix:
    xs, ys = directions_to_equirect(face_directions(w), p, q)
    return sparse_operator(equirect_taps(xs, ys, q, p), p * q)


def equirect_to_cubemap(m: EquirectMap, w: int) -> CubeMap:
    """Project an equirectangular map onto six w x w faces (P)."""
    if w < 2:
        raise ArgumentError(f"Face width must be at least 2, got {w}")
    op = _cubemap_operator(w, m.width, m.height)
    planes = apply_operator(op, m.data.reshape(m.channels, -1))
    faces = planes.reshape(m.channels, 6, w, w).transpose(1, 0, 2, 3)
    return CubeMap(np.ascontiguousarray(faces))


@lru_cache(maxsize=32)
def _equirect_operator(w: int, p: int, q: int) -> sparse.csr_matrix:
    dirs = equirect_directions(p, q)
    dots = dirs @ _NORMALS.T  # [q, p, 6]
    face_idx = np.argmax(dots, axis=-1)
    depth = np.take_along_axis(dots, face_idx[..., None], axis=-1)[..., 0]
    us = np.sum(dirs * _U_AXES[face_idx], axis=-1) / depth
    vs = np.sum(dirs * _V_AXES[face_idx], axis=-1) / depth
    cols = (us + 1.0) * 0.5 * w - 0.5
    rows = (vs + 1.0) * 0.5 * w - 0.5
    return sparse_operator(face_taps(face_idx, cols, rows, w), 6 * w * w)


def cubemap_to_equirect(cm: CubeMap, p: int, q: int) -> EquirectMap:
    """Inverse projection P^-1 of a cubemap onto a canonical p x q raster."""
    if p != 2 * q:
        raise ArgumentError(f"Inverse projection needs p = 2q, got p={p} q={q}")
    c, w = cm.channels, cm.face_width
    planes = cm.data.transpose(1, 0, 2, 3).reshape(c, -1)
    raster = apply_operator(_equirect_operator(w, p, q), planes)
    return EquirectMap(raster.reshape(c, q, p))


# ----------------------------
# NFoV viewports
# ----------------------------


def nfov_basis(lon: float, lat: float) -> tuple[Vectors, Vectors, Vectors]:
    """Forward, right and down vectors of a viewport centered at (lon, lat)."""
    sin_lon, cos_lon = math.sin(lon), math.cos(lon)
    sin_lat, cos_lat = math.sin(lat), math.cos(lat)
    forward = np.array([cos_lat * cos_lon, cos_lat * sin_lon, sin_lat])
    right = np.array([-sin_lon, cos_lon, 0.0])
    down = np.array([sin_lat * cos_lon, sin_lat * sin_lon, -cos_lat])
    return forward, right, down


def nfov_directions(spec: NFoVSpec) -> Vectors:
    """Gnomonic ray directions of a viewport, shape [height, width, 3]."""
    forward, right, down = nfov_basis(spec.lon, spec.lat)
    us = pixel_centers(spec.width) * math.tan(spec.fov_x / 2)
    vs = pixel_centers(spec.height) * math.tan(spec.fov_y / 2)
    return _gnomonic(forward, right, down, us, vs)


def render_nfov(m: EquirectMap, spec: NFoVSpec) -> Tensor:
    """Render a rectilinear viewport of ``m``; returns a [c, height, width] image."""
    xs, ys = directions_to_equirect(nfov_directions(spec), m.width, m.height)
    return Tensor(sample_equirect(m.data, xs, ys))


@lru_cache(maxsize=16)
def _cube_faces_operator(width: int, fov: float, p: int, q: int) -> sparse.csr_matrix:
    half = pixel_centers(width) * math.tan(fov / 2)
    dirs = np.stack(
        [_gnomonic(_NORMALS[i], _U_AXES[i], _V_AXES[i], half, half) for i in range(6)]
    )
    xs, ys = directions_to_equirect(dirs, p, q)
    return sparse_operator(equirect_taps(xs, ys, q, p), p * q)


def render_cube_faces(m: EquirectMap, width: int, fov: float) -> FloatArray:
    """Render six viewports on the cube axes with field of view ``fov``: [6, c, width, width]."""
    op = _cube_faces_operator(width, fov, m.width, m.height)
    planes = apply_operator(op, m.data.reshape(m.channels, -1))
    faces = planes.reshape(m.channels, 6, width, width).transpose(1, 0, 2, 3)
    return np.ascontiguousarray(faces)


# ----------------------------
# Rotation
# ----------------------------


def rotation_matrix(yaw: float, pitch: float, roll: float) -> Vectors:
    """R = Rz(yaw) @ Ry(pitch) @ Rx(roll)."""
    return Rotation.from_euler("ZYX", [yaw, pitch, roll]).as_matrix()


def _is_full_turn(angle: float) -> bool:
    return math.isclose(math.remainder(angle, 2.0 * math.pi), 0.0, abs_tol=1e-12)


def rotate_sphere(m: EquirectMap, yaw: float, pitch: float, roll: float) -> EquirectMap:
    """Rotate the sphere content: each output direction d samples the input at R^-1 d."""
    if _is_full_turn(pitch) and _is_full_turn(roll):
        shift = yaw / (2.0 * math.pi) * m.width
        if math.isclose(shift, round(shift), abs_tol=1e-9):
            # pure yaw by whole columns is a circular shift
            LOG.debug("Rotation reduces to a column shift of %d", round(shift))
            return EquirectMap(np.roll(m.data, round(shift) % m.width, axis=-1))
    rot = rotation_matrix(yaw, pitch, roll)
    source = equirect_directions(m.width, m.height) @ rot
    xs, ys = directions_to_equirect(source, m.width, m.height)
    return EquirectMap(sample_equirect(m.data, xs, ys))


def rotate_viewpoint(
    lon: float, lat: float, yaw: float, pitch: float, roll: float
) -> tuple[float, float]:
    """Where a viewing direction lands after ``rotate_sphere`` with the same angles."""
    d = rotation_matrix(yaw, pitch, roll) @ SphericalDirection.from_angles(lon, lat).as_array()
    new_lon, new_lat = directions_to_angles(d)
    new_lon = (float(new_lon) + math.pi) % (2.0 * math.pi) - math.pi
    return new_lon, float(new_lat)


def cubemap_yaw_quarter_turn(cm: CubeMap, turns: int = 1) -> CubeMap:
    """Apply the face permutation of a +90° yaw rotation ``turns`` times.

    Lateral faces move F <- L <- B <- R <- F; T and D rotate in-plane.
    """
    idx = {face: face.index for face in FaceId}
    data = cm.data
    for _ in range(turns % 4):
        out = np.empty_like(data)
        out[idx[FaceId.F]] = data[idx[FaceId.L]]
        out[idx[FaceId.R]] = data[idx[FaceId.F]]
        out[idx[FaceId.B]] = data[idx[FaceId.R]]
        out[idx[FaceId.L]] = data[idx[FaceId.B]]
        out[idx[FaceId.T]] = np.rot90(data[idx[FaceId.T]], 1, axes=(-2, -1))
        out[idx[FaceId.D]] = np.rot90(data[idx[FaceId.D]], -1, axes=(-2, -1))
        data = out
    return CubeMap(data)
