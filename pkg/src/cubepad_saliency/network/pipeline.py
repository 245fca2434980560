"""Static and temporal saliency pipelines.

Cubemap modes (CP, ZP) project the frame onto faces of width p / 4, run the trunk and the
saliency head per face, reduce the class maps, max-pool, project back with P^-1 and resize to
the requested output raster. EQUI runs the same layers on the raster itself with zero padding,
OVERLAP on enlarged-FoV faces that are cropped back to their central 90° before P^-1.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from cubepad_saliency.core.exceptions import ArgumentError, ShapeError
from cubepad_saliency.padding.models import CropRect, PadMode
from cubepad_saliency.padding.pad import PadStrategy, get_strategy, render_overlap_faces
from cubepad_saliency.sphere.geometry import cubemap_to_equirect, equirect_to_cubemap
from cubepad_saliency.tensor.models import CubeMap, EquirectMap, FloatArray

from .convlstm import convlstm_cell
from .layers import apply_conv, head_faces, maxpool_faces, resize_faces
from .models import ConvLayer, ConvLSTMWeights, MaxPoolLayer, NetworkSpec, PipelineMode

LOG = logging.getLogger(__name__)

DEFAULT_OVERLAP_FOV = math.radians(120.0)

# relative span under which a saliency map counts as flat
FLAT_TOLERANCE = 1e-5


@dataclass(frozen=True)
class _Stage:
    """Face stack entering the trunk and how to bring its output back to a raster."""

    faces: FloatArray
    strategy: PadStrategy
    mode: PipelineMode
    crop: CropRect | None = None


def normalize_map(data: FloatArray) -> FloatArray:
    """Min-max normalize to [0, 1]; flat maps become all-zero."""
    lo = float(data.min())
    hi = float(data.max())
    span = hi - lo
    if span == 0.0 or span <= FLAT_TOLERANCE * max(abs(lo), abs(hi)):
        return np.zeros_like(data, dtype=np.float32)
    return ((data.astype(np.float64) - lo) / span).astype(np.float32)


def _check_frame(frame: EquirectMap, net: NetworkSpec, p: int, q: int) -> None:
    if not frame.is_canonical:
        raise ArgumentError(f"Frame must satisfy p = 2q, got {frame.width}x{frame.height}")
    if p < 2 or q < 1 or p != 2 * q:
        raise ArgumentError(f"Output raster must satisfy p = 2q, got p={p} q={q}")
    if frame.channels != net.in_channels:
        raise ShapeError(f"Network expects {net.in_channels} channels, frame has {frame.channels}")


def _enter(frame: EquirectMap, mode: PipelineMode, overlap_fov: float) -> _Stage:
    mode = PipelineMode(mode)
    w = frame.width // 4
    if mode is PipelineMode.EQUI:
        return _Stage(frame.data[None], get_strategy(PadMode.ZERO), mode)
    if mode is PipelineMode.OVERLAP:
        overlap = render_overlap_faces(frame, w, overlap_fov)
        return _Stage(overlap.faces.data, get_strategy(PadMode.ZERO), mode, crop=overlap.crop)
    pad_mode = PadMode.CUBE if mode is PipelineMode.CP else PadMode.ZERO
    LOG.debug("Projecting %dx%d frame onto faces of width %d", frame.width, frame.height, w)
    return _Stage(equirect_to_cubemap(frame, w).data, get_strategy(pad_mode), mode)


def _trunk(stage: _Stage, net: NetworkSpec) -> FloatArray:
    """Run the layer stack and the saliency head; returns class maps [n, K, h, w]."""
    x = stage.faces
    for pos, layer in enumerate(net.layers):
        if isinstance(layer, ConvLayer):
            x = apply_conv(x, layer, stage.strategy)
        elif isinstance(layer, MaxPoolLayer):
            x = maxpool_faces(x, layer.kernel, layer.stride, layer.pad_width, stage.strategy)
        else:
            x = resize_faces(x, x.shape[-2] * layer.factor, x.shape[-1] * layer.factor)
        LOG.debug("Layer %d -> %s", pos, list(x.shape))
    return head_faces(x, net.head)


def _reduce(m_s: FloatArray, class_index: int | None) -> FloatArray:
    if class_index is None:
        return m_s.max(axis=1, keepdims=True)
    if not 0 <= class_index < m_s.shape[1]:
        raise ArgumentError(f"Class index {class_index} outside [0, {m_s.shape[1]})")
    return m_s[:, class_index : class_index + 1]


def _leave(s: FloatArray, stage: _Stage, net: NetworkSpec, p: int, q: int) -> EquirectMap:
    """Post-process max-pool, back-projection, resize and normalization."""
    s = maxpool_faces(s, net.post_pool, 1, (net.post_pool - 1) // 2, stage.strategy)
    if stage.mode is PipelineMode.EQUI:
        raster = s[0]
    else:
        if stage.crop is not None:
            crop = stage.crop.scaled(stage.faces.shape[-1], s.shape[-1])
            s = s[:, :, crop.top : crop.top + crop.size, crop.left : crop.left + crop.size]
        w = s.shape[-1]
        raster = cubemap_to_equirect(CubeMap(s), 4 * w, 2 * w).data
    raster = resize_faces(raster, q, p)
    return EquirectMap(normalize_map(raster))


def forward_static(
    frame: EquirectMap,
    net: NetworkSpec,
    mode: PipelineMode,
    p: int,
    q: int,
    *,
    class_index: int | None = None,
    overlap_fov: float = DEFAULT_OVERLAP_FOV,
) -> EquirectMap:
    """Saliency map O [1, q, p] of one frame.

    With ``class_index`` the map of that class replaces the per-pixel channel max.
    """
    _check_frame(frame, net, p, q)
    stage = _enter(frame, mode, overlap_fov)
    m_s = _trunk(stage, net)
    return _leave(_reduce(m_s, class_index), stage, net, p, q)


def forward_temporal(
    frames: Sequence[EquirectMap],
    net: NetworkSpec,
    lstm: ConvLSTMWeights,
    z: int = 5,
    *,
    mode: PipelineMode = PipelineMode.CP,
    p: int | None = None,
    q: int | None = None,
    class_index: int | None = None,
) -> list[EquirectMap]:
    """Saliency maps of a frame sequence through the ConvLSTM.

    The state starts at zero and is reset every ``z`` frames. The output raster defaults to
    the size of the first frame.
    """
    if len(frames) == 0:
        raise ArgumentError("Temporal pipeline needs at least one frame")
    if z < 1:
        raise ArgumentError(f"Sequence length Z must be positive, got {z}")
    mode = PipelineMode(mode)
    if mode is PipelineMode.OVERLAP:
        raise ArgumentError("The temporal pipeline supports cp, zp and equi modes")
    if lstm.channels != net.num_classes:
        raise ShapeError(
            f"ConvLSTM has {lstm.channels} channels, network has {net.num_classes} classes"
        )
    out_p = frames[0].width if p is None else p
    out_q = frames[0].height if q is None else q

    outputs = []
    hidden = cell = np.empty(0, dtype=np.float32)
    for t, frame in enumerate(frames):
        _check_frame(frame, net, out_p, out_q)
        stage = _enter(frame, mode, DEFAULT_OVERLAP_FOV)
        m_s = _trunk(stage, net)
        if t % z != 0 and hidden.shape != m_s.shape:
            raise ShapeError(f"Frame {t} yields {list(m_s.shape)}, state is {list(hidden.shape)}")
        if t % z == 0:
            LOG.debug("Resetting ConvLSTM state at frame %d", t)
            hidden = np.zeros_like(m_s)
            cell = np.zeros_like(m_s)
        hidden, cell = convlstm_cell(hidden, cell, m_s, lstm, stage.strategy)
        outputs.append(_leave(_reduce(hidden, class_index), stage, net, out_p, out_q))
    LOG.info("Temporal pipeline produced %d maps in %s mode", len(outputs), mode)
    return outputs
