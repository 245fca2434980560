"""Convolutional LSTM cell over face stacks.

All gate convolutions are 3x3 stride 1. Peephole weights scale the cell state per channel.
"""

import logging

import numpy as np
from scipy.special import expit

from cubepad_saliency.core.exceptions import ShapeError
from cubepad_saliency.padding.models import PadMode
from cubepad_saliency.padding.pad import PadStrategy, get_strategy
from cubepad_saliency.tensor.models import FloatArray, Tensor

from .layers import conv_faces
from .models import ConvLSTMState, ConvLSTMWeights

LOG = logging.getLogger(__name__)


def convlstm_cell(
    hidden: FloatArray,
    cell: FloatArray,
    x: FloatArray,
    wts: ConvLSTMWeights,
    strategy: PadStrategy,
) -> tuple[FloatArray, FloatArray]:
    """One ConvLSTM update on raw [n, K, h, w] arrays; returns (H', C')."""
    k = wts.channels
    if x.shape != hidden.shape or hidden.shape != cell.shape or x.shape[1] != k:
        raise ShapeError(
            f"ConvLSTM with {k} channels got input {list(x.shape)}, "
            f"state {list(hidden.shape)} / {list(cell.shape)}"
        )
    x_kernel = wts.input_kernels.reshape(4 * k, k, 3, 3)
    h_kernel = wts.hidden_kernels.reshape(4 * k, k, 3, 3)
    gates = conv_faces(x, x_kernel, wts.biases.reshape(4 * k), 1, strategy)
    gates += conv_faces(hidden, h_kernel, None, 1, strategy)
    z_i, z_f, z_c, z_o = np.split(gates, 4, axis=1)

    peep_i, peep_f, peep_o = (p.reshape(1, k, 1, 1) for p in wts.peepholes)
    in_gate = expit(z_i + peep_i * cell)
    forget_gate = expit(z_f + peep_f * cell)
    candidate = np.tanh(z_c)
    new_cell = in_gate * candidate + forget_gate * cell
    out_gate = expit(z_o + peep_o * new_cell)
    new_hidden = out_gate * np.tanh(new_cell)
    return new_hidden.astype(np.float32), new_cell.astype(np.float32)


def convlstm_step(
    state: ConvLSTMState,
    m_s: Tensor,
    wts: ConvLSTMWeights,
    pad_mode: PadMode = PadMode.CUBE,
) -> ConvLSTMState:
    """Advance the state by one frame of class activations M_S,t."""
    if state.hidden.dims != m_s.dims:
        raise ShapeError(f"ConvLSTM state {state.hidden.dims} does not match input {m_s.dims}")
    hidden, cell = convlstm_cell(
        state.hidden.data, state.cell.data, m_s.data, wts, get_strategy(pad_mode)
    )
    return ConvLSTMState(Tensor(hidden), Tensor(cell))
