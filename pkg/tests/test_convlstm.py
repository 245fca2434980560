import math

import numpy as np
import pytest

from cubepad_saliency.core.exceptions import ShapeError
from cubepad_saliency.network.convlstm import convlstm_step
from cubepad_saliency.network.manifest import generate_convlstm
from cubepad_saliency.network.models import ConvLSTMState, ConvLSTMWeights
from cubepad_saliency.padding.models import PadMode
from cubepad_saliency.tensor.models import Tensor


def constant_state(k: int, w: int, hidden: float, cell: float) -> ConvLSTMState:
    shape = (6, k, w, w)
    return ConvLSTMState(
        Tensor(np.full(shape, hidden, dtype=np.float32)),
        Tensor(np.full(shape, cell, dtype=np.float32)),
    )


def test_zero_weights_halve_the_cell():
    state = constant_state(2, 4, hidden=0.0, cell=2.0)
    m_s = Tensor(np.ones((6, 2, 4, 4), dtype=np.float32))

    new = convlstm_step(state, m_s, ConvLSTMWeights.zeros(2))

    np.testing.assert_allclose(new.cell.data, 1.0, rtol=1e-6)
    np.testing.assert_allclose(new.hidden.data, 0.5 * math.tanh(1.0), rtol=1e-6)


def test_open_forget_gate_and_closed_input_gate_keep_the_cell(rng):
    cell = rng.standard_normal((6, 1, 4, 4)).astype(np.float32)
    state = ConvLSTMState(Tensor(np.zeros_like(cell)), Tensor(cell))
    wts = ConvLSTMWeights.zeros(1).with_bias("f", 30.0).with_bias("i", -30.0)

    new = convlstm_step(state, Tensor(np.ones_like(cell)), wts)

    np.testing.assert_allclose(new.cell.data, cell, atol=1e-6)


def test_peepholes_read_the_cell():
    state = constant_state(1, 4, hidden=0.0, cell=1.0)
    m_s = Tensor(np.zeros((6, 1, 4, 4), dtype=np.float32))
    plain = ConvLSTMWeights.zeros(1)
    peeped = ConvLSTMWeights(
        plain.input_kernels,
        plain.hidden_kernels,
        np.array([[0.0], [4.0], [0.0]], dtype=np.float32),
        plain.biases,
    )

    without = convlstm_step(state, m_s, plain).cell.data
    with_peep = convlstm_step(state, m_s, peeped).cell.data

    assert np.all(with_peep > without)
    np.testing.assert_allclose(with_peep, 1.0 / (1.0 + math.exp(-4.0)), rtol=1e-6)


def test_cube_padding_keeps_constant_state_uniform():
    wts = generate_convlstm(2, seed=3)
    state = constant_state(2, 6, hidden=0.2, cell=-0.1)
    m_s = Tensor(np.full((6, 2, 6, 6), 0.7, dtype=np.float32))

    cp = convlstm_step(state, m_s, wts, PadMode.CUBE).hidden.data
    zp = convlstm_step(state, m_s, wts, PadMode.ZERO).hidden.data

    for c in range(2):
        np.testing.assert_allclose(cp[:, c], cp[0, c, 0, 0], atol=1e-6)
    assert np.abs(zp[:, :, 0, :] - cp[:, :, 0, :]).max() > 1e-4
    np.testing.assert_allclose(zp[:, :, 2:-2, 2:-2], cp[:, :, 2:-2, 2:-2], atol=1e-6)


def test_state_must_match_input():
    state = ConvLSTMState.zeros(6, 2, 4, 4)
    big = Tensor(np.zeros((6, 2, 8, 8), dtype=np.float32))
    with pytest.raises(ShapeError):
        convlstm_step(state, big, ConvLSTMWeights.zeros(2))
    with pytest.raises(ShapeError):
        convlstm_step(
            ConvLSTMState.zeros(6, 3, 4, 4),
            Tensor(np.zeros((6, 3, 4, 4), dtype=np.float32)),
            ConvLSTMWeights.zeros(2),
        )


def test_mismatched_state_tensors_rejected():
    with pytest.raises(ShapeError):
        ConvLSTMState(
            Tensor(np.zeros((6, 1, 4, 4), dtype=np.float32)),
            Tensor(np.zeros((6, 1, 2, 2), dtype=np.float32)),
        )


def test_weight_shapes_are_checked():
    zeros = ConvLSTMWeights.zeros(2)
    with pytest.raises(ShapeError):
        ConvLSTMWeights(zeros.input_kernels, zeros.hidden_kernels, np.zeros((4, 2)), zeros.biases)


def test_generated_weights_are_seeded():
    a = generate_convlstm(3, seed=11)
    b = generate_convlstm(3, seed=11)
    c = generate_convlstm(3, seed=12)
    assert np.array_equal(a.input_kernels, b.input_kernels)
    assert not np.array_equal(a.input_kernels, c.input_kernels)
    assert np.all(a.biases[1] == 1.0)


def test_step_works_on_equirect_rasters(rng):
    state = ConvLSTMState.zeros(1, 2, 8, 16)
    m_s = Tensor(rng.random((1, 2, 8, 16)).astype(np.float32))
    new = convlstm_step(state, m_s, generate_convlstm(2, seed=0), PadMode.ZERO)
    assert new.hidden.dims == [1, 2, 8, 16]
    assert np.all(np.abs(new.hidden.data) < 1.0)
