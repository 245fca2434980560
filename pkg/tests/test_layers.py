import numpy as np
import pytest

from cubepad_saliency.core.exceptions import ArgumentError, ShapeError
from cubepad_saliency.network.layers import (
    channel_max,
    conv2d,
    maxpool,
    saliency_head,
    resize_faces,
    upsample_bilinear,
)
from cubepad_saliency.network.models import Activation, ConvLayer
from cubepad_saliency.padding.models import PadMode
from cubepad_saliency.padding.pad import cube_pad
from cubepad_saliency.sphere.geometry import cubemap_yaw_quarter_turn
from cubepad_saliency.sphere.models import FaceId
from cubepad_saliency.tensor.models import CubeMap, Tensor


def naive_correlation(padded: np.ndarray, kernel: np.ndarray, bias: np.ndarray) -> np.ndarray:
    n, _, hp, wp = padded.shape
    c_out, _, kh, kw = kernel.shape
    out = np.zeros((n, c_out, hp - kh + 1, wp - kw + 1))
    for face in range(n):
        for o in range(c_out):
            for i in range(out.shape[2]):
                for j in range(out.shape[3]):
                    window = padded[face, :, i : i + kh, j : j + kw].astype(np.float64)
                    out[face, o, i, j] = np.sum(window * kernel[o]) + bias[o]
    return out


def layer(kernel: np.ndarray, pad_mode: PadMode, **kwargs) -> ConvLayer:
    bias = kwargs.pop("bias", np.zeros(kernel.shape[0], dtype=np.float32))
    return ConvLayer(
        kernel=kernel, bias=bias, pad_mode=pad_mode, activation=Activation.NONE, **kwargs
    )


def test_zero_padded_conv_matches_naive_loop(rng):
    x = rng.standard_normal((6, 2, 5, 5)).astype(np.float32)
    kernel = rng.standard_normal((3, 2, 3, 3)).astype(np.float32)
    bias = rng.standard_normal(3).astype(np.float32)

    out = conv2d(CubeMap(x), layer(kernel, PadMode.ZERO, bias=bias))

    expected = naive_correlation(np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1))), kernel, bias)
    np.testing.assert_allclose(out.data, expected, atol=1e-5)


def test_cube_padded_conv_matches_naive_loop(rng):
    x = rng.standard_normal((6, 2, 6, 6)).astype(np.float32)
    kernel = rng.standard_normal((2, 2, 5, 5)).astype(np.float32)
    bias = np.zeros(2, dtype=np.float32)

    out = conv2d(CubeMap(x), layer(kernel, PadMode.CUBE))

    expected = naive_correlation(cube_pad(CubeMap(x), 2).tensor.data, kernel, bias)
    np.testing.assert_allclose(out.data, expected, atol=1e-4)


def test_identity_kernel_keeps_input(random_cubemap):
    kernel = np.zeros((2, 2, 3, 3), dtype=np.float32)
    kernel[0, 0, 1, 1] = kernel[1, 1, 1, 1] = 1.0
    for mode in PadMode:
        out = conv2d(random_cubemap, layer(kernel, mode))
        np.testing.assert_allclose(out.data, random_cubemap.data, rtol=1e-6)


def test_stride_two_halves_the_face():
    x = CubeMap(np.ones((6, 1, 6, 6), dtype=np.float32))
    kernel = np.ones((4, 1, 3, 3), dtype=np.float32)
    assert conv2d(x, layer(kernel, PadMode.CUBE, stride=2)).dims == [6, 4, 3, 3]


def test_relu_clips_negative_responses():
    x = CubeMap(np.full((6, 1, 4, 4), -1.0, dtype=np.float32))
    kernel = np.ones((1, 1, 1, 1), dtype=np.float32)
    relu_layer = ConvLayer(kernel=kernel, bias=np.zeros(1, dtype=np.float32))
    assert np.all(conv2d(x, relu_layer).data == 0.0)


def test_constant_input_separates_cube_from_zero_padding():
    x = CubeMap(np.ones((6, 1, 8, 8), dtype=np.float32))
    mean = np.full((1, 1, 3, 3), 1.0 / 9.0, dtype=np.float32)

    cp = conv2d(x, layer(mean, PadMode.CUBE)).data
    zp = conv2d(x, layer(mean, PadMode.ZERO)).data

    np.testing.assert_allclose(cp, 1.0, atol=1e-6)
    np.testing.assert_allclose(zp[:, 0, 1:-1, 1:-1], 1.0, atol=1e-6)
    np.testing.assert_allclose(zp[:, 0, 0, 1:-1], 6.0 / 9.0, atol=1e-6)
    np.testing.assert_allclose(zp[:, 0, 0, 0], 4.0 / 9.0, atol=1e-6)


def test_response_crosses_face_edges_only_with_cube_padding():
    data = np.zeros((6, 1, 8, 8), dtype=np.float32)
    data[FaceId.F.index, 0, 4, 7] = 1.0
    kernel = np.ones((1, 1, 3, 3), dtype=np.float32)

    cp = conv2d(CubeMap(data), layer(kernel, PadMode.CUBE)).data
    zp = conv2d(CubeMap(data), layer(kernel, PadMode.ZERO)).data

    right = FaceId.R.index
    assert cp[right, 0, 3:6, 0].tolist() == [1.0, 1.0, 1.0]
    assert not zp[right].any()


def test_receptive_field_wraps_around_the_cube():
    data = np.zeros((6, 1, 4, 4), dtype=np.float32)
    data[FaceId.F.index, 0, 1, 1] = 1.0
    x = CubeMap(data)
    kernel = np.ones((1, 1, 3, 3), dtype=np.float32)
    spread = layer(kernel, PadMode.CUBE)
    reached = []
    for _ in range(6):
        x = conv2d(x, spread)
        reached.append(int(np.count_nonzero(x.data.reshape(6, -1).any(axis=1))))
    assert reached == sorted(reached)
    assert reached[-1] == 6
    assert reached[0] == 1


def test_maxpool_two_by_two():
    x = np.arange(6 * 16, dtype=np.float32).reshape(6, 1, 4, 4)
    out = maxpool(CubeMap(x), kernel=2, stride=2)
    expected = x.reshape(6, 1, 2, 2, 2, 2).max(axis=(3, 5))
    np.testing.assert_array_equal(out.data, expected)


def test_maxpool_zero_padding_beats_negative_values():
    x = CubeMap(np.full((6, 1, 4, 4), -1.0, dtype=np.float32))
    zp = maxpool(x, kernel=3, stride=1, pad_mode=PadMode.ZERO).data
    cp = maxpool(x, kernel=3, stride=1, pad_mode=PadMode.CUBE).data
    assert np.all(zp[:, :, 0, :] == 0.0)
    assert np.all(zp[:, :, 1:-1, 1:-1] == -1.0)
    assert np.all(cp == -1.0)


def test_maxpool_kernel_larger_than_face_rejected():
    x = CubeMap(np.zeros((6, 1, 2, 2), dtype=np.float32))
    with pytest.raises(ArgumentError):
        maxpool(x, kernel=4, stride=1, pad=0)


def test_upsample_uses_half_pixel_centres():
    out = upsample_bilinear(Tensor(np.array([[1.0, 3.0]], dtype=np.float32)), 2)
    assert out.dims == [2, 4]
    assert out.data[0].tolist() == [1.0, 1.5, 2.5, 3.0]


def test_upsample_keeps_cubemap_type(random_cubemap):
    out = upsample_bilinear(random_cubemap, 2)
    assert isinstance(out, CubeMap)
    assert out.face_width == 16
    assert upsample_bilinear(random_cubemap, 1) == random_cubemap


def test_upsample_factor_must_be_positive(random_cubemap):
    with pytest.raises(ArgumentError):
        upsample_bilinear(random_cubemap, 0)


def test_saliency_head_is_a_channel_mix():
    m_l = CubeMap(np.ones((6, 2, 4, 4), dtype=np.float32))
    w_fc = np.array([[0.1, 0.2], [1.0, -1.0]], dtype=np.float32).reshape(2, 2, 1, 1)

    m_s = saliency_head(m_l, w_fc)

    assert m_s.dims == [6, 2, 4, 4]
    np.testing.assert_allclose(m_s.data[:, 0], 0.3, rtol=1e-6)
    np.testing.assert_allclose(m_s.data[:, 1], 0.0, atol=1e-7)


def test_saliency_head_shape_errors():
    m_l = CubeMap(np.ones((6, 2, 4, 4), dtype=np.float32))
    with pytest.raises(ShapeError):
        saliency_head(m_l, np.ones((1, 2), dtype=np.float32))
    with pytest.raises(ShapeError):
        saliency_head(m_l, np.ones((1, 3, 1, 1), dtype=np.float32))


def test_channel_max(random_cubemap):
    out = channel_max(random_cubemap)
    assert out.dims == [6, 1, 8, 8]
    np.testing.assert_array_equal(out.data[:, 0], random_cubemap.data.max(axis=1))


def test_cube_padded_conv_commutes_with_yaw_quarter_turns(rng):
    x = CubeMap(rng.standard_normal((6, 1, 8, 8)).astype(np.float32))
    # invariant under the in-plane rotations applied to the top and bottom faces
    kernel = np.array([[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]], dtype=np.float32)
    blur = layer(kernel.reshape(1, 1, 3, 3) / 16.0, PadMode.CUBE)

    turned_first = conv2d(cubemap_yaw_quarter_turn(x), blur)
    conv_first = cubemap_yaw_quarter_turn(conv2d(x, blur))

    np.testing.assert_allclose(turned_first.data, conv_first.data, atol=1e-5)


def _half_pixel(n_out: int, n_in: int) -> np.ndarray:
    return np.clip((np.arange(n_out) + 0.5) * n_in / n_out - 0.5, 0.0, n_in - 1)


@pytest.mark.parametrize("size", [(4, 6), (9, 20), (3, 3)])
def test_resize_matches_per_line_interpolation(rng, size):
    x = rng.standard_normal((2, 3, 5, 7)).astype(np.float32)
    height, width = size
    out = resize_faces(x, height, width)
    assert out.shape == (2, 3, height, width) and out.dtype == np.float32

    ys, xs = _half_pixel(height, 5), _half_pixel(width, 7)
    for plane, got in zip(x.reshape(-1, 5, 7), out.reshape(-1, height, width)):
        rows = np.stack([np.interp(ys, np.arange(5), col) for col in plane.T], axis=1)
        want = np.stack([np.interp(xs, np.arange(7), row) for row in rows])
        np.testing.assert_allclose(got, want, rtol=1e-5, atol=1e-6)


def test_resize_to_the_same_size_is_a_no_op(rng):
    x = rng.random((1, 8, 16)).astype(np.float32)
    assert resize_faces(x, 8, 16) is x
