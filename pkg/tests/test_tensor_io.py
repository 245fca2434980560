import numpy as np
import pytest
from PIL import Image

from cubepad_saliency.core.exceptions import DataError, FormatError, ShapeError
from cubepad_saliency.tensor.io import (
    decode_tensor,
    encode_tensor,
    image_export,
    image_import,
    tensor_read,
    tensor_write,
)
from cubepad_saliency.tensor.models import CubeMap, EquirectMap, Tensor


def test_write_then_read_small_tensor(tmp_path):
    path = tmp_path / "t.cpt"
    tensor_write(Tensor(np.arange(6, dtype=np.float32).reshape(2, 3)), path)

    tensor = tensor_read(path)

    assert tensor.dims == [2, 3]
    assert tensor.data.ravel().tolist() == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]


@pytest.mark.parametrize(
    "dims, size",
    [
        ((1,), 4 + 4 + 4 + 4),
        ((6, 2, 8, 8), 4 + 4 + 16 + 3072),
    ],
)
def test_file_size_follows_header_arithmetic(tmp_path, dims, size):
    path = tmp_path / "t.cpt"
    tensor_write(Tensor(np.full(dims, 3.5, dtype=np.float32)), path)
    assert path.stat().st_size == size


def test_cubemap_shaped_file(tmp_path):
    path = tmp_path / "cube.cpt"
    tensor_write(Tensor(np.ones((6, 1, 4, 4), dtype=np.float32)), path)
    cube = CubeMap(tensor_read(path).data)
    assert cube.face_width == 4
    assert cube.size == 96


def test_round_trip_is_bitwise(rng, tmp_path):
    path = tmp_path / "t.cpt"
    for _ in range(50):
        ndim = int(rng.integers(1, 5))
        dims = tuple(int(d) for d in rng.integers(1, 9, size=ndim))
        original = Tensor((rng.standard_normal(dims) * 1e3).astype(np.float32))
        tensor_write(original, path)
        assert tensor_read(path) == original


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.cpt"
    payload = encode_tensor(Tensor(np.zeros(3, dtype=np.float32)))
    path.write_bytes(b"XXXX" + payload[4:])
    with pytest.raises(FormatError):
        tensor_read(path)


def test_trailing_and_truncated_bytes_rejected():
    payload = encode_tensor(Tensor(np.zeros((2, 2), dtype=np.float32)))
    with pytest.raises(FormatError):
        decode_tensor(payload + b"\x00")
    with pytest.raises(FormatError):
        decode_tensor(payload[:-4])


def test_non_finite_payload_rejected():
    payload = bytearray(encode_tensor(Tensor(np.zeros(2, dtype=np.float32))))
    payload[-4:] = np.array([np.nan], dtype="<f4").tobytes()
    with pytest.raises(DataError):
        decode_tensor(bytes(payload))


def test_tensor_is_read_only():
    source = np.zeros((2, 2), dtype=np.float32)
    tensor = Tensor(source)
    assert not tensor.data.flags.writeable
    assert source.flags.writeable


def test_wrappers_reject_wrong_dimensionality():
    with pytest.raises(ShapeError):
        EquirectMap(np.zeros((4, 8), dtype=np.float32))
    with pytest.raises(ShapeError):
        CubeMap(np.zeros((5, 1, 4, 4), dtype=np.float32))
    with pytest.raises(ShapeError):
        CubeMap(np.zeros((6, 1, 4, 3), dtype=np.float32))


def test_png_maps_linearly_to_unit_range(tmp_path):
    path = tmp_path / "two.png"
    Image.fromarray(np.array([[0, 255]], dtype=np.uint8)).save(path)

    m = image_import(path)

    assert m.dims == [1, 1, 2]
    assert m.data.ravel().tolist() == [0.0, 1.0]


def test_rgb_png_shape(tmp_path):
    path = tmp_path / "rgb.png"
    Image.fromarray(np.zeros((64, 128, 3), dtype=np.uint8)).save(path)

    m = image_import(path)

    assert (m.channels, m.height, m.width) == (3, 64, 128)


def test_png_export_import_within_one_level(rng, tmp_path):
    path = tmp_path / "m.png"
    original = EquirectMap(rng.random((3, 16, 32)).astype(np.float32))

    image_export(original, path)

    assert np.abs(image_import(path).data - original.data).max() <= 1.0 / 255.0


def test_pfm_round_trip_is_bitwise(rng, tmp_path):
    for channels in (1, 3):
        path = tmp_path / f"m{channels}.pfm"
        original = EquirectMap(rng.standard_normal((channels, 8, 16)).astype(np.float32))
        image_export(original, path)
        assert image_import(path) == original


def test_sixteen_bit_png_rejected(tmp_path):
    path = tmp_path / "deep.png"
    Image.fromarray(np.zeros((4, 8), dtype=np.uint16)).save(path)
    with pytest.raises(FormatError):
        image_import(path)


def test_colormap_export_writes_rgb(tmp_path):
    path = tmp_path / "sal.png"
    ramp = np.linspace(0.0, 1.0, 32, dtype=np.float32)
    image_export(EquirectMap(np.tile(ramp, (1, 16, 1))), path, colormap=True)
    with Image.open(path) as img:
        assert img.mode == "RGB"


def test_unknown_suffix_rejected(tmp_path):
    with pytest.raises(FormatError):
        image_export(EquirectMap(np.zeros((1, 2, 4), dtype=np.float32)), tmp_path / "m.jpg")
