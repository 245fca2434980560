"""Seeded toy network generation and the JSON manifest format.

A manifest is a JSON document whose tensors live next to it as CPT1 files referenced by
relative path.
"""

import logging
import math
from pathlib import Path

import numpy as np

from cubepad_saliency.core.exceptions import DataError, ShapeError
from cubepad_saliency.tensor.io import tensor_read, tensor_write
from cubepad_saliency.tensor.models import FloatArray, Tensor
from cubepad_saliency.types.common import StrPath

from .models import (
    ConvLayer,
    ConvLayerConfig,
    ConvLayerEntry,
    ConvLSTMEntry,
    ConvLSTMWeights,
    Layer,
    ManifestLayer,
    MaxPoolLayer,
    MaxPoolLayerConfig,
    MaxPoolLayerEntry,
    NetworkConfig,
    NetworkManifest,
    NetworkSpec,
    UpsampleLayer,
    UpsampleLayerConfig,
)

LOG = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TENSOR_DIR = "tensors"


def _he_uniform(rng: np.random.Generator, shape: tuple[int, ...]) -> FloatArray:
    """He-uniform draw, fan-in = product of all but the leading dim."""
    fan_in = int(np.prod(shape[1:]))
    bound = math.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(np.float32)


def generate_network(config: NetworkConfig, seed: int = 0) -> NetworkSpec:
    """Draw every trunk and head weight from one seeded generator; biases start at zero."""
    rng = np.random.default_rng(seed)
    layers: list[Layer] = []
    channels = config.in_channels
    for entry in config.layers:
        if isinstance(entry, ConvLayerConfig):
            shape = (entry.out_channels, channels, entry.kernel_size, entry.kernel_size)
            layers.append(
                ConvLayer(
                    kernel=_he_uniform(rng, shape),
                    bias=np.zeros(entry.out_channels, dtype=np.float32),
                    stride=entry.stride,
                    activation=entry.activation,
                )
            )
            channels = entry.out_channels
        elif isinstance(entry, MaxPoolLayerConfig):
            layers.append(MaxPoolLayer(kernel=entry.kernel_size, stride=entry.stride))
        else:
            layers.append(UpsampleLayer(factor=entry.factor))
    head = _he_uniform(rng, (config.num_classes, channels, 1, 1))
    LOG.info(
        "Generated network with %d layers and %d classes",
        len(layers),
        config.num_classes,
        extra={"seed": seed},
    )
    return NetworkSpec(
        layers=tuple(layers), head=head, post_pool=config.post_pool, in_channels=config.in_channels
    )


def generate_convlstm(k: int, seed: int = 0, forget_bias: float = 1.0) -> ConvLSTMWeights:
    """He-uniform gate kernels, zero peepholes, zero biases except the forget gate."""
    rng = np.random.default_rng(seed)
    biases = np.zeros((4, k), dtype=np.float32)
    biases[1] = forget_bias
    return ConvLSTMWeights(
        input_kernels=_he_uniform(rng, (4, k, k, 3, 3)),
        hidden_kernels=_he_uniform(rng, (4, k, k, 3, 3)),
        peepholes=np.zeros((3, k), dtype=np.float32),
        biases=biases,
    )


# ----------------------------
# Manifest I/O
# ----------------------------


class _TensorStore:
    """Writes tensors under ``root/tensors`` and hands back their relative paths."""

    def __init__(self, root: Path):
        self.root = root
        (root / TENSOR_DIR).mkdir(parents=True, exist_ok=True)

    def put(self, name: str, data: FloatArray) -> str:
        rel = f"{TENSOR_DIR}/{name}.cpt"
        tensor_write(Tensor(data), self.root / rel)
        return rel


def save_manifest(
    directory: StrPath, net: NetworkSpec, lstm: ConvLSTMWeights | None = None
) -> Path:
    """Write ``manifest.json`` plus CPT1 tensors into ``directory``; returns the manifest path."""
    root = Path(directory)
    store = _TensorStore(root)
    entries: list[ManifestLayer] = []
    for pos, layer in enumerate(net.layers):
        if isinstance(layer, ConvLayer):
            entries.append(
                ConvLayerEntry(
                    kernel=store.put(f"layer{pos}_kernel", layer.kernel),
                    bias=store.put(f"layer{pos}_bias", layer.bias),
                    stride=layer.stride,
                    pad_mode=layer.pad_mode,
                    activation=layer.activation,
                )
            )
        elif isinstance(layer, MaxPoolLayer):
            entries.append(
                MaxPoolLayerEntry(
                    kernel_size=layer.kernel,
                    stride=layer.stride,
                    pad_mode=layer.pad_mode,
                    pad=layer.pad,
                )
            )
        else:
            entries.append(UpsampleLayerConfig(factor=layer.factor))
    lstm_entry = None
    if lstm is not None:
        lstm_entry = ConvLSTMEntry(
            **{name: store.put(f"convlstm_{name}", t.data) for name, t in lstm.tensors().items()}
        )
    manifest = NetworkManifest(
        in_channels=net.in_channels,
        layers=entries,
        head=store.put("head", net.head),
        post_pool=net.post_pool,
        convlstm=lstm_entry,
    )
    path = manifest.write_json(root / MANIFEST_NAME)
    LOG.info("Wrote network manifest %s", path)
    return path


def load_manifest(path: StrPath) -> tuple[NetworkSpec, ConvLSTMWeights | None]:
    """Read a manifest and the tensors it references."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    manifest = NetworkManifest.read_json(path)

    def read(rel: str) -> FloatArray:
        return tensor_read(path.parent / rel).data

    layers: list[Layer] = []
    try:
        for entry in manifest.layers:
            if isinstance(entry, ConvLayerEntry):
                layers.append(
                    ConvLayer(
                        kernel=read(entry.kernel),
                        bias=read(entry.bias),
                        stride=entry.stride,
                        pad_mode=entry.pad_mode,
                        activation=entry.activation,
                    )
                )
            elif isinstance(entry, MaxPoolLayerEntry):
                layers.append(
                    MaxPoolLayer(
                        kernel=entry.kernel_size,
                        stride=entry.stride,
                        pad_mode=entry.pad_mode,
                        pad=entry.pad,
                    )
                )
            else:
                layers.append(UpsampleLayer(factor=entry.factor))
        net = NetworkSpec(
            layers=tuple(layers),
            head=read(manifest.head),
            post_pool=manifest.post_pool,
            in_channels=manifest.in_channels,
        )
        lstm = None
        if manifest.convlstm is not None:
            lstm = ConvLSTMWeights(
                **{name: read(rel) for name, rel in manifest.convlstm.model_dump().items()}
            )
    except ShapeError as err:
        raise DataError(f"Inconsistent tensors in manifest {path}: {err.message}") from err
    LOG.debug("Loaded manifest %s with %d layers", path, len(layers))
    return net, lstm
