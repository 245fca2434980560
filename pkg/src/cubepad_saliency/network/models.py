"""Network layers, weights and the JSON documents describing them."""

from dataclasses import dataclass
from enum import StrEnum
from typing import Annotated, Literal, TypeAlias

import numpy as np
from pydantic import Field, model_validator

from cubepad_saliency.core.exceptions import ShapeError
from cubepad_saliency.padding.models import PadMode
from cubepad_saliency.tensor.models import FloatArray, Tensor
from cubepad_saliency.types.common import Model


class Activation(StrEnum):
    """Activation applied after a convolution."""

    RELU = "relu"
    NONE = "none"


class PipelineMode(StrEnum):
    """Saliency pipeline variants."""

    CP = "cp"
    ZP = "zp"
    EQUI = "equi"
    OVERLAP = "overlap"


def _as_float32(value: FloatArray) -> FloatArray:
    arr = np.array(value, dtype=np.float32, order="C")
    arr.flags.writeable = False
    return arr


# ----------------------------
# Runtime layers
# ----------------------------


@dataclass(frozen=True)
class ConvLayer:
    """Square odd-sized convolution; pad width (kh - 1) / 2 keeps the size at stride 1."""

    kernel: FloatArray
    bias: FloatArray
    stride: int = 1
    pad_mode: PadMode = PadMode.CUBE
    activation: Activation = Activation.RELU

    def __post_init__(self) -> None:
        kernel = _as_float32(self.kernel)
        bias = _as_float32(self.bias)
        if kernel.ndim != 4 or kernel.shape[2] != kernel.shape[3] or kernel.shape[2] % 2 == 0:
            raise ShapeError(
                f"Conv kernel must be [c_out, c_in, k, k] with odd k, got {list(kernel.shape)}"
            )
        if bias.shape != (kernel.shape[0],):
            raise ShapeError(f"Conv bias must be [{kernel.shape[0]}], got {list(bias.shape)}")
        if self.stride < 1:
            raise ShapeError(f"Conv stride must be positive, got {self.stride}")
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "bias", bias)

    @property
    def in_channels(self) -> int:
        return int(self.kernel.shape[1])

    @property
    def out_channels(self) -> int:
        return int(self.kernel.shape[0])

    @property
    def pad(self) -> int:
        return (int(self.kernel.shape[2]) - 1) // 2


@dataclass(frozen=True)
class MaxPoolLayer:
    """Windowed max; ``pad`` defaults to (kernel - 1) // 2."""

    kernel: int = 2
    stride: int = 2
    pad_mode: PadMode = PadMode.CUBE
    pad: int | None = None

    @property
    def pad_width(self) -> int:
        return (self.kernel - 1) // 2 if self.pad is None else self.pad


@dataclass(frozen=True)
class UpsampleLayer:
    factor: int = 2


Layer: TypeAlias = ConvLayer | MaxPoolLayer | UpsampleLayer


@dataclass(frozen=True)
class NetworkSpec:
    """Ordered trunk layers followed by the 1x1 saliency head W_fc [K, c, 1, 1]."""

    layers: tuple[Layer, ...]
    head: FloatArray
    post_pool: int = 3
    in_channels: int = 3

    def __post_init__(self) -> None:
        head = _as_float32(self.head)
        if head.ndim != 4 or head.shape[2:] != (1, 1):
            raise ShapeError(f"Head weight must be [K, c, 1, 1], got {list(head.shape)}")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "layers", tuple(self.layers))
        channels = self.in_channels
        for pos, layer in enumerate(self.layers):
            if isinstance(layer, ConvLayer):
                if layer.in_channels != channels:
                    raise ShapeError(
                        f"Layer {pos} expects {layer.in_channels} channels, gets {channels}"
                    )
                channels = layer.out_channels
        if head.shape[1] != channels:
            raise ShapeError(f"Head expects {head.shape[1]} channels, trunk yields {channels}")
        if self.post_pool < 1:
            raise ShapeError(f"Post-process pool kernel must be positive, got {self.post_pool}")

    @property
    def num_classes(self) -> int:
        return int(self.head.shape[0])


_GATES = ("i", "f", "c", "o")


@dataclass(frozen=True)
class ConvLSTMWeights:
    """ConvLSTM parameters for K state channels.

    Gate kernels are stacked in the order i, f, c, o: ``input_kernels`` and ``hidden_kernels``
    are [4, K, K, 3, 3], ``biases`` is [4, K]. Peepholes [3, K] are per-channel weights for
    the i, f and o gates.
    """

    input_kernels: FloatArray
    hidden_kernels: FloatArray
    peepholes: FloatArray
    biases: FloatArray

    def __post_init__(self) -> None:
        for name in ("input_kernels", "hidden_kernels", "peepholes", "biases"):
            object.__setattr__(self, name, _as_float32(getattr(self, name)))
        k = self.channels
        expected = {
            "input_kernels": (4, k, k, 3, 3),
            "hidden_kernels": (4, k, k, 3, 3),
            "peepholes": (3, k),
            "biases": (4, k),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ShapeError(
                    f"ConvLSTM {name} must be {list(shape)}, got {list(getattr(self, name).shape)}"
                )

    @property
    def channels(self) -> int:
        return int(self.biases.shape[-1])

    @classmethod
    def zeros(cls, k: int) -> "ConvLSTMWeights":
        return cls(
            input_kernels=np.zeros((4, k, k, 3, 3), dtype=np.float32),
            hidden_kernels=np.zeros((4, k, k, 3, 3), dtype=np.float32),
            peepholes=np.zeros((3, k), dtype=np.float32),
            biases=np.zeros((4, k), dtype=np.float32),
        )

    def with_bias(self, gate: str, value: float) -> "ConvLSTMWeights":
        """Copy with the bias of gate ``i``, ``f``, ``c`` or ``o`` set to ``value``."""
        biases = self.biases.copy()
        biases[_GATES.index(gate)] = value
        return ConvLSTMWeights(self.input_kernels, self.hidden_kernels, self.peepholes, biases)

    def tensors(self) -> dict[str, Tensor]:
        """Named tensors for serialization."""
        return {
            "input_kernels": Tensor(self.input_kernels),
            "hidden_kernels": Tensor(self.hidden_kernels),
            "peepholes": Tensor(self.peepholes),
            "biases": Tensor(self.biases),
        }


@dataclass(frozen=True)
class ConvLSTMState:
    """Hidden and cell state, both [n, K, h, w] (n = 6 on cubemaps, 1 on equirect rasters)."""

    hidden: Tensor
    cell: Tensor

    def __post_init__(self) -> None:
        if self.hidden.dims != self.cell.dims or len(self.hidden.dims) != 4:
            raise ShapeError(
                f"ConvLSTM state needs matching [n, K, h, w] tensors, got "
                f"{self.hidden.dims} and {self.cell.dims}"
            )

    @classmethod
    def zeros(cls, n: int, k: int, height: int, width: int) -> "ConvLSTMState":
        shape = (n, k, height, width)
        return cls(Tensor(np.zeros(shape, np.float32)), Tensor(np.zeros(shape, np.float32)))


# ----------------------------
# JSON documents
# ----------------------------


class ConvLayerConfig(Model):
    """Convolution entry of a generated network."""

    type: Literal["conv"] = "conv"
    out_channels: int = Field(..., ge=1, examples=[16])
    kernel_size: int = Field(3, ge=1, description="Odd kernel size.")
    stride: int = Field(1, ge=1)
    activation: Activation = Activation.RELU

    @model_validator(mode="after")
    def check_odd_kernel(self) -> "ConvLayerConfig":
        if self.kernel_size % 2 == 0:
            raise ValueError(f"kernel_size must be odd, got {self.kernel_size}")
        return self


class MaxPoolLayerConfig(Model):
    type: Literal["maxpool"] = "maxpool"
    kernel_size: int = Field(2, ge=1)
    stride: int = Field(2, ge=1)


class UpsampleLayerConfig(Model):
    type: Literal["upsample"] = "upsample"
    factor: int = Field(2, ge=1)


LayerConfig = Annotated[
    ConvLayerConfig | MaxPoolLayerConfig | UpsampleLayerConfig, Field(discriminator="type")
]


class NetworkConfig(Model):
    """Layer list for the seeded toy network generator."""

    in_channels: int = Field(3, ge=1)
    layers: list[LayerConfig] = Field(
        default_factory=lambda: [
            ConvLayerConfig(out_channels=8),
            MaxPoolLayerConfig(),
            ConvLayerConfig(out_channels=16),
        ]
    )
    num_classes: int = Field(4, ge=1, description="Saliency head classes K.")
    post_pool: int = Field(3, ge=1, description="Post-process max-pool kernel (stride 1).")
    convlstm: bool = Field(False, description="Also generate ConvLSTM weights.")


class ConvLayerEntry(Model):
    """Manifest entry of a convolution with weights stored in CPT1 files."""

    type: Literal["conv"] = "conv"
    kernel: str = Field(..., description="Relative path of the [c_out, c_in, k, k] kernel.")
    bias: str = Field(..., description="Relative path of the [c_out] bias.")
    stride: int = Field(1, ge=1)
    pad_mode: PadMode = PadMode.CUBE
    activation: Activation = Activation.RELU


class MaxPoolLayerEntry(Model):
    type: Literal["maxpool"] = "maxpool"
    kernel_size: int = Field(2, ge=1)
    stride: int = Field(2, ge=1)
    pad_mode: PadMode = PadMode.CUBE
    pad: int | None = Field(None, ge=0)


ManifestLayer = Annotated[
    ConvLayerEntry | MaxPoolLayerEntry | UpsampleLayerConfig, Field(discriminator="type")
]


class ConvLSTMEntry(Model):
    """Relative paths of the stacked ConvLSTM tensors."""

    input_kernels: str
    hidden_kernels: str
    peepholes: str
    biases: str


class NetworkManifest(Model):
    """On-disk description of a network and optional ConvLSTM weights."""

    format_version: Literal[1] = 1
    in_channels: int = Field(3, ge=1)
    layers: list[ManifestLayer] = Field(default_factory=list)
    head: str = Field(..., description="Relative path of the [K, c, 1, 1] head weight.")
    post_pool: int = Field(3, ge=1)
    convlstm: ConvLSTMEntry | None = None
