"""CNN primitives, ConvLSTM and the saliency pipelines."""

from .convlstm import convlstm_step
from .layers import channel_max, conv2d, maxpool, saliency_head, upsample_bilinear
from .manifest import generate_convlstm, generate_network, load_manifest, save_manifest
from .models import (
    Activation,
    ConvLayer,
    ConvLSTMState,
    ConvLSTMWeights,
    MaxPoolLayer,
    NetworkConfig,
    NetworkManifest,
    NetworkSpec,
    PipelineMode,
    UpsampleLayer,
)
from .pipeline import forward_static, forward_temporal, normalize_map

__all__ = [
    "Activation",
    "ConvLSTMState",
    "ConvLSTMWeights",
    "ConvLayer",
    "MaxPoolLayer",
    "NetworkConfig",
    "NetworkManifest",
    "NetworkSpec",
    "PipelineMode",
    "UpsampleLayer",
    "channel_max",
    "conv2d",
    "convlstm_step",
    "forward_static",
    "forward_temporal",
    "generate_convlstm",
    "generate_network",
    "load_manifest",
    "maxpool",
    "normalize_map",
    "saliency_head",
    "save_manifest",
    "upsample_bilinear",
]
