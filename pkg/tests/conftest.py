"""Shared fixtures: seeded generators and synthetic spherical maps."""

import math

import numpy as np
import pytest

from cubepad_saliency.network.manifest import generate_network
from cubepad_saliency.network.models import Activation, ConvLayer, NetworkConfig, NetworkSpec
from cubepad_saliency.padding.models import PadMode
from cubepad_saliency.sphere.geometry import angles_to_directions, equirect_directions
from cubepad_saliency.tensor.models import CubeMap, EquirectMap


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20180601)


def smooth_sphere_map(p: int, channels: int = 1) -> EquirectMap:
    """A low-order polynomial of the direction vector, sampled at pixel centers."""
    d = equirect_directions(p, p // 2)
    x, y, z = d[..., 0], d[..., 1], d[..., 2]
    planes = [0.5 + 0.3 * x + 0.2 * y * z - 0.1 * z + 0.05 * c * x * y for c in range(channels)]
    return EquirectMap(np.stack(planes).astype(np.float32))


def blob_map(p: int, lon_deg: float, lat_deg: float, sigma_deg: float = 10.0) -> EquirectMap:
    """Great-circle Gaussian blob centered at (lon, lat), peak 1."""
    center = angles_to_directions(math.radians(lon_deg), math.radians(lat_deg))
    d = equirect_directions(p, p // 2)
    angle = np.degrees(np.arccos(np.clip(d @ center, -1.0, 1.0)))
    return EquirectMap(np.exp(-(angle**2) / (2 * sigma_deg**2))[None].astype(np.float32))


@pytest.fixture
def smooth_map() -> EquirectMap:
    return smooth_sphere_map(128)


@pytest.fixture
def random_cubemap(rng: np.random.Generator) -> CubeMap:
    return CubeMap(rng.standard_normal((6, 2, 8, 8)).astype(np.float32))


@pytest.fixture
def toy_net() -> NetworkSpec:
    """Default seeded toy network: conv8, maxpool, conv16, four classes."""
    return generate_network(NetworkConfig(), seed=0)


def box_blur_net(channels: int = 1) -> NetworkSpec:
    """One 3x3 mean filter per channel, identity head, no post-pool smoothing."""
    kernel = np.zeros((channels, channels, 3, 3), dtype=np.float32)
    for c in range(channels):
        kernel[c, c] = 1.0 / 9.0
    layer = ConvLayer(
        kernel=kernel,
        bias=np.zeros(channels, dtype=np.float32),
        pad_mode=PadMode.CUBE,
        activation=Activation.NONE,
    )
    head = np.eye(channels, dtype=np.float32).reshape(channels, channels, 1, 1)
    return NetworkSpec(layers=(layer,), head=head, post_pool=1, in_channels=channels)
