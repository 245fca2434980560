"""Spherical coordinate math: projections, NFoV rendering and rotation."""

from .geometry import (
    FACE_AXES,
    cubemap_to_equirect,
    cubemap_yaw_quarter_turn,
    dir_to_equirect,
    equirect_to_cubemap,
    face_direction,
    great_circle,
    render_nfov,
    rotate_sphere,
    rotate_viewpoint,
)
from .models import FaceAxes, FaceId, NFoVSpec, SphericalDirection

__all__ = [
    "FACE_AXES",
    "FaceAxes",
    "FaceId",
    "NFoVSpec",
    "SphericalDirection",
    "cubemap_to_equirect",
    "cubemap_yaw_quarter_turn",
    "dir_to_equirect",
    "equirect_to_cubemap",
    "face_direction",
    "great_circle",
    "render_nfov",
    "rotate_sphere",
    "rotate_viewpoint",
]
