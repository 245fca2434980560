"""NFoV piloting over saliency map sequences."""

from .linking import DEFAULT_D_MAX, link_trajectory, transition_mask
from .models import CandidateGrid, ViewpointTrajectory
from .scoring import score_sequence, score_viewangles

__all__ = [
    "DEFAULT_D_MAX",
    "CandidateGrid",
    "ViewpointTrajectory",
    "link_trajectory",
    "score_sequence",
    "score_viewangles",
    "transition_mask",
]
