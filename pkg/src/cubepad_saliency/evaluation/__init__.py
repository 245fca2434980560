"""Ground-truth heatmaps and saliency metrics."""

from .heatmap import binarize_gt, gt_heatmap
from .metrics import auc_borji, auc_judd, cc, evaluate_frame
from .models import FixationMask, FrameMetrics, MetricsReport, Viewpoint, ViewpointRecord
from .trajectories import read_viewpoints, viewpoints_by_frame, write_viewpoints

__all__ = [
    "FixationMask",
    "FrameMetrics",
    "MetricsReport",
    "Viewpoint",
    "ViewpointRecord",
    "auc_borji",
    "auc_judd",
    "binarize_gt",
    "cc",
    "evaluate_frame",
    "gt_heatmap",
    "read_viewpoints",
    "viewpoints_by_frame",
    "write_viewpoints",
]
