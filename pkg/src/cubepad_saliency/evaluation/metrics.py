"""AUC-Judd, AUC-Borji and linear correlation."""

import logging

import numpy as np
from scipy.integrate import trapezoid

from cubepad_saliency.core.exceptions import ArgumentError, DegenerateError, ShapeError
from cubepad_saliency.tensor.models import EquirectMap

from .heatmap import binarize_gt
from .models import FixationMask, FrameMetrics

LOG = logging.getLogger(__name__)

DEFAULT_SPLITS = 100
DEFAULT_THRESHOLDS = 100


def _values_and_fixations(pred: EquirectMap, fix: FixationMask) -> tuple[np.ndarray, np.ndarray]:
    if pred.dims[1:] != fix.mask.dims[1:] or pred.channels != 1:
        raise ShapeError(f"Prediction {pred.dims} does not match fixation mask {fix.mask.dims}")
    values = pred.data[0].astype(np.float64).ravel()
    fixated = fix.pixels.ravel()
    n_fix = int(fixated.sum())
    if n_fix == 0:
        raise ArgumentError("AUC needs at least one fixation pixel")
    if n_fix == values.size:
        raise ArgumentError("AUC needs at least one non-fixation pixel")
    return values, fixated


def _count_at_least(sorted_values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    return sorted_values.size - np.searchsorted(sorted_values, thresholds, side="left")


def _roc_area(tp: np.ndarray, fp: np.ndarray) -> float:
    tp = np.concatenate([[0.0], tp, [1.0]])
    fp = np.concatenate([[0.0], fp, [1.0]])
    return float(trapezoid(tp, fp))


def auc_judd(pred: EquirectMap, fix: FixationMask) -> float:
    """ROC area with fixations as positives and all other pixels as negatives.

    Thresholds are the distinct predicted values at fixations, swept from high to low.
    """
    values, fixated = _values_and_fixations(pred, fix)
    at_fix = np.sort(values[fixated])
    thresholds = np.unique(at_fix)[::-1]
    above_fix = _count_at_least(at_fix, thresholds)
    above_all = _count_at_least(np.sort(values), thresholds)
    n_fix = at_fix.size
    tp = above_fix / n_fix
    fp = (above_all - above_fix) / (values.size - n_fix)
    return _roc_area(tp, fp)


def auc_borji(
    pred: EquirectMap,
    fix: FixationMask,
    n_splits: int = DEFAULT_SPLITS,
    seed: int = 0,
    n_thresholds: int = DEFAULT_THRESHOLDS,
) -> float:
    """ROC area against uniformly sampled negatives, averaged over seeded splits.

    Each split draws as many pixels (with replacement) as there are fixations. The prediction
    is min-max normalized and thresholds form an evenly spaced grid from 1 down to 0.
    """
    if n_splits < 1 or n_thresholds < 2:
        raise ArgumentError(
            f"Need n_splits >= 1 and n_thresholds >= 2, got {n_splits} and {n_thresholds}"
        )
    values, fixated = _values_and_fixations(pred, fix)
    lo, hi = values.min(), values.max()
    values = (values - lo) / (hi - lo) if hi > lo else np.zeros_like(values)
    at_fix = np.sort(values[fixated])
    thresholds = np.linspace(1.0, 0.0, n_thresholds)
    tp = _count_at_least(at_fix, thresholds) / at_fix.size

    areas = np.empty(n_splits, dtype=np.float64)
    for split, child in enumerate(np.random.SeedSequence(seed).spawn(n_splits)):
        rng = np.random.default_rng(child)
        negatives = np.sort(values[rng.integers(0, values.size, size=at_fix.size)])
        fp = _count_at_least(negatives, thresholds) / negatives.size
        areas[split] = _roc_area(tp, fp)
    return float(areas.mean())


def cc(pred: EquirectMap, gt: EquirectMap) -> float:
    """Pearson correlation of two maps, clipped to [-1, 1]."""
    if pred.dims != gt.dims:
        raise ShapeError(f"Maps differ in dims: {pred.dims} vs {gt.dims}")
    a = pred.data.astype(np.float64).ravel()
    b = gt.data.astype(np.float64).ravel()
    std_a, std_b = a.std(), b.std()
    if std_a == 0.0 or std_b == 0.0:
        raise DegenerateError("Correlation is undefined for a constant map")
    r = np.mean((a - a.mean()) / std_a * ((b - b.mean()) / std_b))
    return float(np.clip(r, -1.0, 1.0))


def evaluate_frame(
    frame: int,
    pred: EquirectMap,
    heatmap: EquirectMap,
    *,
    n_splits: int = DEFAULT_SPLITS,
    seed: int = 0,
) -> FrameMetrics:
    """All three metrics of one predicted frame against its ground-truth heatmap."""
    fix = binarize_gt(heatmap)
    LOG.debug("Frame %d: %d fixation pixels", frame, fix.count)
    return FrameMetrics(
        frame=frame,
        auc_judd=auc_judd(pred, fix),
        auc_borji=auc_borji(pred, fix, n_splits=n_splits, seed=seed),
        cc=cc(pred, heatmap),
    )
