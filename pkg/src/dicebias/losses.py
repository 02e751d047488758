"""Element-level loss kernels on dense probability maps.

Dice score on binary maps, soft Dice and binary cross-entropy on probability
maps, plus the exact gradients of the two differentiable losses (needed by the
toy trainer and checked against finite differences in the tests).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "CE_CLAMP",
    "as_prob_map",
    "as_binary_map",
    "dice_score",
    "soft_dice_loss",
    "soft_dice_grad",
    "cross_entropy_loss",
    "cross_entropy_grad",
    "map_volume",
]

# Predicted probabilities are clipped to [CE_CLAMP, 1 - CE_CLAMP] inside the
# cross-entropy kernels so the logs stay finite; small enough not to move any
# optimum at the tolerances used here.
CE_CLAMP = 1e-12


def as_prob_map(values) -> np.ndarray:
    """Validate and return a flat probability map (entries in [0, 1])."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < 1:
        raise ValueError("probability map must have at least one element")
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise ValueError("probability map entries must lie in [0, 1]")
    return arr


def as_binary_map(values) -> np.ndarray:
    """Validate and return a flat binary map (entries exactly 0 or 1)."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < 1:
        raise ValueError("label map must have at least one element")
    if not np.all((arr == 0.0) | (arr == 1.0)):
        raise ValueError("label map entries must be exactly 0 or 1")
    return arr


def _pair(a, b, caster):
    x, y = caster(a), caster(b)
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    return x, y


def dice_score(a, b) -> float:
    """Overlap score 2|a n b| / (|a| + |b|) between two binary maps.

    Two empty maps score 1: a perfect match of empty structures.
    """
    x, y = _pair(a, b, as_binary_map)
    denom = x.sum() + y.sum()
    if denom == 0.0:
        return 1.0
    return float(2.0 * np.dot(x, y) / denom)


def soft_dice_loss(pred, target, smooth: float = 0.0) -> float:
    """Soft Dice loss 1 - 2*sum(pred*target) / (sum(pred) + sum(target)).

    ``smooth`` is added to both the numerator and denominator sums (off by
    default). Two all-zero maps give loss 0 by convention.
    """
    p, t = _pair(pred, target, as_prob_map)
    denom = p.sum() + t.sum() + smooth
    if denom == 0.0:
        return 0.0
    return float(1.0 - (2.0 * np.dot(p, t) + smooth) / denom)


def soft_dice_grad(pred, target, smooth: float = 0.0) -> np.ndarray:
    """Exact partials of soft_dice_loss w.r.t. each predicted probability."""
    p, t = _pair(pred, target, as_prob_map)
    denom = p.sum() + t.sum() + smooth
    if denom == 0.0:
        raise ValueError("soft Dice gradient undefined for two empty maps without smoothing")
    num = 2.0 * np.dot(p, t) + smooth
    return -(2.0 * t * denom - num) / denom**2


def cross_entropy_loss(pred, target) -> float:
    """Binary cross-entropy summed over elements; targets may be probabilistic."""
    p, t = _pair(pred, target, as_prob_map)
    q = np.clip(p, CE_CLAMP, 1.0 - CE_CLAMP)
    return float(-np.sum(t * np.log(q) + (1.0 - t) * np.log1p(-q)))


def cross_entropy_grad(pred, target) -> np.ndarray:
    """Exact partials of cross_entropy_loss w.r.t. each predicted probability."""
    p, t = _pair(pred, target, as_prob_map)
    q = np.clip(p, CE_CLAMP, 1.0 - CE_CLAMP)
    return -t / q + (1.0 - t) / (1.0 - q)


def map_volume(values, voxel_volume: float = 1.0) -> float:
    """Expected volume of a probability map: voxel volume times the sum of entries."""
    if not voxel_volume > 0:
        raise ValueError(f"voxel_volume must be > 0, got {voxel_volume}")
    return float(voxel_volume * as_prob_map(values).sum())
