"""Independent-region label model: per-region volumes and foreground probabilities.

A structure is modeled as an ordered list of regions. Each region either belongs
to the structure or not, independently of the others, with a fixed probability.
All risk analysis in this package is carried out over this model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "RegionSpec",
    "RegionModel",
    "PredictionVector",
    "GroupedForm",
    "canonical_abc",
    "expected_volume",
    "grouped_form",
]


@dataclass(frozen=True)
class RegionSpec:
    """One region: its volume and the probability that it truly is foreground."""

    volume: float
    true_prob: float

    def __post_init__(self):
        if not (math.isfinite(self.volume) and self.volume > 0):
            raise ValueError(f"region volume must be finite and > 0, got {self.volume}")
        if not 0.0 <= self.true_prob <= 1.0:
            raise ValueError(f"true_prob must lie in [0, 1], got {self.true_prob}")


@dataclass(frozen=True)
class RegionModel:
    """Ordered collection of independent regions."""

    regions: tuple[RegionSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        if not self.regions:
            raise ValueError("a model needs at least one region")
        total = math.fsum(r.volume for r in self.regions)
        if not (math.isfinite(total) and total > 0):
            raise ValueError(f"total volume must be finite and > 0, got {total}")

    @classmethod
    def from_arrays(cls, volumes, true_probs) -> RegionModel:
        volumes = np.asarray(volumes, dtype=float).ravel()
        true_probs = np.asarray(true_probs, dtype=float).ravel()
        if volumes.shape != true_probs.shape:
            raise ValueError("volumes and true_probs must have the same length")
        return cls(tuple(RegionSpec(float(v), float(p)) for v, p in zip(volumes, true_probs)))

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    @cached_property
    def volumes(self) -> np.ndarray:
        return np.array([r.volume for r in self.regions])

    @cached_property
    def true_probs(self) -> np.ndarray:
        return np.array([r.true_prob for r in self.regions])

    def true_prediction(self) -> PredictionVector:
        """The prediction that matches the regions' own probabilities."""
        return PredictionVector(tuple(r.true_prob for r in self.regions))

    def check_prediction(self, pred: PredictionVector) -> None:
        if len(pred.probs) != self.n_regions:
            raise ValueError(
                f"prediction has {len(pred.probs)} entries for a model "
                f"with {self.n_regions} regions"
            )


@dataclass(frozen=True)
class PredictionVector:
    """One predicted foreground probability per region of a model."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.probs:
            raise ValueError("prediction needs at least one entry")
        for p in self.probs:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"predicted probabilities must lie in [0, 1], got {p}")

    @classmethod
    def from_array(cls, values) -> PredictionVector:
        return cls(tuple(np.asarray(values, dtype=float).ravel()))

    def as_array(self) -> np.ndarray:
        return np.array(self.probs)


def canonical_abc(
    mu: float,
    p_beta: float,
    n_sub: int,
    s_alpha: float = 100.0,
    s_gamma: float = 1.0,
) -> RegionModel:
    """Three-part model used throughout the sweeps.

    Region order is fixed: a certain background region of volume ``s_alpha``,
    ``n_sub`` equally sized uncertain sub-regions of total volume ``mu`` and
    probability ``p_beta``, and a certain foreground region of volume
    ``s_gamma``. With ``s_gamma`` = 1, ``mu`` is the uncertain-to-certain
    volume ratio.
    """
    if not (math.isfinite(mu) and mu > 0):
        raise ValueError(f"mu must be finite and > 0, got {mu}")
    if not 0.0 <= p_beta <= 1.0:
        raise ValueError(f"p_beta must lie in [0, 1], got {p_beta}")
    if int(n_sub) != n_sub or n_sub < 1:
        raise ValueError(f"n_sub must be a positive integer, got {n_sub}")
    n_sub = int(n_sub)
    sub = RegionSpec(mu / n_sub, float(p_beta))
    return RegionModel((RegionSpec(s_alpha, 0.0), *([sub] * n_sub), RegionSpec(s_gamma, 1.0)))


def expected_volume(model: RegionModel, probs=None) -> float:
    """Expected structure volume, sum of volume_j * prob_j.

    ``probs`` may be a PredictionVector, an array-like of per-region
    probabilities, or None for the model's own probabilities.
    """
    if probs is None:
        q = model.true_probs
    else:
        if not isinstance(probs, PredictionVector):
            probs = PredictionVector.from_array(probs)
        model.check_prediction(probs)
        q = probs.as_array()
    return float(np.dot(model.volumes, q))


@dataclass(frozen=True)
class GroupedForm:
    """Canonical decomposition: certain background, identical uncertain sub-regions,
    certain foreground."""

    s_alpha: float
    n_sub: int
    s_sub: float
    p_sub: float
    s_gamma: float


def grouped_form(model: RegionModel, tol: float = 1e-12) -> GroupedForm | None:
    """Return the canonical decomposition of ``model``, or None if it has none.

    Matches models whose first region is certainly background (prob 0), whose
    last region is certainly foreground (prob 1), and whose middle regions all
    share one volume and one probability (within ``tol``, relative for volumes).
    """
    if model.n_regions < 3:
        return None
    first, *mid, last = model.regions
    if first.true_prob != 0.0 or last.true_prob != 1.0:
        return None
    v0, p0 = mid[0].volume, mid[0].true_prob
    for r in mid[1:]:
        if abs(r.volume - v0) > tol * max(1.0, abs(v0)):
            return None
        if abs(r.true_prob - p0) > tol:
            return None
    return GroupedForm(first.volume, len(mid), v0, p0, last.volume)
