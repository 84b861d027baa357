"""Aggregation of normalized dimensions into the MCVI and country rankings."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import DegenerateVariance, EmptyIndex, InsufficientData, InvalidWeights
from .normalize import Method, NormalizedPanel
from .stats import pca

WEIGHT_TOL = 1e-12
DIMENSIONS = ("d1", "d2", "d3")


@dataclass(frozen=True)
class WeightVector:
    w1: float
    w2: float
    w3: float

    def __post_init__(self):
        w = self.as_array()
        if np.any(~np.isfinite(w)) or np.any(w < 0):
            raise InvalidWeights(f"weights must be finite and non-negative, got {tuple(w)}")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise InvalidWeights(f"weights must sum to 1, got {w.sum()!r}")

    @classmethod
    def equal(cls) -> "WeightVector":
        return cls(1 / 3, 1 / 3, 1 / 3)

    @classmethod
    def normalized(cls, values) -> "WeightVector":
        """Rescale non-negative values to sum to one."""
        w = np.asarray(values, dtype=float)
        if w.shape != (3,) or np.any(w < 0) or not w.sum() > 0:
            raise InvalidWeights(f"cannot normalize weights {values!r}")
        w = w / w.sum()
        # push the rounding residue onto the largest weight
        w[np.argmax(w)] += 1.0 - w.sum()
        return cls(*map(float, w))

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3], dtype=float)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)


# leave-one-dimension-out variants with the remaining two at 1/2 each
DROP_D1 = WeightVector(0.0, 0.5, 0.5)
DROP_D2 = WeightVector(0.5, 0.0, 0.5)
DROP_D3 = WeightVector(0.5, 0.5, 0.0)


@dataclass(frozen=True)
class IndexPanel:
    """Complete observations with d1, d2a, d2b, d2, d3 and mcvi."""

    data: pd.DataFrame
    weights: WeightVector
    method: Method

    def __len__(self) -> int:
        return len(self.data)


def aggregate_mcvi(norm: NormalizedPanel, weights: WeightVector | None = None) -> IndexPanel:
    if weights is None:
        weights = WeightVector.equal()
    if not isinstance(weights, WeightVector):
        weights = WeightVector(*weights)
    if len(norm) == 0:
        raise EmptyIndex("normalized panel is empty")
    data = norm.complete_rows().drop(columns="complete").reset_index(drop=True)
    w = weights.as_array()
    data["mcvi"] = combine(data[["d1", "d2", "d3"]].to_numpy(), w)
    return IndexPanel(data, weights, norm.method)


def combine(dims: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Weighted sum of the three dimension columns, evaluated term by term."""
    return w[0] * dims[:, 0] + w[1] * dims[:, 1] + w[2] * dims[:, 2]


def country_means(index: IndexPanel, columns=("mcvi",)) -> pd.DataFrame:
    g = index.data.groupby("economy", sort=True)
    out = g[list(columns)].mean()
    out["years_covered"] = g.size()
    return out


def rank_scores(economies: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """Ranks with 1 = highest score; equal scores ordered by economy code."""
    order = np.lexsort((np.asarray(economies), -np.asarray(scores)))
    ranks = np.empty(len(order), dtype=np.int64)
    ranks[order] = np.arange(1, len(order) + 1)
    return ranks


def rank_countries(index: IndexPanel, min_years: int = 1) -> pd.DataFrame:
    """Country ranking by time-averaged MCVI, rank 1 = most vulnerable.

    Countries covered for fewer than ``min_years`` years stay in the ranking
    and are marked in the ``short_coverage`` column.
    """
    if min_years < 1:
        raise ValueError("min_years must be >= 1")
    if len(index) == 0:
        raise EmptyIndex("index panel has no complete observations")
    means = country_means(index).reset_index()
    means = means.rename(columns={"mcvi": "mean_mcvi"})
    means["rank"] = rank_scores(means["economy"].to_numpy(), means["mean_mcvi"].to_numpy())
    means["short_coverage"] = means["years_covered"] < min_years
    return means.sort_values("rank").reset_index(drop=True)[
        ["rank", "economy", "mean_mcvi", "years_covered", "short_coverage"]
    ]


def derive_pca_weights(norm: NormalizedPanel) -> WeightVector:
    """Absolute first-component loadings of the (d1, d2, d3) correlation matrix, scaled to sum to one."""
    dims = norm.complete_rows()[list(DIMENSIONS)].to_numpy(dtype=float)
    if dims.shape[0] < 3:
        raise InsufficientData("PCA weights need at least 3 complete rows")
    if np.any(dims.std(axis=0) == 0):
        raise DegenerateVariance("a dimension has zero variance")
    pc1 = pca(dims, "correlation").loadings[:, 0]
    if pc1.sum() < 0:
        pc1 = -pc1
    return WeightVector.normalized(np.abs(pc1))
