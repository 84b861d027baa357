"""Vulnerability-oriented normalization of the raw dimension indicators.

The baseline is the pooled fractional rank: each observation's average rank
among all non-missing observations of the column, divided by their count, with
the column oriented so that larger scores mean more vulnerable. Orientation is
done by negating the raw values before ranking.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .dimensions import RAW_COLUMNS, RawDimensionPanel
from .errors import AllMissing, ConstantColumn
from .ranking import average_ranks


class Direction(enum.Enum):
    LOWER_IS_VULNERABLE = "lower"
    HIGHER_IS_VULNERABLE = "higher"


class Method(str, enum.Enum):
    POOLED_RANK = "pooled-rank"
    WITHIN_YEAR_RANK = "within-year"
    POOLED_MINMAX = "minmax"


SUB_INDICATORS = ("d1", "d2a", "d2b", "d3")
DIRECTIONS = {
    "d1": Direction.LOWER_IS_VULNERABLE,
    "d2a": Direction.LOWER_IS_VULNERABLE,
    "d2b": Direction.LOWER_IS_VULNERABLE,
    "d3": Direction.HIGHER_IS_VULNERABLE,
}
SOURCE_COLUMN = dict(zip(SUB_INDICATORS, RAW_COLUMNS))


def _oriented(values, direction: Direction) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    return -x if direction is Direction.LOWER_IS_VULNERABLE else x


def pooled_fractional_rank(values, direction: Direction) -> np.ndarray:
    """Average rank of each oriented value over the N non-missing values, divided by N.

    >>> pooled_fractional_rank([10, 20, 20, 40], Direction.HIGHER_IS_VULNERABLE).tolist()
    [0.25, 0.625, 0.625, 1.0]
    """
    x = _oriented(values, direction)
    ok = ~np.isnan(x)
    n = int(ok.sum())
    if n == 0:
        raise AllMissing("column has no non-missing values")
    out = np.full(x.shape, np.nan)
    out[ok] = average_ranks(x[ok]) / n
    return out


def within_year_rank(values, years, direction: Direction) -> np.ndarray:
    """Fractional ranks computed separately within each year.

    Years with no observed value stay missing; only a column with no
    observed value at all is an error.
    """
    x = _oriented(values, direction)
    years = np.asarray(years)
    ok = ~np.isnan(x)
    if not ok.any():
        raise AllMissing("column has no non-missing values")
    out = np.full(x.shape, np.nan)
    for year in np.unique(years[ok]):
        sel = ok & (years == year)
        out[sel] = average_ranks(x[sel]) / sel.sum()
    return out


def pooled_minmax(values, direction: Direction) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    ok = ~np.isnan(x)
    if not ok.any():
        raise AllMissing("column has no non-missing values")
    lo, hi = x[ok].min(), x[ok].max()
    if not hi > lo:
        raise ConstantColumn(f"min-max normalization of a constant column (value {lo})")
    out = (x - lo) / (hi - lo)
    if direction is Direction.LOWER_IS_VULNERABLE:
        out = 1.0 - out
    return out


def raw_matrix(raw: RawDimensionPanel) -> np.ndarray:
    """(n, 4) float matrix of raw indicators in SUB_INDICATORS order.

    A partner count of zero means the economy-year has no LSBCI coverage, so
    it is treated as missing rather than ranked as a genuine zero.
    """
    m = raw.data[list(RAW_COLUMNS)].to_numpy(dtype=float, copy=True)
    pc = m[:, 2]
    pc[pc == 0] = np.nan
    return m


def normalize_matrix(raw: np.ndarray, years: np.ndarray, method: Method | str) -> np.ndarray:
    method = Method(method)
    out = np.empty_like(raw, dtype=float)
    for j, name in enumerate(SUB_INDICATORS):
        col, direction = raw[:, j], DIRECTIONS[name]
        if method is Method.POOLED_RANK:
            out[:, j] = pooled_fractional_rank(col, direction)
        elif method is Method.WITHIN_YEAR_RANK:
            out[:, j] = within_year_rank(col, years, direction)
        else:
            out[:, j] = pooled_minmax(col, direction)
    return out


@dataclass(frozen=True)
class NormalizedPanel:
    """Normalized sub-indicators; ``data`` has economy, year, d1, d2a, d2b, d2, d3, complete."""

    data: pd.DataFrame
    method: Method

    def __len__(self) -> int:
        return len(self.data)

    def complete_rows(self) -> pd.DataFrame:
        return self.data[self.data["complete"]]


def assemble(keys: pd.DataFrame, norm: np.ndarray, method: Method) -> NormalizedPanel:
    data = keys[["economy", "year"]].reset_index(drop=True).copy()
    for j, name in enumerate(SUB_INDICATORS):
        data[name] = norm[:, j]
    data["d2"] = (data["d2a"] + data["d2b"]) / 2.0
    data = data[["economy", "year", "d1", "d2a", "d2b", "d2", "d3"]]
    data["complete"] = ~np.isnan(norm).any(axis=1)
    return NormalizedPanel(data, Method(method))


def normalize_panel(raw: RawDimensionPanel, method: Method | str = Method.POOLED_RANK) -> NormalizedPanel:
    if len(raw) == 0:
        raise AllMissing("raw panel is empty")
    years = raw.data["year"].to_numpy()
    norm = normalize_matrix(raw_matrix(raw), years, method)
    return assemble(raw.data, norm, Method(method))
