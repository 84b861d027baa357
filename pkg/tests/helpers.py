"""Constructed panels with known answers, shared by the analysis and acceptance tests."""
import numpy as np
import pandas as pd

from mcvi.dimensions import RawDimensionPanel
from mcvi.index import IndexPanel, WeightVector
from mcvi.normalize import Method


def identical_dimension_panel(n_countries=12, n_years=5) -> RawDimensionPanel:
    """Raw panel whose four sub-indicators are affine in one signal.

    Every normalization then yields identical d1, d2a, d2b and d3 columns,
    and each country keeps its position in every year.
    """
    rows = []
    top = 10 * n_countries + n_years
    for i in range(n_countries):
        for t in range(n_years):
            x = float(10 * (i + 1) + t)
            rows.append({
                "economy": f"C{i:02d}", "year": 2006 + t,
                "lsci": x, "mean_lsbci": x / (top + 1), "partner_count": x,
                "port_hhi": 1.0 - x / (2.0 * (top + 1)),
            })
    return RawDimensionPanel(pd.DataFrame(rows))


def index_panel(rows) -> IndexPanel:
    """IndexPanel from (economy, year, d1, d2, d3) rows with equal weights."""
    df = pd.DataFrame(rows, columns=["economy", "year", "d1", "d2", "d3"])
    df["d2a"] = df["d2"]
    df["d2b"] = df["d2"]
    df["mcvi"] = (df["d1"] + df["d2"] + df["d3"]) / 3
    return IndexPanel(df[["economy", "year", "d1", "d2a", "d2b", "d2", "d3", "mcvi"]], WeightVector.equal(), Method.POOLED_RANK)


def flat_index(values: dict, years) -> IndexPanel:
    """Every dimension equals the country's value in every year."""
    return index_panel([(e, y, v, v, v) for e, v in values.items() for y in years])


def classification(sids=(), ldc=(), lldc=(), economies=(), region="Asia") -> pd.DataFrame:
    econ = sorted(economies)
    return pd.DataFrame({
        "economy": econ, "name": econ,
        "sids": [e in sids for e in econ], "ldc": [e in ldc for e in econ], "lldc": [e in lldc for e in econ],
        "region": region,
    })
