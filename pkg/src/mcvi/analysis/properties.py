"""Descriptive statistics, inter-dimension correlations and PCA of the index panel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..index import IndexPanel
from ..stats import PcaResult, pca, pearson, spearman

COLUMNS = ("d1", "d2", "d3", "mcvi")
PAIRS = (("d1", "d2"), ("d1", "d3"), ("d2", "d3"))


@dataclass
class PropertiesReport:
    descriptive: pd.DataFrame
    correlations: pd.DataFrame
    pca: PcaResult
    extremes: dict

    def to_dict(self) -> dict:
        return {
            "descriptive": self.descriptive.reset_index().to_dict(orient="records"),
            "correlations": self.correlations.to_dict(orient="records"),
            "pca": {
                "eigenvalues": self.pca.eigenvalues.tolist(),
                "explained_shares": self.pca.explained_shares.tolist(),
                "loadings": self.pca.loadings.tolist(),
            },
            "extremes": self.extremes,
        }


def descriptive_statistics(index: IndexPanel) -> pd.DataFrame:
    d = index.data[list(COLUMNS)]
    out = pd.DataFrame({
        "min": d.min(), "max": d.max(), "mean": d.mean(), "std": d.std(ddof=1), "n": d.count(),
    })
    out.index.name = "variable"
    return out


def index_properties(index: IndexPanel) -> PropertiesReport:
    data = index.data
    rows = []
    for a, b in PAIRS:
        p = pearson(data[a], data[b])
        s = spearman(data[a], data[b])
        rows.append({"pair": f"{a}-{b}", "pearson": p.r, "spearman": s.r, "n": p.n})
    lo = data.loc[data["mcvi"].idxmin()]
    hi = data.loc[data["mcvi"].idxmax()]
    extremes = {
        "min": {"economy": lo["economy"], "year": int(lo["year"]), "mcvi": float(lo["mcvi"])},
        "max": {"economy": hi["economy"], "year": int(hi["year"]), "mcvi": float(hi["mcvi"])},
    }
    return PropertiesReport(
        descriptive_statistics(index),
        pd.DataFrame(rows),
        pca(data[["d1", "d2", "d3"]].to_numpy(dtype=float), "correlation"),
        extremes,
    )
