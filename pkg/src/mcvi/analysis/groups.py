"""MCVI by country classification."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..index import IndexPanel
from ..ingest import REGIONS

FLAGS = (("sids", "SIDS", "Non-SIDS"), ("ldc", "LDC", "Non-LDC"), ("lldc", "LLDC", "Non-LLDC"))


@dataclass
class GroupReport:
    table: pd.DataFrame  # partition, group, mean, std, n, defined
    gaps: dict
    country_weighted: bool = False

    def group(self, name: str) -> pd.Series:
        return self.table.set_index("group").loc[name]

    def to_dict(self) -> dict:
        return {
            "weighting": "country" if self.country_weighted else "observation",
            "groups": self.table.to_dict(orient="records"),
            "gaps": self.gaps,
        }


def _with_classes(index: IndexPanel, cls: pd.DataFrame) -> pd.DataFrame:
    return index.data.merge(cls[["economy", "sids", "ldc", "lldc", "region"]], on="economy", how="left")


def _stats(values: pd.Series) -> tuple[float, float, int]:
    n = int(values.count())
    mean = float(values.mean()) if n else float("nan")
    std = float(values.std(ddof=1)) if n > 1 else float("nan")
    return mean, std, n


def group_statistics(index: IndexPanel, cls: pd.DataFrame, *, country_weighted: bool = False) -> GroupReport:
    """Mean, std and count of MCVI per classification group.

    Observation-weighted by default (each country-year counts once); with
    ``country_weighted`` the unit is the country's time-averaged score.
    """
    data = _with_classes(index, cls)
    if country_weighted:
        data = (
            data.groupby("economy", sort=True)
            .agg(mcvi=("mcvi", "mean"), sids=("sids", "first"), ldc=("ldc", "first"),
                 lldc=("lldc", "first"), region=("region", "first"))
            .reset_index()
        )
    rows = []
    gaps = {}
    for flag, yes, no in FLAGS:
        member = data[flag].fillna(False).astype(bool)
        for label, sel in ((no, ~member), (yes, member)):
            mean, std, n = _stats(data.loc[sel, "mcvi"])
            rows.append({"partition": flag, "group": label, "mean": mean, "std": std, "n": n, "defined": n > 0})
        in_mean = rows[-1]["mean"]
        out_mean = rows[-2]["mean"]
        gaps[f"{yes}-{no}"] = in_mean - out_mean
    for region in REGIONS:
        mean, std, n = _stats(data.loc[data["region"] == region, "mcvi"])
        rows.append({"partition": "region", "group": region, "mean": mean, "std": std, "n": n, "defined": n > 0})
    return GroupReport(pd.DataFrame(rows), gaps, country_weighted)
