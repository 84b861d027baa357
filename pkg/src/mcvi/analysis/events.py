"""Disruption event studies: pre-crisis MCVI against the change in trade openness."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..errors import InsufficientData, InvalidConfig, ZeroVariance
from ..index import IndexPanel
from ..stats import mann_whitney, spearman

MIN_EVENT_COUNTRIES = 8


@dataclass(frozen=True)
class EventSpec:
    name: str
    pre_year: int
    crisis_year: int
    outcome: str = "trade_open"

    def __post_init__(self):
        if not self.pre_year < self.crisis_year:
            raise InvalidConfig(f"event {self.name}: pre_year must precede crisis_year")
        if self.outcome != "trade_open":
            raise InvalidConfig(f"event {self.name}: unsupported outcome {self.outcome!r}")


COVID_19 = EventSpec("covid19", 2019, 2020)
FINANCIAL_CRISIS = EventSpec("financial_crisis", 2008, 2009)
# route-specific shock; a null correlation is the expected, discriminating result
RED_SEA = EventSpec("red_sea", 2023, 2024)
PRESET_EVENTS = (COVID_19, FINANCIAL_CRISIS, RED_SEA)


@dataclass
class EventReport:
    spec: EventSpec
    n: int
    countries: pd.DataFrame  # economy, mcvi_pre, outcome_pre, outcome_crisis, pct_change, quartile
    quartiles: pd.DataFrame  # quartile, n, mean_change, mcvi_min, mcvi_max
    rho: float
    rho_p: float
    mw_u: float
    mw_p: float
    sids_comparison: dict | None = None

    def to_dict(self) -> dict:
        return {
            "event": self.spec.name,
            "pre_year": self.spec.pre_year,
            "crisis_year": self.spec.crisis_year,
            "n": self.n,
            "quartiles": self.quartiles.to_dict(orient="records"),
            "spearman_rho": self.rho,
            "spearman_p": self.rho_p,
            "mann_whitney_u_q4_vs_q1": self.mw_u,
            "mann_whitney_p": self.mw_p,
            "sids_comparison": self.sids_comparison,
        }


def quartile_sizes(n: int) -> list[int]:
    """Four group sizes differing by at most one; extra members go to the lower quartiles."""
    q, r = divmod(n, 4)
    return [q + 1 if i < r else q for i in range(4)]


def event_study(index: IndexPanel, ext: pd.DataFrame, spec: EventSpec, cls: pd.DataFrame | None = None) -> EventReport:
    data = index.data
    lo, hi = int(data["year"].min()), int(data["year"].max())
    if not (lo <= spec.pre_year <= hi):
        raise InsufficientData(f"event {spec.name}: pre-crisis year {spec.pre_year} outside panel {lo}-{hi}")
    pre = data.loc[data["year"] == spec.pre_year, ["economy", "mcvi"]].rename(columns={"mcvi": "mcvi_pre"})
    out = ext[["economy", "year", spec.outcome]]
    o_pre = out[out["year"] == spec.pre_year].drop(columns="year").rename(columns={spec.outcome: "outcome_pre"})
    o_cri = out[out["year"] == spec.crisis_year].drop(columns="year").rename(columns={spec.outcome: "outcome_crisis"})
    c = pre.merge(o_pre, on="economy").merge(o_cri, on="economy")
    c = c[(c["outcome_pre"] > 0) & c["outcome_crisis"].notna()]
    if len(c) < MIN_EVENT_COUNTRIES:
        raise InsufficientData(f"event {spec.name}: {len(c)} eligible countries, need {MIN_EVENT_COUNTRIES}")

    c = c.sort_values(["mcvi_pre", "economy"], kind="mergesort").reset_index(drop=True)
    c["pct_change"] = 100.0 * (c["outcome_crisis"] - c["outcome_pre"]) / c["outcome_pre"]
    c["quartile"] = np.repeat(np.arange(1, 5), quartile_sizes(len(c)))

    quart = (
        c.groupby("quartile")
        .agg(n=("economy", "size"), mean_change=("pct_change", "mean"),
             mcvi_min=("mcvi_pre", "min"), mcvi_max=("mcvi_pre", "max"))
        .reset_index()
    )
    try:
        res = spearman(c["mcvi_pre"], c["pct_change"])
        rho, rho_p = res.r, res.p
    except ZeroVariance:
        rho, rho_p = float("nan"), float("nan")
    mw = mann_whitney(c.loc[c["quartile"] == 4, "pct_change"], c.loc[c["quartile"] == 1, "pct_change"])

    sids_cmp = None
    if cls is not None:
        flag = c["economy"].map(cls.set_index("economy")["sids"]).fillna(False).astype(bool)
        if flag.any() and (~flag).any():
            t = mann_whitney(c.loc[flag, "pct_change"], c.loc[~flag, "pct_change"])
            sids_cmp = {
                "sids_mean_change": float(c.loc[flag, "pct_change"].mean()),
                "non_sids_mean_change": float(c.loc[~flag, "pct_change"].mean()),
                "n_sids": int(flag.sum()),
                "mann_whitney_p": t.p,
            }
    return EventReport(spec, len(c), c, quart, rho, rho_p, mw.u, mw.p, sids_cmp)
