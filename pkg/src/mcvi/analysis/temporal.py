"""Trends, rank stability and country volatility over time."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..errors import InsufficientData, InsufficientYears, ZeroVariance
from ..index import IndexPanel
from ..stats import Trend, linear_trend, spearman

MIN_VOLATILITY_YEARS = 5


@dataclass
class TrendReport:
    annual: pd.DataFrame  # per year: mean, q25, q75, dimension means, segment means, gap
    trend: Trend
    cumulative_change: float  # relative change of the annual mean, first to last year
    consecutive: pd.DataFrame  # year_from, year_to, rho, n
    split_half: dict
    first_last: dict
    volatility: pd.DataFrame  # economy, volatility, years_covered, short_coverage
    gap_first: float | None
    gap_last: float | None

    def top_volatile(self, n: int = 10) -> pd.DataFrame:
        v = self.volatility[~self.volatility["short_coverage"]]
        return v.sort_values(["volatility", "economy"], ascending=[False, True]).head(n)

    def to_dict(self) -> dict:
        return {
            "trend": {"slope": self.trend.slope, "intercept": self.trend.intercept, "r_squared": self.trend.r_squared},
            "cumulative_change": self.cumulative_change,
            "sids_gap": {"first": self.gap_first, "last": self.gap_last},
            "consecutive_rho": self.consecutive.to_dict(orient="records"),
            "split_half": self.split_half,
            "first_last": self.first_last,
            "top_volatile": self.top_volatile().to_dict(orient="records"),
        }


def _rho(a: pd.Series, b: pd.Series) -> dict:
    joined = pd.concat([a.rename("a"), b.rename("b")], axis=1, join="inner")
    n = len(joined)
    try:
        res = spearman(joined["a"], joined["b"])
        return {"rho": res.r, "p": res.p, "n": n}
    except (InsufficientData, ZeroVariance):
        # a constant cross-section carries no ordering; identical ones agree perfectly
        if n >= 1 and joined["a"].equals(joined["b"]):
            return {"rho": 1.0, "p": 0.0, "n": n}
        return {"rho": float("nan"), "p": float("nan"), "n": n}


def temporal_report(index: IndexPanel, cls: pd.DataFrame | None = None) -> TrendReport:
    data = index.data
    years = np.sort(data["year"].unique())
    if years.size < 2:
        raise InsufficientYears("temporal analysis needs at least two years")

    by_year = data.groupby("year", sort=True)
    annual = pd.DataFrame({
        "mean": by_year["mcvi"].mean(),
        "q25": by_year["mcvi"].quantile(0.25),
        "q75": by_year["mcvi"].quantile(0.75),
        "d1": by_year["d1"].mean(),
        "d2": by_year["d2"].mean(),
        "d3": by_year["d3"].mean(),
        "n": by_year.size(),
    })
    gap_first = gap_last = None
    if cls is not None:
        sids = data["economy"].map(cls.set_index("economy")["sids"]).fillna(False).astype(bool)
        annual["sids"] = data[sids].groupby("year")["mcvi"].mean()
        annual["non_sids"] = data[~sids].groupby("year")["mcvi"].mean()
        annual["gap"] = annual["sids"] - annual["non_sids"]
        gaps = annual["gap"].dropna()
        if len(gaps):
            gap_first, gap_last = float(gaps.iloc[0]), float(gaps.iloc[-1])
    annual.index.name = "year"
    annual = annual.reset_index()

    trend = linear_trend(annual["year"], annual["mean"])
    first, last = annual["mean"].iloc[0], annual["mean"].iloc[-1]
    cumulative = float((last - first) / first) if first else float("nan")

    wide = data.pivot(index="economy", columns="year", values="mcvi")
    consecutive = []
    for y0, y1 in zip(years[:-1], years[1:]):
        consecutive.append({"year_from": int(y0), "year_to": int(y1), **_rho(wide[y0].dropna(), wide[y1].dropna())})

    half = years.size // 2
    early = data[data["year"].isin(years[:half])].groupby("economy")["mcvi"].mean()
    late = data[data["year"].isin(years[half:])].groupby("economy")["mcvi"].mean()
    split_half = {
        "first_years": [int(years[0]), int(years[half - 1])],
        "second_years": [int(years[half]), int(years[-1])],
        **_rho(early, late),
    }
    first_last = {"years": [int(years[0]), int(years[-1])], **_rho(wide[years[0]].dropna(), wide[years[-1]].dropna())}

    g = data.groupby("economy", sort=True)["mcvi"]
    volatility = pd.DataFrame({"volatility": g.std(ddof=1), "years_covered": g.size()}).reset_index()
    volatility["short_coverage"] = volatility["years_covered"] < MIN_VOLATILITY_YEARS

    return TrendReport(
        annual, trend, cumulative, pd.DataFrame(consecutive), split_half, first_last,
        volatility, gap_first, gap_last,
    )
