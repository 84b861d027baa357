"""External validation: correlations with LPI and freight rates, and panel regressions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..errors import InsufficientData, NoWithinVariation, ZeroVariance
from ..index import IndexPanel
from ..stats import HausmanResult, RegressionResult, fixed_effects, hausman, ols_clustered, random_effects, spearman

EXTERNAL_INDICATORS = (("lpi", "LPI"), ("freight_advalorem", "Ad valorem freight rate"))
MIN_WAVE_COUNTRIES = 3


def convergent_validity(index: IndexPanel, ext: pd.DataFrame) -> pd.DataFrame:
    """Spearman rho between each year's MCVI and each available external indicator.

    Years with fewer than three matched countries are listed with status
    ``insufficient_overlap`` and no rho.
    """
    merged = index.data[["economy", "year", "mcvi"]].merge(ext, on=["economy", "year"], how="inner")
    rows = []
    for col, label in EXTERNAL_INDICATORS:
        if col not in ext:
            continue
        waves = np.sort(ext.loc[ext[col].notna(), "year"].unique())
        for year in waves:
            sub = merged[(merged["year"] == year) & merged[col].notna()]
            row = {"indicator": col, "label": label, "year": int(year), "n": len(sub)}
            if len(sub) < MIN_WAVE_COUNTRIES:
                rows.append({**row, "rho": np.nan, "p": np.nan, "status": "insufficient_overlap"})
                continue
            try:
                res = spearman(sub["mcvi"], sub[col])
                rows.append({**row, "rho": res.r, "p": res.p, "status": "ok"})
            except ZeroVariance:
                rows.append({**row, "rho": np.nan, "p": np.nan, "status": "zero_variance"})
    return pd.DataFrame(rows, columns=["indicator", "label", "year", "rho", "p", "n", "status"])


def convergent_summary(table: pd.DataFrame) -> dict:
    ok = table[table["status"] == "ok"]
    return {
        col: {"mean_rho": float(g["rho"].mean()), "waves": int(len(g))}
        for col, g in ok.groupby("indicator")
    }


@dataclass
class RegressionReport:
    models: dict[str, RegressionResult]
    fe: RegressionResult | None
    re: RegressionResult | None
    hausman: HausmanResult | None
    n_obs: int
    n_countries: int
    n_dropped_nonpositive: int
    n_dropped_missing: int
    notes: list

    def table(self) -> pd.DataFrame:
        """Coefficient / t-statistic layout, one column per model."""
        rows = []
        fits = dict(self.models)
        if self.fe is not None:
            fits["FE"] = self.fe
        if self.re is not None:
            fits["RE"] = self.re
        for label, res in fits.items():
            for name, c, s, t, p in zip(res.names, res.coef, res.se, res.tstat, res.pvalues):
                rows.append({"model": label, "term": name, "coef": c, "se": s, "t": t, "p": p})
            rows.append({"model": label, "term": "r_squared", "coef": res.r_squared})
            rows.append({"model": label, "term": "n_obs", "coef": res.n_obs})
        return pd.DataFrame(rows, columns=["model", "term", "coef", "se", "t", "p"])

    def to_dict(self) -> dict:
        return {
            "models": {k: v.to_dict() for k, v in self.models.items()},
            "fe": self.fe.to_dict() if self.fe else None,
            "re": self.re.to_dict() if self.re else None,
            "hausman": None if self.hausman is None else {
                "statistic": self.hausman.statistic, "p": self.hausman.p, "dof": self.hausman.dof,
                "terms": list(self.hausman.names), "pseudo_inverse": self.hausman.pseudo_inverse,
            },
            "n_obs": self.n_obs,
            "n_countries": self.n_countries,
            "dropped_nonpositive": self.n_dropped_nonpositive,
            "dropped_missing": self.n_dropped_missing,
            "notes": self.notes,
        }


def regression_sample(index: IndexPanel, ext: pd.DataFrame, cls: pd.DataFrame) -> tuple[pd.DataFrame, int, int]:
    merged = (
        index.data[["economy", "year", "mcvi"]]
        .merge(ext[["economy", "year", "gdp_pc", "trade_open"]], on=["economy", "year"], how="inner")
        .merge(cls[["economy", "sids", "ldc"]], on="economy", how="left")
    )
    missing = merged["gdp_pc"].isna() | merged["trade_open"].isna()
    n_missing = int(missing.sum())
    merged = merged[~missing]
    nonpos = (merged["gdp_pc"] <= 0) | (merged["trade_open"] <= 0)
    n_nonpos = int(nonpos.sum())
    merged = merged[~nonpos].copy()
    merged["log_gdp_pc"] = np.log(merged["gdp_pc"])
    merged["log_trade_open"] = np.log(merged["trade_open"])
    merged["sids"] = merged["sids"].fillna(False).astype(float)
    merged["ldc"] = merged["ldc"].fillna(False).astype(float)
    return merged.sort_values(["economy", "year"]).reset_index(drop=True), n_nonpos, n_missing


def _pooled(sample: pd.DataFrame, regressors: list[str]) -> RegressionResult:
    X = np.column_stack([np.ones(len(sample)), sample[regressors].to_numpy(dtype=float)])
    return ols_clustered(sample["mcvi"].to_numpy(), X, sample["economy"].to_numpy(), ["const", *regressors])


def run_regressions(index: IndexPanel, ext: pd.DataFrame, cls: pd.DataFrame) -> RegressionReport:
    """Pooled OLS Models 1-3 with country-clustered errors, then FE, RE and Hausman.

    Model 1: log GDP per capita. Model 2: log trade openness. Model 3: both
    plus SIDS and LDC dummies (a dummy without variation in the sample is
    left out and noted). FE and RE use the Model 3 regressors that vary
    within countries.
    """
    sample, n_nonpos, n_missing = regression_sample(index, ext, cls)
    if len(sample) == 0:
        raise InsufficientData("no observation matches the external covariates")
    notes = []
    model3 = ["log_gdp_pc", "log_trade_open"]
    for dummy in ("sids", "ldc"):
        if sample[dummy].nunique() > 1:
            model3.append(dummy)
        else:
            notes.append(f"{dummy} dummy has no variation in the sample and is omitted from Model 3")
    models = {
        "Model 1": _pooled(sample, ["log_gdp_pc"]),
        "Model 2": _pooled(sample, ["log_trade_open"]),
        "Model 3": _pooled(sample, model3),
    }

    y = sample["mcvi"].to_numpy()
    ent = sample["economy"].to_numpy()
    panel_regs = []
    for name in model3:
        try:
            fixed_effects(y, sample[[name]].to_numpy(dtype=float), ent, [name])
            panel_regs.append(name)
        except NoWithinVariation:
            notes.append(f"{name} is time-invariant and is absorbed by the fixed effects")
    fe = re = h = None
    if panel_regs:
        X = sample[panel_regs].to_numpy(dtype=float)
        fe = fixed_effects(y, X, ent, panel_regs)
        re = random_effects(y, X, ent, panel_regs)
        h = hausman(fe, re)
    return RegressionReport(
        models, fe, re, h, len(sample), int(sample["economy"].nunique()), n_nonpos, n_missing, notes
    )
