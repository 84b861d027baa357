"""Raw dimension indicators per economy-year.

Three UNCTAD sources feed the index: the LSCI level itself, the mean bilateral
connectivity and partner count from LSBCI pairs, and the Herfindahl concentration
of port-level PLSCI scores.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from .errors import EmptyPartnerSet, NoActivePorts
from .ingest import DataBundle

RAW_COLUMNS = ("lsci", "mean_lsbci", "partner_count", "port_hhi")


@dataclass(frozen=True)
class RawDimensionPanel:
    """One row per (economy, year) covered by at least one source.

    ``data`` columns: economy, year, lsci, mean_lsbci, partner_count, port_hhi.
    Missing coverage is NaN; ``partner_count`` is 0 where LSBCI has no rows.
    """

    data: pd.DataFrame

    def __len__(self) -> int:
        return len(self.data)

    @property
    def complete(self) -> np.ndarray:
        d = self.data
        return (
            d["lsci"].notna() & d["mean_lsbci"].notna() & (d["partner_count"] > 0) & d["port_hhi"].notna()
        ).to_numpy()


def mean_bilateral(pair_values: Sequence[float]) -> float:
    values = np.asarray(pair_values, dtype=float)
    if values.size == 0:
        raise EmptyPartnerSet("mean bilateral connectivity needs at least one partner")
    return float(values.mean())


def partner_count(partners: Iterable[str]) -> int:
    return len(set(partners))


def port_hhi(port_scores: Sequence[float]) -> float:
    """Herfindahl index of port scores, computed over ports with a positive score.

    >>> port_hhi([3.0, 1.0])
    0.625
    """
    scores = np.asarray(port_scores, dtype=float)
    active = scores[scores > 0]
    if active.size == 0:
        raise NoActivePorts("no port with a positive PLSCI score")
    shares = active / active.sum()
    return float(np.sum(shares * shares))


def _bilateral_long(lsbci: pd.DataFrame) -> pd.DataFrame:
    # both orientations so every economy sees each of its partners once
    a = lsbci.rename(columns={"economy_a": "economy", "economy_b": "partner"})
    b = lsbci.rename(columns={"economy_b": "economy", "economy_a": "partner"})
    return pd.concat([a, b], ignore_index=True)[["economy", "partner", "year", "lsbci"]]


def build_raw_panel(bundle: DataBundle) -> RawDimensionPanel:
    lsci = bundle.lsci.set_index(["economy", "year"])["lsci"]

    pairs = _bilateral_long(bundle.lsbci)
    grouped = pairs.groupby(["economy", "year"], sort=True)
    bilateral = pd.DataFrame({
        "mean_lsbci": grouped["lsbci"].mean(),
        "partner_count": grouped["partner"].nunique(),
    })

    ports = bundle.plsci[bundle.plsci["plsci"] > 0]
    totals = ports.groupby(["economy", "year"])["plsci"].transform("sum")
    shares_sq = (ports["plsci"] / totals) ** 2
    hhi = shares_sq.groupby([ports["economy"], ports["year"]]).sum().rename("port_hhi")
    # economy-years whose ports all score zero are covered but have no HHI
    port_keys = bundle.plsci.groupby(["economy", "year"]).size().index

    index = (
        lsci.index.union(bilateral.index).union(port_keys).union(hhi.index)
        .sort_values()
    )
    panel = pd.DataFrame(index=index)
    panel["lsci"] = lsci.reindex(index)
    panel["mean_lsbci"] = bilateral["mean_lsbci"].reindex(index)
    panel["partner_count"] = bilateral["partner_count"].reindex(index).fillna(0).astype(np.int64)
    panel["port_hhi"] = hhi.reindex(index)
    panel.index.names = ["economy", "year"]
    data = panel.reset_index()
    data["year"] = data["year"].astype(np.int64)
    return RawDimensionPanel(data)
