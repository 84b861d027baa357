"""Dominant dimensions and k-means vulnerability profiles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..errors import InsufficientData, SingleCluster
from ..index import IndexPanel
from ..stats import ClusteringResult, kmeans, pca, silhouette

# tie-break priority when two time-averaged dimensions are equal
TIE_PRIORITY = ("D3", "D1", "D2")
DEFAULT_K_RANGE = range(2, 7)


def _profiles(index: IndexPanel) -> pd.DataFrame:
    g = index.data.groupby("economy", sort=True)
    return g[["d1", "d2", "d3", "mcvi"]].mean()


@dataclass
class DominantReport:
    table: pd.DataFrame  # economy, mean_d1..3, dominant, tied
    counts: dict

    def to_dict(self) -> dict:
        return {"counts": self.counts, "ties": int(self.table["tied"].sum())}


def dominant_dimensions(index: IndexPanel) -> DominantReport:
    prof = _profiles(index)
    means = prof[["d1", "d2", "d3"]].to_numpy()
    labels = np.array(["D1", "D2", "D3"])
    dominant, tied = [], []
    for row in means:
        top = row.max()
        cands = set(labels[row == top])
        dominant.append(next(p for p in TIE_PRIORITY if p in cands))
        tied.append(len(cands) > 1)
    table = pd.DataFrame({
        "economy": prof.index,
        "mean_d1": means[:, 0], "mean_d2": means[:, 1], "mean_d3": means[:, 2],
        "dominant": dominant, "tied": tied,
    })
    counts = {d: int((table["dominant"] == d).sum()) for d in ("D1", "D2", "D3")}
    return DominantReport(table, counts)


@dataclass
class ClusterReport:
    k: int | None
    clustering: ClusteringResult | None
    silhouettes: pd.DataFrame  # k, silhouette, inertia
    members: pd.DataFrame  # economy, cluster, d1..d3, mcvi, pc1, pc2
    summary: pd.DataFrame  # cluster, size, mean_mcvi, mean d1..d3
    degenerate: bool = False
    note: str = ""
    pca_shares: list = field(default_factory=list)

    @property
    def silhouette(self) -> float | None:
        return None if self.clustering is None else self.clustering.silhouette

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "silhouette": self.silhouette,
            "degenerate": self.degenerate,
            "note": self.note,
            "silhouette_by_k": self.silhouettes.to_dict(orient="records"),
            "clusters": self.summary.to_dict(orient="records"),
            "pca_explained_shares": self.pca_shares,
        }


def cluster_profiles(
    index: IndexPanel, k_range=DEFAULT_K_RANGE, seed: int = 0, n_restarts: int = 10
) -> ClusterReport:
    """k-means on z-standardized time-averaged (d1, d2, d3); k chosen by silhouette.

    Clusters are relabelled 0..k-1 in order of increasing mean MCVI. Ties in
    silhouette go to the smaller k.
    """
    prof = _profiles(index)
    k_values = sorted(set(int(k) for k in k_range))
    if not k_values or k_values[0] < 2:
        raise ValueError("k_range must contain values >= 2")
    if len(prof) < max(k_values):
        raise InsufficientData(f"{len(prof)} countries cannot form {max(k_values)} clusters")

    x = prof[["d1", "d2", "d3"]].to_numpy(dtype=float)
    sd = x.std(axis=0, ddof=1)
    members = prof.reset_index()
    empty = pd.DataFrame(columns=["k", "silhouette", "inertia"])
    if not np.any(sd > 0):
        members["cluster"] = 0
        return ClusterReport(None, None, empty, members, pd.DataFrame(), True,
                             "all country profiles are identical; no clustering structure")
    z = (x[:, sd > 0] - x[:, sd > 0].mean(axis=0)) / sd[sd > 0]

    rows, fits = [], {}
    for k in k_values:
        res = kmeans(z, k, seed=seed, n_restarts=n_restarts)
        try:
            s = silhouette(z, res.assignments)
        except SingleCluster:
            s = float("nan")
        rows.append({"k": k, "silhouette": s, "inertia": res.inertia})
        fits[k] = (res, s)
    table = pd.DataFrame(rows)
    valid = table.dropna(subset=["silhouette"])
    if valid.empty:
        members["cluster"] = 0
        return ClusterReport(None, None, table, members, pd.DataFrame(), True,
                             "silhouette undefined for every k")
    best_k = int(valid.sort_values(["silhouette", "k"], ascending=[False, True]).iloc[0]["k"])
    res, s = fits[best_k]

    mcvi = prof["mcvi"].to_numpy()
    order = np.argsort([mcvi[res.assignments == j].mean() for j in range(best_k)], kind="mergesort")
    relabel = np.empty(best_k, dtype=np.int64)
    relabel[order] = np.arange(best_k)
    labels = relabel[res.assignments]
    clustering = ClusteringResult(labels, res.centroids[order], res.inertia, s, res.inertia_trace, res.n_iter)

    members["cluster"] = labels
    shares = []
    if z.shape[1] >= 2 and len(z) > z.shape[1]:
        p = pca(z, "correlation")
        scores = z @ p.loadings
        members["pc1"] = scores[:, 0]
        members["pc2"] = scores[:, 1]
        shares = p.explained_shares.tolist()
    summary = (
        members.groupby("cluster")
        .agg(size=("economy", "size"), mean_mcvi=("mcvi", "mean"),
             mean_d1=("d1", "mean"), mean_d2=("d2", "mean"), mean_d3=("d3", "mean"))
        .reset_index()
    )
    return ClusterReport(best_k, clustering, table, members, summary, False, "", shares)
