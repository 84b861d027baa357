"""Country-ranking agreement under alternative weights and normalizations."""
from __future__ import annotations

import numpy as np
import pandas as pd

from ..dimensions import RawDimensionPanel, build_raw_panel
from ..index import DROP_D1, DROP_D2, DROP_D3, WeightVector, aggregate_mcvi, country_means, derive_pca_weights
from ..ingest import DataBundle
from ..normalize import Method, normalize_panel
from ..stats import spearman


def _scores(norm, weights) -> pd.Series:
    return country_means(aggregate_mcvi(norm, weights))["mcvi"]


def _agreement(base: pd.Series, alt: pd.Series) -> tuple[float, int]:
    joined = pd.concat([base.rename("a"), alt.rename("b")], axis=1, join="inner")
    if np.array_equal(joined["a"].to_numpy(), joined["b"].to_numpy()):
        return 1.0, len(joined)
    return spearman(joined["a"], joined["b"]).r, len(joined)


def robustness_suite(source: DataBundle | RawDimensionPanel) -> pd.DataFrame:
    """Spearman rho of time-averaged country scores against the baseline.

    Baseline is equal weights on pooled fractional ranks. Rows: PCA weights,
    each leave-one-dimension-out variant (remaining pair at 1/2), within-year
    ranks and pooled min-max.
    """
    raw = build_raw_panel(source) if isinstance(source, DataBundle) else source
    pooled = normalize_panel(raw, Method.POOLED_RANK)
    base = _scores(pooled, WeightVector.equal())
    pca_w = derive_pca_weights(pooled)

    specs = [
        ("pca_weights", pooled, pca_w),
        ("drop_d1", pooled, DROP_D1),
        ("drop_d2", pooled, DROP_D2),
        ("drop_d3", pooled, DROP_D3),
        ("within_year_rank", normalize_panel(raw, Method.WITHIN_YEAR_RANK), WeightVector.equal()),
        ("pooled_minmax", normalize_panel(raw, Method.POOLED_MINMAX), WeightVector.equal()),
    ]
    rows = []
    for name, norm, w in specs:
        rho, n = _agreement(base, _scores(norm, w))
        rows.append({
            "specification": name, "rho": rho, "n": n,
            "w1": w.w1, "w2": w.w2, "w3": w.w3, "method": norm.method.value,
        })
    return pd.DataFrame(rows)
