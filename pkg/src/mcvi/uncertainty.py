"""Monte Carlo propagation of weight, measurement and normalization uncertainty.

Each simulation draws, from its own stream ``(seed, ensemble, sim_index)``:

1. three Gamma(alpha, 1) variates (Marsaglia-Tsang) normalized into Dirichlet weights,
2. one uniform deciding whether within-year ranks replace pooled ranks,
3. one uniform multiplicative factor in [1 - h, 1 + h] per raw indicator value,

always in that order, whether or not a source is active. The panel is then
normalized, aggregated, averaged per country and re-ranked. Because streams
are keyed by simulation index, results do not depend on the number of worker
threads or on completion order.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import pandas as pd

from .dimensions import RawDimensionPanel, build_raw_panel
from .errors import AllVariancesZero, InvalidConfig
from .index import combine, rank_scores
from .ingest import DataBundle
from .normalize import Method, normalize_matrix, raw_matrix
from .rng import gamma_marsaglia_tsang, stream
from .stats import spearman

JOINT, WEIGHTS_ONLY, NOISE_ONLY, NORMALIZATION_ONLY = 0, 1, 2, 3
QUANTILES = (0.025, 0.5, 0.975)


@dataclass(frozen=True)
class McConfig:
    n_sims: int = 1000
    dirichlet_alpha: float = 20.0
    noise_halfwidth: float = 0.05
    p_switch_normalization: float = 0.30
    seed: int = 0
    min_years: int = 1
    equal_weights: bool = False  # pin weights at 1/3 instead of sampling

    def __post_init__(self):
        if self.n_sims < 1:
            raise InvalidConfig("n_sims must be >= 1")
        if not self.dirichlet_alpha > 0:
            raise InvalidConfig("dirichlet_alpha must be > 0")
        if not 0 <= self.noise_halfwidth < 1:
            raise InvalidConfig("noise_halfwidth must be in [0, 1)")
        if not 0 <= self.p_switch_normalization <= 1:
            raise InvalidConfig("p_switch_normalization must be in [0, 1]")
        if self.min_years < 1:
            raise InvalidConfig("min_years must be >= 1")


def sample_dirichlet_weights(alpha: float, k: int, rng: np.random.Generator) -> np.ndarray:
    g = gamma_marsaglia_tsang(rng, alpha, k)
    return g / g.sum()


def _perturb(values: np.ndarray, halfwidth: float, rng: np.random.Generator) -> np.ndarray:
    u = rng.uniform(-halfwidth, halfwidth, size=values.shape) if halfwidth > 0 else np.zeros(values.shape)
    return values * (1.0 + u)


def perturb_indicators(raw: RawDimensionPanel, halfwidth: float, rng: np.random.Generator) -> RawDimensionPanel:
    """Multiply every raw indicator by an independent factor 1 + U(-h, h).

    Partner counts become reals; they are only ever ranked.
    """
    if not 0 <= halfwidth < 1:
        raise InvalidConfig("halfwidth must be in [0, 1)")
    if halfwidth == 0:
        return RawDimensionPanel(raw.data.copy())
    data = raw.data.copy()
    cols = ["lsci", "mean_lsbci", "partner_count", "port_hhi"]
    data[cols] = _perturb(data[cols].to_numpy(dtype=float), halfwidth, rng)
    return RawDimensionPanel(data)


class _Engine:
    """Array form of the build pipeline, reused across simulations."""

    def __init__(self, raw: RawDimensionPanel):
        self.raw = raw_matrix(raw)
        self.years = raw.data["year"].to_numpy()
        econ = raw.data["economy"].to_numpy()
        complete = ~np.isnan(self.raw).any(axis=1)
        self.economies, codes = np.unique(econ[complete], return_inverse=True)
        self.rows = np.flatnonzero(complete)
        self.codes = codes
        self.counts = np.bincount(codes, minlength=len(self.economies)).astype(float)

    def country_scores(self, raw: np.ndarray, weights: np.ndarray, method: Method) -> np.ndarray:
        norm = normalize_matrix(raw, self.years, method)[self.rows]
        d2 = (norm[:, 1] + norm[:, 2]) / 2.0
        mcvi = combine(np.column_stack([norm[:, 0], d2, norm[:, 3]]), weights)
        return np.bincount(self.codes, weights=mcvi, minlength=len(self.economies)) / self.counts

    def ranks(self, scores: np.ndarray) -> np.ndarray:
        return rank_scores(self.economies, scores)


def _equal() -> np.ndarray:
    return np.full(3, 1.0 / 3.0)


def _simulate(engine: _Engine, cfg: McConfig, ensemble: int, sim: int, baseline: np.ndarray):
    rng = stream(cfg.seed, ensemble, sim)
    w = sample_dirichlet_weights(cfg.dirichlet_alpha, 3, rng)
    switched = bool(rng.random() < cfg.p_switch_normalization)
    raw = _perturb(engine.raw, cfg.noise_halfwidth, rng)
    if cfg.equal_weights:
        w = _equal()
    method = Method.WITHIN_YEAR_RANK if switched else Method.POOLED_RANK
    scores = engine.country_scores(raw, w, method)
    if np.array_equal(scores, baseline):
        rho = 1.0
    else:
        rho = spearman(baseline, scores).r
    return w, switched, engine.ranks(scores), rho


def _run_ensemble(engine, cfg, ensemble, baseline, workers):
    def one(i):
        return _simulate(engine, cfg, ensemble, i, baseline)

    if workers <= 1:
        results = [one(i) for i in range(cfg.n_sims)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(cfg.n_sims)))
    weights = np.array([r[0] for r in results])
    switched = np.array([r[1] for r in results], dtype=bool)
    ranks = np.array([r[2] for r in results], dtype=np.int64)
    rho = np.array([r[3] for r in results])
    return weights, switched, ranks, rho


@dataclass
class McResult:
    config: McConfig
    economies: np.ndarray
    baseline_rank: np.ndarray
    rho: np.ndarray
    ranks: np.ndarray  # (n_sims, n_countries)
    weights: np.ndarray  # (n_sims, 3)
    switched: np.ndarray
    years_covered: np.ndarray = field(default=None)

    def rank_quantiles(self) -> pd.DataFrame:
        q = np.quantile(self.ranks.astype(float), QUANTILES, axis=0, method="linear")
        df = pd.DataFrame({
            "economy": self.economies,
            "baseline_rank": self.baseline_rank,
            "q025": q[0],
            "q50": q[1],
            "q975": q[2],
            "ci_width": q[2] - q[0],
        })
        if self.years_covered is not None:
            df["short_coverage"] = self.years_covered < self.config.min_years
        return df.sort_values(["baseline_rank"]).reset_index(drop=True)

    def summary(self) -> dict:
        width = self.rank_quantiles()["ci_width"].to_numpy()
        return {
            "n_sims": int(self.rho.size),
            "n_countries": int(self.economies.size),
            "mean_rho": float(self.rho.mean()),
            "min_rho": float(self.rho.min()),
            "share_rho_gt_0_95": float(np.mean(self.rho > 0.95)),
            "share_rho_gt_0_99": float(np.mean(self.rho > 0.99)),
            "mean_ci_width": float(width.mean()),
            "median_ci_width": float(np.median(width)),
            "max_ci_width": float(width.max()),
            "share_switched": float(self.switched.mean()),
            "config": asdict(self.config),
        }

    def to_json(self, include_draws: bool = True) -> str:
        out = self.summary()
        if include_draws:
            out["rho"] = self.rho.tolist()
            out["weights"] = self.weights.tolist()
            out["switched"] = self.switched.tolist()
        return json.dumps(out, indent=2)


def _raw_of(source) -> RawDimensionPanel:
    if isinstance(source, DataBundle):
        return build_raw_panel(source)
    if isinstance(source, RawDimensionPanel):
        return source
    raise TypeError(f"expected DataBundle or RawDimensionPanel, got {type(source).__name__}")


def _baseline(engine: _Engine) -> np.ndarray:
    return engine.country_scores(engine.raw, _equal(), Method.POOLED_RANK)


def run_monte_carlo(source: DataBundle | RawDimensionPanel, config: McConfig | None = None, *, workers: int = 1) -> McResult:
    config = config or McConfig()
    engine = _Engine(_raw_of(source))
    baseline = _baseline(engine)
    weights, switched, ranks, rho = _run_ensemble(engine, config, JOINT, baseline, workers)
    return McResult(
        config, engine.economies, engine.ranks(baseline), rho, ranks, weights, switched,
        years_covered=engine.counts.astype(np.int64),
    )


@dataclass(frozen=True)
class VarianceShares:
    weight_share: float
    noise_share: float
    normalization_share: float
    mean_variances: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def as_dict(self) -> dict:
        return {
            "weight_share": self.weight_share,
            "noise_share": self.noise_share,
            "normalization_share": self.normalization_share,
            "mean_rank_variance": {
                "weights": self.mean_variances[0],
                "noise": self.mean_variances[1],
                "normalization": self.mean_variances[2],
            },
        }


def decompose_variance(
    source: DataBundle | RawDimensionPanel, config: McConfig | None = None, *, workers: int = 1
) -> VarianceShares:
    """One-at-a-time attribution of rank variance to the three uncertainty sources.

    Each source gets its own ensemble of ``n_sims`` runs with the other two
    pinned at baseline. A source's share is its mean per-country rank variance
    over the sum of the three means.
    """
    config = config or McConfig()
    engine = _Engine(_raw_of(source))
    baseline = _baseline(engine)
    setups = [
        (WEIGHTS_ONLY, replace(config, noise_halfwidth=0.0, p_switch_normalization=0.0)),
        (NOISE_ONLY, replace(config, equal_weights=True, p_switch_normalization=0.0)),
        (NORMALIZATION_ONLY, replace(config, equal_weights=True, noise_halfwidth=0.0)),
    ]
    means = []
    for ensemble, cfg in setups:
        _, _, ranks, _ = _run_ensemble(engine, cfg, ensemble, baseline, workers)
        means.append(float(ranks.astype(float).var(axis=0).mean()))
    total = math.fsum(means)
    if total <= 0:
        raise AllVariancesZero("no uncertainty source moved any country rank")
    shares = [m / total for m in means]
    return VarianceShares(*shares, mean_variances=tuple(means))
