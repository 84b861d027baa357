"""Statistical kernel: correlations, PCA, k-means, regressions and rank tests.

Everything here is deterministic given its inputs and, for k-means, an explicit
seed. p-values use the classical approximations (Student t for correlations,
normal for Mann-Whitney, chi-square for Hausman); scipy supplies only the
distribution tail functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats as _dist
from scipy.linalg import solve_triangular

from .errors import (
    DegenerateTime,
    DegenerateVariance,
    EmptySample,
    InsufficientData,
    InvalidK,
    NoCommonRegressors,
    NonConvergence,
    NoWithinVariation,
    RankDeficient,
    SingleCluster,
    TooFewClusters,
    ZeroVariance,
)
from .ranking import average_ranks, tie_counts
from .rng import stream

KMEANS_STREAM = 0x6B6D


# --------------------------------------------------------------------------- correlation

class Correlation(NamedTuple):
    r: float
    p: float
    n: int


def _pairwise(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    ok = ~(np.isnan(x) | np.isnan(y))
    return x[ok], y[ok]


def _correlation(x: np.ndarray, y: np.ndarray) -> Correlation:
    n = x.size
    if n < 3:
        raise InsufficientData(f"correlation needs at least 3 complete pairs, got {n}")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("correlation with a constant series")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = float(2.0 * _dist.t.sf(abs(t), n - 2))
    return Correlation(r, min(p, 1.0), n)


def pearson(x, y) -> Correlation:
    """Product-moment correlation with pairwise deletion of NaN."""
    return _correlation(*_pairwise(x, y))


def spearman(x, y) -> Correlation:
    """Pearson correlation of the average-rank transforms (pairwise deletion first)."""
    x, y = _pairwise(x, y)
    return _correlation(average_ranks(x), average_ranks(y))


# --------------------------------------------------------------------------- PCA

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def jacobi_eigh(matrix, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors)`` unsorted, eigenvectors as columns.
    Sweeps stop once the off-diagonal Frobenius norm falls below
    ``tol * max(1, ||A||_F)``.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("jacobi_eigh needs a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("jacobi_eigh needs a symmetric matrix")
    a = (a + a.T) / 2.0
    d = a.shape[0]
    v = np.eye(d)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < threshold:
            return np.diag(a).copy(), v
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0 else -1.0
                t = sign / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NonConvergence(f"Jacobi eigen solver did not converge in {max_sweeps} sweeps")


@dataclass(frozen=True)
class PcaResult:
    loadings: np.ndarray  # columns are components
    eigenvalues: np.ndarray
    explained_shares: np.ndarray
    matrix: np.ndarray  # the decomposed correlation or covariance matrix

    def scores(self, data) -> np.ndarray:
        x = np.asarray(data, dtype=float)
        z = (x - x.mean(axis=0)) / x.std(axis=0, ddof=1)
        return z @ self.loadings


def pca(data, mode: str = "correlation") -> PcaResult:
    """Principal components of the correlation (default) or covariance matrix.

    Each loading column is signed so its largest-magnitude entry is positive.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise ValueError("pca needs a 2-D array")
    n, d = x.shape
    if d < 2 or n <= d:
        raise InsufficientData(f"pca needs n > d >= 2, got n={n}, d={d}")
    mode = mode.lower()
    if mode not in ("correlation", "covariance"):
        raise ValueError(f"unknown pca mode {mode!r}")
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (n - 1)
    if mode == "correlation":
        sd = np.sqrt(np.diag(cov))
        if np.any(sd == 0):
            raise DegenerateVariance(f"zero variance in column(s) {np.flatnonzero(sd == 0).tolist()}")
        mat = cov / np.outer(sd, sd)
        np.fill_diagonal(mat, 1.0)
    else:
        mat = cov
    values, vectors = jacobi_eigh(mat)
    order = np.argsort(-values, kind="mergesort")
    values = np.clip(values[order], 0.0, None)
    vectors = vectors[:, order]
    for j in range(d):
        col = vectors[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            vectors[:, j] = -col
    total = values.sum()
    if total <= 0:
        raise DegenerateVariance("all eigenvalues are zero")
    return PcaResult(vectors, values, values / total, mat)


# --------------------------------------------------------------------------- clustering

@dataclass(frozen=True)
class ClusteringResult:
    assignments: np.ndarray
    centroids: np.ndarray
    inertia: float
    silhouette: float | None = None
    inertia_trace: tuple[float, ...] = ()
    n_iter: int = 0

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def _sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kmeans_pp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.sum((x - x[chosen[0]]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # every point coincides with a chosen centre
            rest = np.setdiff1d(np.arange(n), chosen)
            idx = int(rest[rng.integers(rest.size)])
        chosen.append(idx)
        d2 = np.minimum(d2, np.sum((x - x[idx]) ** 2, axis=1))
    return x[chosen].copy()


def _assign(x: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = _sq_dists(x, centers)
    labels = np.argmin(d, axis=1)
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k)
    moved = np.zeros(x.shape[0], dtype=bool)
    for j in np.flatnonzero(counts == 0):
        # hand the empty cluster the point currently worst served by its centre
        cost = d[np.arange(x.shape[0]), labels]
        cost = np.where(moved | (counts[labels] <= 1), -1.0, cost)
        i = int(np.argmax(cost))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        centers[j] = x[i]
        moved[i] = True
        d[:, j] = np.sum((x - centers[j]) ** 2, axis=1)
    return labels, d[np.arange(x.shape[0]), labels]


def _lloyd(x, centers, max_iter, tol):
    k = centers.shape[0]
    labels, cost = _assign(x, centers)
    trace = [float(cost.sum())]
    it = 0
    for it in range(1, max_iter + 1):
        new = np.vstack([x[labels == j].mean(axis=0) for j in range(k)])
        shift = float(np.sqrt(np.max(np.sum((new - centers) ** 2, axis=1))))
        centers = new
        new_labels, cost = _assign(x, centers)
        trace.append(float(cost.sum()))
        done = np.array_equal(new_labels, labels) or shift < tol
        labels = new_labels
        if done:
            break
    return labels, centers, float(cost.sum()), tuple(trace), it


def kmeans(
    data,
    k: int,
    seed: int = 0,
    n_restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-10,
) -> ClusteringResult:
    """Lloyd k-means with k-means++ seeding; keeps the restart with least inertia.

    Restart ``r`` draws from stream ``(seed, KMEANS_STREAM, k, r)``. Clusters that
    empty out are refilled with the point farthest from its centre.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if not 1 <= k <= n:
        raise InvalidK(f"k must be in [1, {n}], got {k}")
    if not np.all(np.isfinite(x)):
        raise ValueError("kmeans data must be finite")
    best = None
    for r in range(max(1, n_restarts)):
        rng = stream(seed, KMEANS_STREAM, k, r)
        res = _lloyd(x, _kmeans_pp(x, k, rng), max_iter, tol)
        if best is None or res[2] < best[2]:
            best = res
    labels, centers, inertia, trace, it = best
    return ClusteringResult(labels, centers, inertia, None, trace, it)


def silhouette(data, assignments) -> float:
    """Mean silhouette width; singletons score 0 and 0/0 is taken as 0."""
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    labels = np.asarray(assignments)
    uniq, codes = np.unique(labels, return_inverse=True)
    if uniq.size < 2:
        raise SingleCluster("silhouette needs at least two non-empty clusters")
    dist = np.sqrt(np.maximum(_sq_dists(x, x), 0.0))
    k = uniq.size
    counts = np.bincount(codes, minlength=k)
    sums = np.zeros((x.shape[0], k))
    for j in range(k):
        sums[:, j] = dist[:, codes == j].sum(axis=1)
    own = codes
    idx = np.arange(x.shape[0])
    with np.errstate(invalid="ignore", divide="ignore"):
        a = sums[idx, own] / (counts[own] - 1)
        other = sums / counts[None, :]
        other[idx, own] = np.inf
        b = other.min(axis=1)
        denom = np.maximum(a, b)
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s = np.where(counts[own] == 1, 0.0, s)
    return float(s.mean())


# --------------------------------------------------------------------------- regression

@dataclass
class RegressionResult:
    names: list[str]
    coef: np.ndarray
    se: np.ndarray
    tstat: np.ndarray
    pvalues: np.ndarray
    r_squared: float
    n_obs: int
    n_clusters: int
    dof: int
    model: str  # "pooled", "fe" or "re"
    cov: np.ndarray
    cov_conventional: np.ndarray
    resid: np.ndarray = field(repr=False, default=None)
    extra: dict = field(default_factory=dict)

    def params(self) -> dict[str, float]:
        return dict(zip(self.names, self.coef.tolist()))

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "coefficients": {
                n: {"coef": float(c), "se": float(s), "t": float(t), "p": float(p)}
                for n, c, s, t, p in zip(self.names, self.coef, self.se, self.tstat, self.pvalues)
            },
            "r_squared": self.r_squared,
            "n_obs": self.n_obs,
            "n_clusters": self.n_clusters,
            "dof": self.dof,
            **{k: v for k, v in self.extra.items() if isinstance(v, (int, float, bool, str))},
        }


def _names(names, k, prefix="x"):
    if names is None:
        return [f"{prefix}{i}" for i in range(k)]
    names = list(names)
    if len(names) != k:
        raise ValueError(f"{len(names)} names for {k} regressors")
    return names


def _lstsq_qr(X: np.ndarray, y: np.ndarray):
    q, r = np.linalg.qr(X)
    beta = solve_triangular(r, q.T @ y)
    rinv = solve_triangular(r, np.eye(r.shape[0]))
    return beta, rinv @ rinv.T


def _check_rank(X: np.ndarray):
    n, k = X.shape
    if n <= k or np.linalg.matrix_rank(X) < k:
        raise RankDeficient(f"design matrix ({n}x{k}) is rank deficient")


def _cluster_meat(X: np.ndarray, u: np.ndarray, codes: np.ndarray, g: int) -> np.ndarray:
    scores = np.zeros((g, X.shape[1]))
    np.add.at(scores, codes, X * u[:, None])
    return scores.T @ scores


def _inference(coef, cov, dof_t):
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, coef / se, np.nan)
    p = 2.0 * _dist.t.sf(np.abs(t), dof_t)
    return se, t, p


def ols_clustered(y, X, clusters, names: Sequence[str] | None = None) -> RegressionResult:
    """Least squares with CR1 cluster-robust covariance.

    ``X`` must already contain the intercept column. The small-sample factor
    is G/(G-1) * (n-1)/(n-k); t-statistics are referred to t(G-1).
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    names = _names(names, k)
    _check_rank(X)
    _, codes = np.unique(np.asarray(clusters), return_inverse=True)
    g = int(codes.max()) + 1 if n else 0
    if g < 2:
        raise TooFewClusters(f"clustered errors need at least 2 clusters, got {g}")
    beta, bread = _lstsq_qr(X, y)
    u = y - X @ beta
    ssr = float(u @ u)
    yc = y - y.mean()
    sst = float(yc @ yc)
    c = g / (g - 1) * (n - 1) / (n - k)
    cov = c * bread @ _cluster_meat(X, u, codes, g) @ bread
    cov_conv = ssr / (n - k) * bread
    se, t, p = _inference(beta, cov, g - 1)
    return RegressionResult(
        names, beta, se, t, p, 1.0 - ssr / sst if sst > 0 else float("nan"),
        n, g, n - k, "pooled", cov, cov_conv, u,
    )


def _group_means(values: np.ndarray, codes: np.ndarray, g: int) -> np.ndarray:
    counts = np.bincount(codes, minlength=g).astype(float)
    if values.ndim == 1:
        return np.bincount(codes, weights=values, minlength=g) / counts
    return np.column_stack([np.bincount(codes, weights=values[:, j], minlength=g) for j in range(values.shape[1])]) / counts[:, None]


def _panel_inputs(y, X, entities, names):
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    names = _names(names, X.shape[1])
    _, codes = np.unique(np.asarray(entities), return_inverse=True)
    g = int(codes.max()) + 1 if y.size else 0
    if g < 2:
        raise TooFewClusters(f"panel estimators need at least 2 entities, got {g}")
    return y, X, codes, g, names


def _within(y, X, codes, g, names):
    y_w = y - _group_means(y, codes, g)[codes]
    X_w = X - _group_means(X, codes, g)[codes]
    for j, name in enumerate(names):
        scale = max(1.0, float(np.abs(X[:, j]).max(initial=0.0)))
        if np.all(np.abs(X_w[:, j]) <= 1e-12 * scale):
            raise NoWithinVariation(name)
    return y_w, X_w


def fixed_effects(y, X, entities, names: Sequence[str] | None = None) -> RegressionResult:
    """Within estimator; ``X`` excludes the intercept.

    Reported covariance is CR1 clustered by entity; the conventional
    covariance uses s^2 = SSR / (n - G - k).
    """
    y, X, codes, g, names = _panel_inputs(y, X, entities, names)
    y_w, X_w = _within(y, X, codes, g, names)
    n, k = X.shape
    if n - g - k <= 0:
        raise InsufficientData("not enough observations for the within estimator")
    _check_rank(X_w)
    beta, bread = _lstsq_qr(X_w, y_w)
    u = y_w - X_w @ beta
    ssr = float(u @ u)
    sst = float(y_w @ y_w)
    dof = n - g - k
    c = g / (g - 1) * (n - 1) / (n - k)
    cov = c * bread @ _cluster_meat(X_w, u, codes, g) @ bread
    cov_conv = ssr / dof * bread
    se, t, p = _inference(beta, cov, g - 1)
    return RegressionResult(
        names, beta, se, t, p, 1.0 - ssr / sst if sst > 0 else float("nan"),
        n, g, dof, "fe", cov, cov_conv, u, {"sigma2_e": ssr / dof, "r_squared_kind": "within"},
    )


def random_effects(y, X, entities, names: Sequence[str] | None = None) -> RegressionResult:
    """Swamy-Arora random effects (GLS by quasi-demeaning); ``X`` excludes the intercept.

    The idiosyncratic variance comes from the within residuals, the entity
    variance from the between regression on entity means less
    sigma2_e / T_harmonic, floored at zero (flagged in ``extra``). Standard
    errors are conventional, not clustered.
    """
    y, X, codes, g, names = _panel_inputs(y, X, entities, names)
    n, k = X.shape
    fe = fixed_effects(y, X, entities, names)
    sigma2_e = fe.extra["sigma2_e"]

    t_i = np.bincount(codes, minlength=g).astype(float)
    yb = _group_means(y, codes, g)
    Xb = _group_means(X, codes, g)
    Zb = np.column_stack([np.ones(g), Xb])
    if g <= k + 1:
        raise InsufficientData(f"between regression needs more than {k + 1} entities, got {g}")
    _check_rank(Zb)
    bb, _ = _lstsq_qr(Zb, yb)
    ub = yb - Zb @ bb
    sigma2_between = float(ub @ ub) / (g - k - 1)
    t_harm = g / float(np.sum(1.0 / t_i))
    sigma2_u = sigma2_between - sigma2_e / t_harm
    floored = sigma2_u < 0
    sigma2_u = max(sigma2_u, 0.0)

    if sigma2_e == 0.0 and sigma2_u == 0.0:
        theta = np.zeros(g)
    else:
        theta = 1.0 - np.sqrt(sigma2_e / (t_i * sigma2_u + sigma2_e))
    th = theta[codes]
    y_s = y - th * yb[codes]
    Z = np.column_stack([1.0 - th, X - th[:, None] * Xb[codes]])
    _check_rank(Z)
    beta, bread = _lstsq_qr(Z, y_s)
    u = y_s - Z @ beta
    ssr = float(u @ u)
    dof = n - k - 1
    cov = ssr / dof * bread
    se, t, p = _inference(beta, cov, dof)
    fitted = np.column_stack([np.ones(n), X]) @ beta
    r2 = float(np.corrcoef(y, fitted)[0, 1] ** 2) if np.std(fitted) > 0 else float("nan")
    return RegressionResult(
        ["const", *names], beta, se, t, p, r2, n, g, dof, "re", cov, cov, u,
        {
            "sigma2_e": sigma2_e, "sigma2_u": sigma2_u, "negative_variance_component": bool(floored),
            "theta_min": float(theta.min()), "theta_max": float(theta.max()), "theta": theta,
            "r_squared_kind": "overall",
            # GLS covariance scaled by the within-fit sigma2_e, used by the Hausman contrast
            "cov_sigma_e": sigma2_e * bread,
        },
    )


class HausmanResult(NamedTuple):
    statistic: float
    p: float
    dof: int
    names: tuple[str, ...]
    pseudo_inverse: bool


def hausman(fe: RegressionResult, re: RegressionResult) -> HausmanResult:
    """Hausman contrast over the common slope coefficients.

    Both covariances are conventional and share the within-fit sigma2_e, which
    makes their difference positive semidefinite in exact arithmetic. It is
    still projected onto the PSD cone before the pseudo-inverse, so the
    statistic is never negative; dof is the rank of that projection.
    """
    common = [nm for nm in fe.names if nm in re.names and nm.lower() not in ("const", "intercept")]
    if not common:
        raise NoCommonRegressors("fixed and random effects fits share no slope coefficient")
    i_fe = [fe.names.index(nm) for nm in common]
    i_re = [re.names.index(nm) for nm in common]
    d = fe.coef[i_fe] - re.coef[i_re]
    v_re = re.extra.get("cov_sigma_e", re.cov_conventional)
    V = fe.cov_conventional[np.ix_(i_fe, i_fe)] - v_re[np.ix_(i_re, i_re)]
    V = (V + V.T) / 2.0
    w, vec = np.linalg.eigh(V)
    scale = max(float(np.abs(w).max(initial=0.0)), np.finfo(float).tiny)
    tol = scale * len(w) * np.finfo(float).eps
    keep = w > tol
    pd_ok = bool(keep.all())
    inv = (vec[:, keep] / w[keep]) @ vec[:, keep].T
    stat = max(float(d @ inv @ d), 0.0)
    dof = int(keep.sum())
    p = float(_dist.chi2.sf(stat, dof)) if dof > 0 else 1.0
    return HausmanResult(stat, p, dof, tuple(common), not pd_ok)


# --------------------------------------------------------------------------- rank test

class MannWhitney(NamedTuple):
    u: float
    p: float
    u_other: float


def mann_whitney(a, b) -> MannWhitney:
    """U statistic of sample ``a`` with two-sided normal-approximation p-value.

    Uses average ranks for ties, the tie-corrected variance and a 0.5
    continuity correction.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a = a[~np.isnan(a)]
    b = b[~np.isnan(b)]
    na, nb = a.size, b.size
    if na == 0 or nb == 0:
        raise EmptySample("Mann-Whitney needs two non-empty samples")
    pooled = np.concatenate([a, b])
    ranks = average_ranks(pooled)
    u_a = float(ranks[:na].sum() - na * (na + 1) / 2.0)
    u_b = na * nb - u_a
    n = na + nb
    mu = na * nb / 2.0
    ties = tie_counts(pooled).astype(float)
    tie_term = float(np.sum(ties ** 3 - ties)) / (n * (n - 1)) if n > 1 else 0.0
    var = na * nb / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return MannWhitney(u_a, 1.0, u_b)
    z = max(abs(u_a - mu) - 0.5, 0.0) / math.sqrt(var)
    p = min(1.0, float(2.0 * _dist.norm.sf(z)))
    return MannWhitney(u_a, p, u_b)


# --------------------------------------------------------------------------- trend

class Trend(NamedTuple):
    slope: float
    intercept: float
    r_squared: float


def linear_trend(t, y) -> Trend:
    """Simple OLS of ``y`` on ``t``; R^2 is NaN when ``y`` is constant."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = ~(np.isnan(t) | np.isnan(y))
    t, y = t[ok], y[ok]
    if np.unique(t).size < 2:
        raise DegenerateTime("trend needs at least two distinct time points")
    tc = t - t.mean()
    yc = y - y.mean()
    slope = float(tc @ yc) / float(tc @ tc)
    intercept = float(y.mean() - slope * t.mean())
    sst = float(yc @ yc)
    resid = y - (intercept + slope * t)
    r2 = 1.0 - float(resid @ resid) / sst if sst > 0 else float("nan")
    return Trend(slope, intercept, r2)
