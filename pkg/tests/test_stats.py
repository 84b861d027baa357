import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from mcvi.errors import (
    DegenerateTime, EmptySample, InsufficientData, InvalidK, NoCommonRegressors, NoWithinVariation,
    RankDeficient, SingleCluster, TooFewClusters, ZeroVariance,
)
from mcvi.ranking import average_ranks
from mcvi.stats import (
    fixed_effects, hausman, jacobi_eigh, kmeans, linear_trend, mann_whitney, ols_clustered, pca, pearson,
    random_effects, silhouette, spearman,
)


# correlations

def test_spearman_examples():
    assert spearman([1, 2, 3], [10, 20, 30]).r == pytest.approx(1.0)
    assert spearman([1, 2, 3], [30, 20, 10]).r == pytest.approx(-1.0)
    assert spearman([1, 2, 3], [1, 3, 2]).r == pytest.approx(0.5, abs=1e-15)


def test_pearson_examples():
    assert pearson([1, 2, 3, 4], [3, 5, 7, 9]).r == pytest.approx(1.0)
    assert pearson([0, 1, 2], [0, 1, 4]).r == pytest.approx(0.9608, abs=1e-4)
    with pytest.raises(ZeroVariance):
        pearson([1, 2, 3], [5, 5, 5])
    with pytest.raises(InsufficientData):
        spearman([1, 2], [2, 1])


def test_pairwise_deletion():
    c = spearman([1, 2, np.nan, 4, 5], [2, 1, 3, np.nan, 6])
    assert c.n == 3


def test_correlation_pvalue_matches_scipy():
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=40), rng.normal(size=40)
    ref = scipy.stats.pearsonr(x, y)
    res = pearson(x, y)
    assert res.r == pytest.approx(ref[0], abs=1e-12)
    assert res.p == pytest.approx(ref[1], rel=1e-8)


samples = st.lists(st.integers(0, 12), min_size=3, max_size=60)


@given(samples, st.data())
def test_spearman_is_pearson_on_ranks(x, data):
    y = data.draw(st.lists(st.integers(0, 12), min_size=len(x), max_size=len(x)))
    x, y = np.array(x, float), np.array(y, float)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return
    s = spearman(x, y).r
    p = np.corrcoef(average_ranks(x), average_ranks(y))[0, 1]
    assert abs(s - p) <= 1e-10
    assert -1 <= s <= 1
    assert spearman(np.exp(x), y ** 3).r == pytest.approx(s, abs=1e-12)


# PCA

def test_jacobi_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6))
    a = a + a.T
    w, v = jacobi_eigh(a)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(v @ np.diag(w) @ v.T, a, atol=1e-10)


def test_pca_perfectly_correlated():
    x = np.arange(10.0)
    res = pca(np.column_stack([x, 2 * x + 1]))
    assert res.explained_shares == pytest.approx([1.0, 0.0], abs=1e-12)
    assert np.abs(res.loadings[:, 0]) == pytest.approx([2 ** -0.5] * 2, abs=1e-12)


@settings(max_examples=50)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_pca_reconstruction(seed, d):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(50, d)) @ rng.normal(size=(d, d))
    res = pca(x)
    corr = np.corrcoef(x, rowvar=False)
    L = res.loadings
    assert np.max(np.abs(L @ np.diag(res.eigenvalues) @ L.T - corr)) <= 1e-8
    assert np.max(np.abs(L.T @ L - np.eye(d))) <= 1e-9
    assert res.explained_shares.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(res.eigenvalues) <= 1e-12)
    for j in range(d):
        assert L[np.argmax(np.abs(L[:, j])), j] > 0


def test_pca_independent_columns():
    x = np.random.default_rng(5).normal(size=(20000, 3))
    assert pca(x).explained_shares == pytest.approx([1 / 3] * 3, abs=0.02)


# clustering

def test_kmeans_blobs():
    rng = np.random.default_rng(2)
    a = rng.normal(0, 0.1, size=(30, 2))
    b = rng.normal(5, 0.1, size=(25, 2))
    res = kmeans(np.vstack([a, b]), 2, seed=1)
    labels = res.assignments
    assert len(set(labels[:30])) == 1 and len(set(labels[30:])) == 1 and labels[0] != labels[-1]
    assert silhouette(np.vstack([a, b]), labels) > 0.9


def test_kmeans_edge_k():
    x = np.random.default_rng(0).normal(size=(12, 3))
    one = kmeans(x, 1, seed=0)
    assert np.allclose(one.centroids[0], x.mean(axis=0))
    full = kmeans(x, 12, seed=0)
    assert full.inertia == pytest.approx(0.0, abs=1e-20)
    for bad in (0, 13):
        with pytest.raises(InvalidK):
            kmeans(x, bad, seed=0)


def test_kmeans_trace_and_determinism():
    x = np.random.default_rng(9).normal(size=(80, 3))
    a, b = kmeans(x, 4, seed=11), kmeans(x, 4, seed=11)
    assert np.array_equal(a.assignments, b.assignments) and a.inertia == b.inertia
    assert np.all(np.diff(a.inertia_trace) <= 1e-12)
    assert all(s > 0 for s in a.sizes())
    d = ((x - a.centroids[a.assignments]) ** 2).sum()
    assert a.inertia == pytest.approx(d, rel=1e-12)


def test_silhouette_degenerate():
    x = np.zeros((4, 2))
    assert silhouette(x, np.array([0, 0, 1, 1])) == 0.0
    pairs = np.array([[0, 0], [0, 1e-9], [1e9, 0], [1e9, 1e-9]])
    assert silhouette(pairs, np.array([0, 0, 1, 1])) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(SingleCluster):
        silhouette(x, np.zeros(4, dtype=int))


def test_silhouette_singletons():
    x = np.array([[0.0], [1.0], [10.0]])
    # point 2 is a singleton and scores 0
    a0, b0 = 1.0, 10.0
    a1, b1 = 1.0, 9.0
    expect = ((b0 - a0) / b0 + (b1 - a1) / b1 + 0) / 3
    assert silhouette(x, np.array([0, 0, 1])) == pytest.approx(expect, abs=1e-12)


# regression

def _panel(seed, g=12, t=6, k=2):
    rng = np.random.default_rng(seed)
    ent = np.repeat(np.arange(g), t)
    alpha = rng.normal(size=g)
    X = rng.normal(size=(g * t, k)) + 0.8 * alpha[ent, None]
    y = alpha[ent] + X @ np.arange(1, k + 1) + rng.normal(scale=0.5, size=g * t)
    return y, X, ent


def test_ols_exact():
    x = np.arange(10.0)
    res = ols_clustered(1 + 2 * x, np.column_stack([np.ones(10), x]), np.arange(10) % 3)
    assert res.coef == pytest.approx([1, 2], abs=1e-12)
    assert res.r_squared == pytest.approx(1.0)


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_ols_normal_equations_and_orthogonality(seed):
    y, X, ent = _panel(seed)
    Z = np.column_stack([np.ones(len(y)), X])
    res = ols_clustered(y, Z, ent)
    oracle = np.linalg.solve(Z.T @ Z, Z.T @ y)
    assert np.max(np.abs(res.coef - oracle)) <= 1e-8
    assert np.max(np.abs(Z.T @ res.resid)) <= 1e-8
    assert res.n_clusters <= res.n_obs
    assert np.allclose(res.tstat, res.coef / res.se)


def test_cr1_singletons_equal_hc1():
    y, X, _ = _panel(4)
    Z = np.column_stack([np.ones(len(y)), X])
    n, k = Z.shape
    res = ols_clustered(y, Z, np.arange(n))
    u = y - Z @ np.linalg.solve(Z.T @ Z, Z.T @ y)
    bread = np.linalg.inv(Z.T @ Z)
    hc1 = n / (n - k) * bread @ (Z.T * u ** 2) @ Z @ bread
    assert res.se == pytest.approx(np.sqrt(np.diag(hc1)), rel=1e-10)


def test_ols_errors():
    x = np.arange(5.0)
    with pytest.raises(RankDeficient):
        ols_clustered(x, np.column_stack([np.ones(5), x, 2 * x]), np.arange(5))
    with pytest.raises(TooFewClusters):
        ols_clustered(x, np.column_stack([np.ones(5), x]), np.zeros(5))


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(2, 50))
def test_fe_equals_dummy_variables(seed, g):
    y, X, ent = _panel(seed, g=g, t=4)
    res = fixed_effects(y, X, ent)
    D = (ent[:, None] == np.arange(g)).astype(float)
    Z = np.column_stack([X, D])
    oracle = np.linalg.lstsq(Z, y, rcond=None)[0][: X.shape[1]]
    assert np.max(np.abs(res.coef - oracle)) <= 1e-8


def test_fe_exact_and_time_invariant():
    g, t = 5, 4
    ent = np.repeat(np.arange(g), t)
    x = np.random.default_rng(0).normal(size=g * t)
    y = np.arange(g)[ent] * 10 + 3 * x
    assert fixed_effects(y, x, ent).coef[0] == pytest.approx(3.0, abs=1e-12)
    flag = (ent % 2).astype(float)
    with pytest.raises(NoWithinVariation) as exc:
        fixed_effects(y, np.column_stack([x, flag]), ent, ["x", "sids"])
    assert "sids" in str(exc.value)


def test_re_limits():
    rng = np.random.default_rng(7)
    g, t = 40, 8
    ent = np.repeat(np.arange(g), t)
    x = rng.normal(size=g * t)
    # no entity effect: RE collapses towards pooled OLS
    y = 1 + 2 * x + rng.normal(size=g * t)
    re = random_effects(y, x, ent)
    ols = ols_clustered(y, np.column_stack([np.ones(g * t), x]), ent)
    assert re.coef[1] == pytest.approx(ols.coef[1], abs=0.02)
    # dominant entity effect: RE approaches FE
    alpha = rng.normal(scale=100, size=g)
    x2 = x + 0.01 * alpha[ent]
    y2 = alpha[ent] + 2 * x2 + rng.normal(scale=0.1, size=g * t)
    re2, fe2 = random_effects(y2, x2, ent), fixed_effects(y2, x2, ent)
    assert re2.extra["theta_min"] > 0.99
    assert re2.coef[1] == pytest.approx(fe2.coef[0], abs=1e-3)


def test_re_between_pooled_and_fe():
    y, X, ent = _panel(21, g=30, t=5, k=1)
    ols = ols_clustered(y, np.column_stack([np.ones(len(y)), X]), ent).coef[1]
    fe = fixed_effects(y, X, ent).coef[0]
    re = random_effects(y, X, ent).coef[1]
    assert min(ols, fe) <= re <= max(ols, fe)


def test_hausman():
    y, X, ent = _panel(8, g=40, t=6)
    fe, re = fixed_effects(y, X, ent), random_effects(y, X, ent)
    h = hausman(fe, re)
    assert h.statistic > 0 and h.p < 0.01 and h.dof == 2
    same = hausman(fe, fe)
    assert same.statistic == 0 and same.p == 1
    other = fixed_effects(y, X, ent, ["a", "b"])
    with pytest.raises(NoCommonRegressors):
        hausman(other, re)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_hausman_nonnegative(seed):
    y, X, ent = _panel(seed, g=8, t=3)
    assert hausman(fixed_effects(y, X, ent), random_effects(y, X, ent)).statistic >= 0


# rank test and trend

def test_mann_whitney_examples():
    r = mann_whitney([1, 2], [3, 4])
    assert r.u == 0 and r.u + r.u_other == 4
    same = mann_whitney([1, 2, 3], [1, 2, 3])
    assert same.u == 4.5 and same.p == pytest.approx(1.0)
    with pytest.raises(EmptySample):
        mann_whitney([], [1])


@settings(max_examples=200)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=25), st.lists(st.integers(0, 8), min_size=1, max_size=25))
def test_mann_whitney_identity_and_scipy(a, b):
    r = mann_whitney(a, b)
    assert r.u + r.u_other == len(a) * len(b)
    if len(set(a + b)) > 1:
        ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
        assert r.u == ref.statistic
        assert r.p == pytest.approx(ref.pvalue, abs=1e-12)


def test_mann_whitney_identity_bulk():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        a = rng.integers(0, 10, size=rng.integers(1, 30))
        b = rng.integers(0, 10, size=rng.integers(1, 30))
        r = mann_whitney(a, b)
        assert r.u + r.u_other == len(a) * len(b)


def test_linear_trend():
    t = np.arange(2006, 2026)
    tr = linear_trend(t, 2 + 3 * t)
    assert tr.slope == pytest.approx(3) and tr.intercept == pytest.approx(2, abs=1e-8)
    assert tr.r_squared == pytest.approx(1.0)
    assert linear_trend(t, np.full(20, 0.4)).slope == 0
    with pytest.raises(DegenerateTime):
        linear_trend([1, 1], [1, 2])
