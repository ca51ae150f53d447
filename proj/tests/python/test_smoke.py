"""Smoke tests for the python bindings."""

import math

import pytest

import snrobust as sn


def test_special_functions():
    assert sn.std_normal_pdf(0.0) == pytest.approx(0.3989422804014327)
    assert sn.std_normal_cdf(0.0) == pytest.approx(0.5)
    assert sn.owens_t(0.0, 1.0) == pytest.approx(0.125)
    assert sn.mills_ratio(0.0) == pytest.approx(0.7978845608028654)


def test_model_evaluations():
    theta = sn.SnParams(0.0, 1.0, 1.0)
    assert sn.pdf(theta, 0.0) == pytest.approx(0.3989422804014327)
    assert sn.cdf(theta, 0.0) == pytest.approx(0.25, abs=1e-9)
    m = sn.moments(theta)
    assert m.mean == pytest.approx(1.0 / math.sqrt(math.pi))
    u = sn.score(theta, 0.5)
    assert len(u) == 3
    with pytest.raises(ValueError):
        sn.pdf(sn.SnParams(0.0, -1.0, 0.0), 0.0)


def test_sampling_determinism():
    a = sn.sample(sn.SnParams(0, 1, 5), 1000, seed=42)
    b = sn.sample(sn.SnParams(0, 1, 5), 1000, seed=42)
    assert a == b
    assert len(a) == 1000


def test_fit_recovers_parameters():
    data = sn.sample(sn.SnParams(0, 1, 5), 5000, seed=7)
    result = sn.fit(data, alpha=0.5)
    assert result.converged
    assert result.gradient_norm <= 1e-6
    assert abs(result.params.mu) < 0.1
    assert abs(result.params.sigma - 1.0) < 0.1
    assert all(se > 0 for se in result.std_errors)


def test_mle_and_objective():
    data = sn.sample(sn.SnParams(0, 1, 2), 800, seed=9)
    mle = sn.fit_mle(data)
    assert mle.method == "mle"
    h = sn.objective(sn.SnParams(0, 1, 2), data, alpha=0.5)
    assert math.isfinite(h)
    g = sn.objective_gradient(mle.params, data, alpha=0.5)
    assert len(g) == 3


def test_robust_vs_mle_under_contamination():
    scheme = sn.ContaminationScheme(
        sn.SnParams(0, 1, 5), sn.SnParams(10, 1, 5), epsilon=0.1
    )
    data = sn.contaminated_sample(scheme, 200, seed=11)
    robust = sn.fit(data, alpha=0.5)
    mle = sn.fit(data, alpha=0.0)
    assert abs(robust.params.sigma - 1.0) < abs(mle.params.sigma - 1.0)


def test_symmetry_test_and_power():
    data = sn.sample(sn.SnParams(0, 1, 2), 500, seed=13)
    res = sn.symmetry_test(data, alpha=0.5, gamma0=2.0)
    assert 0.0 <= res.p_value <= 1.0
    assert res.df == 1
    p = sn.contiguous_power(sn.SnParams(0, 1, 0), 0.0, gamma0=0.0, d=3.0)
    assert p == pytest.approx(0.6685, abs=0.02)


def test_chi_square_helpers():
    assert sn.chisq_sf(sn.chisq_quantile(0.95, 1), 1) == pytest.approx(0.05)
    assert sn.noncentral_chisq_sf(3.84, 1, 0.0) == pytest.approx(
        sn.chisq_sf(3.84, 1)
    )


def test_influence_function():
    theta = sn.SnParams(0, 1, 1)
    grid = [-10 + 0.5 * k for k in range(41)]
    curve = sn.if_curve(theta, 0.5, grid)
    assert len(curve) == 41
    assert all(len(v) == 3 for v in curve)
    sup = max(abs(v[2]) for v in curve)
    assert math.isfinite(sup)


def test_are_table():
    rows = sn.are_table([sn.SnParams(0, 1, 1)], [0.0, 0.5])
    assert rows[0]["mu"][0] == pytest.approx(100.0)
    assert rows[0]["mu"][1] < 100.0


def test_boxplot_filter():
    data = [0.1 * k for k in range(30)] + [50.0]
    kept, removed = sn.outlier_filter_boxplot(data)
    assert removed == [30]
    assert len(kept) == 30
