"""Skeleton Monte Carlo: survival curves, rate estimators, determinism."""

import numpy as np
import pytest

from stablegap import (
    Domain,
    EstimationError,
    McConfig,
    ValidationError,
    estimate_gap_star,
    estimate_lambda1,
    estimate_phi1,
    simulate_skeleton,
    skeleton_survival,
    survival_curve,
    time_to_equilibrium_bounds,
)

GALERKIN_LAMBDA1 = 1.15810  # interval (-1,1), alpha = 1, N = 512
GALERKIN_GAP = 1.59786


@pytest.fixture(scope="module")
def interval():
    return Domain.interval(-1.0, 1.0)


@pytest.fixture(scope="module")
def base_curve(interval):
    cfg = McConfig(alpha=1.0, paths=200_000, dt=1e-3, t_max=10.0, seed=3)
    return survival_curve(interval, 0.5, cfg)


def test_config_validation():
    with pytest.raises(ValidationError):
        McConfig(paths=0).validate()
    with pytest.raises(ValidationError):
        McConfig(alpha=2.5).validate()
    with pytest.raises(ValidationError):
        McConfig(dt=-1e-3).validate()


def test_survival_curve_shape_and_monotonicity(base_curve):
    s = base_curve.survival
    assert s[0] <= 1.0
    assert np.all(s >= 0.0) and np.all(s <= 1.0)
    assert np.all(np.diff(base_curve.alive) <= 0)
    # signed decomposition is consistent with the total
    assert np.all(base_curve.plus.sum(axis=0) + base_curve.minus.sum(axis=0)
                  == base_curve.counts.sum(axis=0))


def test_determinism(interval):
    cfg = McConfig(alpha=1.0, paths=20_000, dt=2e-3, t_max=4.0, seed=11)
    a = simulate_skeleton(interval, 0.5, cfg)
    b = simulate_skeleton(interval, 0.5, cfg)
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.plus, b.plus)
    assert np.array_equal(a.times, b.times)


def test_lambda1_against_galerkin(base_curve):
    est = estimate_lambda1(base_curve)
    assert abs(est.value - GALERKIN_LAMBDA1) < 4 * est.stderr
    assert est.stderr < 0.1


def test_lambda1_alpha2_against_shifted_barrier(interval):
    # Brownian skeleton: discrete monitoring acts like an enlarged interval
    # of half-width 1 + 0.5826 sqrt(2 dt) (Broadie-Glasserman-Kou)
    dt = 1e-3
    cfg = McConfig(alpha=2.0, paths=150_000, dt=dt, t_max=4.0, seed=5)
    curve = survival_curve(interval, 0.0, cfg)
    est = estimate_lambda1(curve)
    l_eff = 1.0 + 0.5826 * np.sqrt(2 * dt)
    oracle = (np.pi / (2 * l_eff)) ** 2
    assert abs(est.value - oracle) < 4 * est.stderr


def test_coarse_skeleton_matches_quadrature_oracle(interval):
    # with dt = 0.5 and record_stride 1 the simulated survival at t = 1.0 is
    # the two-observation skeleton probability, computable by quadrature
    cfg = McConfig(alpha=1.0, paths=400_000, dt=0.5, t_max=1.0, seed=17,
                   record_stride=1)
    curve = survival_curve(interval, 0.5, cfg)
    j = int(np.argmin(np.abs(curve.times - 1.0)))
    mc = curve.survival[j]
    se = curve.stderr[j]
    oracle = skeleton_survival(interval, 0.5, [0.5, 1.0])
    assert abs(mc - oracle) < 4 * se


def test_dt_refinement_kills_more_paths(interval):
    # finer monitoring can only lower survival, up to noise
    t_probe = 2.0
    vals = {}
    for dt in (4e-3, 1e-3):
        cfg = McConfig(alpha=1.0, paths=150_000, dt=dt, t_max=2.5, seed=23)
        curve = survival_curve(interval, 0.5, cfg)
        j = int(np.argmin(np.abs(curve.times - t_probe)))
        vals[dt] = (curve.survival[j], curve.stderr[j])
    coarse, fine = vals[4e-3], vals[1e-3]
    assert fine[0] <= coarse[0] + 3 * np.hypot(coarse[1], fine[1])


def test_stderr_scales_with_paths(interval):
    # pointwise survival stderr is binomial: 4x the paths halves it
    t_probe = 2.0
    ses = []
    for paths in (50_000, 200_000):
        cfg = McConfig(alpha=1.0, paths=paths, dt=2e-3, t_max=2.5, seed=29)
        curve = survival_curve(interval, 0.5, cfg)
        j = int(np.argmin(np.abs(curve.times - t_probe)))
        ses.append(curve.stderr[j])
    ratio = ses[0] / ses[1]
    assert 1.8 < ratio < 2.2


def test_phi1_ratio_against_galerkin(interval, base_curve, interval_128):
    cfg = base_curve.config
    lam = estimate_lambda1(base_curve).value
    a = estimate_phi1(interval, 0.5, 3.0, lam, cfg, curve=base_curve)
    cfg0 = McConfig(alpha=1.0, paths=200_000, dt=1e-3, t_max=10.0, seed=31)
    curve0 = survival_curve(interval, 0.0, cfg0)
    b = estimate_phi1(interval, 0.0, 3.0, lam, cfg0, curve=curve0)
    phi = interval_128.eigenfunction(1)
    expected = phi(np.array([0.5]))[0] / phi(np.array([0.0]))[0]
    got = a.value / b.value
    rel_se = got * np.hypot(a.stderr / a.value, b.stderr / b.value)
    assert abs(got - expected) < 4 * rel_se + 0.02


def test_gap_star_against_galerkin(interval, base_curve):
    est = estimate_gap_star(interval, 0.5, base_curve.config, curve=base_curve)
    assert est.value > 0
    assert abs(est.value - GALERKIN_GAP) < 4 * est.stderr
    assert "window_start" in est.diagnostics


def test_gap_star_needs_positive_start(interval, base_curve):
    with pytest.raises(ValidationError):
        estimate_gap_star(interval, -0.5, base_curve.config, curve=base_curve)


def test_gap_star_noise_floor(interval):
    cfg = McConfig(alpha=1.0, paths=500, dt=5e-3, t_max=8.0, seed=41)
    with pytest.raises(EstimationError):
        estimate_gap_star(interval, 0.5, cfg)


def test_estimate_lambda1_needs_survivors(interval):
    cfg = McConfig(alpha=1.0, paths=300, dt=5e-3, t_max=10.0, seed=43)
    curve = survival_curve(interval, 0.5, cfg)
    with pytest.raises(EstimationError):
        estimate_lambda1(curve, min_survivors=100_000)


def test_rectangle_curve(rect_domain):
    cfg = McConfig(alpha=1.0, paths=30_000, dt=2e-3, t_max=3.0, seed=47)
    curve = survival_curve(rect_domain, np.array([0.5, 0.0]), cfg)
    assert np.all(np.diff(curve.alive) <= 0)
    assert curve.alive[-1] > 0


def test_time_to_equilibrium_bounds():
    lo, hi = time_to_equilibrium_bounds(1.6, 0.01, 2.0)
    assert lo == pytest.approx(np.log(100.0) / 1.6)
    assert hi == pytest.approx(2.0 + np.log(100.0) / 1.6)
    assert lo < hi
    with pytest.raises(ValidationError):
        time_to_equilibrium_bounds(-1.0, 0.01, 2.0)
    with pytest.raises(ValidationError):
        time_to_equilibrium_bounds(1.0, 2.0, 2.0)


def test_curve_rows_roundtrip(base_curve):
    rows = base_curve.rows()
    assert len(rows) == base_curve.times.size
    t, s, se = rows[0]
    assert t == base_curve.times[0]
    assert s == base_curve.survival[0]
