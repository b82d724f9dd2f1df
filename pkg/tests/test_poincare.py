"""Weighted Poincare quotients, log-concavity, skeleton survival, and the
exponential-weight derivative inequality."""

import numpy as np
import pytest

from stablegap import (
    Domain,
    UnsupportedConfigurationError,
    ValidationError,
    WeightProfile,
    check_lemma_derivative,
    directional_quotient_2d,
    ground_state_weight,
    is_log_concave,
    min_antisymmetric_quotient,
    segment_log_concavity,
    skeleton_survival,
)

BOUND = np.pi**2 / 4


def test_log_concavity_examples():
    gauss = WeightProfile.from_function(lambda x: np.exp(-(x**2)), 1.0)
    assert is_log_concave(gauss)
    bump = WeightProfile.from_function(lambda x: 1.0 + x**2, 1.0)
    assert not is_log_concave(bump)
    # products of log-concave weights stay log-concave
    prod = WeightProfile.from_function(lambda x: np.exp(-(x**2) - x**4), 1.0)
    assert is_log_concave(prod)


def test_weight_profile_validation():
    with pytest.raises(ValidationError):
        WeightProfile.from_function(lambda x: x, 1.0)  # not positive
    with pytest.raises(ValidationError):
        WeightProfile.from_function(lambda x: np.exp(x), 1.0)  # not symmetric


def test_flat_weight_recovers_free_constant():
    flat = WeightProfile.from_function(lambda x: np.ones_like(x), 1.0)
    out = min_antisymmetric_quotient(flat, 1.0)
    assert abs(out.quotient - BOUND) < 1e-4
    assert out.passed


def test_flat_weight_scales_with_length():
    flat = WeightProfile.from_function(lambda x: np.ones_like(x), 2.0)
    out = min_antisymmetric_quotient(flat, 2.0)
    assert abs(out.quotient - BOUND / 4) < 1e-4


def test_gaussian_weight_beats_flat_constant():
    gauss = WeightProfile.from_function(lambda x: np.exp(-(x**2)), 1.0)
    out = min_antisymmetric_quotient(gauss, 1.0)
    assert out.quotient > BOUND
    assert out.passed


def test_ground_state_weights_satisfy_bound(interval_domain):
    from stablegap import solve_spectrum

    for alpha in (1.0, 1.5, 2.0):
        res = solve_spectrum(interval_domain, alpha, 128)
        prof = ground_state_weight(res)
        # alpha = 1: the squared Galerkin ground state carries sine-basis
        # ripples where it vanishes at the boundary, which bleed into the
        # discrete log second differences at the 1e-3 level; the smoother
        # alpha = 1.5 and exact alpha = 2 ground states are clean
        tol = 1e-3 if alpha == 1.0 else 1e-6
        assert is_log_concave(prof, tol=tol), alpha
        out = min_antisymmetric_quotient(prof, 1.0)
        assert out.quotient >= BOUND - 1e-4, alpha


def test_coarse_profile_rejected():
    coarse = WeightProfile(np.linspace(-0.99, 0.99, 10),
                           np.ones(10), True)
    with pytest.raises(UnsupportedConfigurationError):
        min_antisymmetric_quotient(coarse, 1.0)


def test_directional_quotient_2d_equality_case(rect_domain):
    L = 2.0
    f = lambda p: np.sin(np.pi * p[:, 0] / (2 * L))
    w = lambda p: np.ones(p.shape[0])
    out = directional_quotient_2d(rect_domain, w, f, tol=1e-6)
    assert out["pass"]
    assert abs(out["lhs"] - out["rhs"]) < 1e-6 * out["rhs"]


def test_directional_quotient_2d_generic(rect_domain):
    f = lambda p: p[:, 0] * np.exp(-p[:, 1] ** 2)
    w = lambda p: np.exp(-(p[:, 0] ** 2))
    out = directional_quotient_2d(rect_domain, w, f)
    assert out["pass"]
    assert out["lhs"] >= out["rhs"]


def test_directional_quotient_2d_rejects_symmetric_f(rect_domain):
    with pytest.raises(ValidationError):
        directional_quotient_2d(rect_domain, lambda p: np.ones(p.shape[0]),
                                lambda p: np.ones(p.shape[0]))


def test_directional_quotient_needs_rectangle():
    with pytest.raises(ValidationError):
        directional_quotient_2d(Domain.disk(0.0, 0.0, 1.0),
                                lambda p: np.ones(p.shape[0]),
                                lambda p: p[:, 0])


def test_skeleton_survival_single_time_closed_form(interval_domain):
    # one observation: P(x + C_t in (-1,1)) =
    # (arctan((1-x)/t) + arctan((1+x)/t)) / pi
    for x, t in ((0.0, 1.0), (0.5, 0.7), (-0.3, 2.0)):
        got = skeleton_survival(interval_domain, x, [t])
        expected = (np.arctan((1 - x) / t) + np.arctan((1 + x) / t)) / np.pi
        assert abs(got - expected) < 1e-6
    assert abs(skeleton_survival(interval_domain, 0.0, [1.0]) - 0.5) < 1e-6


def test_skeleton_survival_monotone_in_observations(interval_domain):
    f1 = skeleton_survival(interval_domain, 0.5, [1.0])
    f2 = skeleton_survival(interval_domain, 0.5, [0.5, 1.0])
    f3 = skeleton_survival(interval_domain, 0.5, [0.4, 0.7, 1.0])
    assert f3 < f2 < f1 < 1.0


def test_skeleton_survival_reflection_symmetry(interval_domain):
    a = skeleton_survival(interval_domain, 0.4, [0.5, 1.0])
    b = skeleton_survival(interval_domain, -0.4, [0.5, 1.0])
    assert abs(a - b) < 1e-10


def test_skeleton_survival_2d(rect_domain):
    v = skeleton_survival(rect_domain, np.array([0.0, 0.0]), [0.5, 1.0])
    assert 0.0 < v < 1.0
    one = skeleton_survival(rect_domain, np.array([0.0, 0.0]), [0.5])
    assert v < one


def test_skeleton_survival_validation(interval_domain):
    with pytest.raises(ValidationError):
        skeleton_survival(interval_domain, 2.0, [1.0])  # starts outside
    with pytest.raises(ValidationError):
        skeleton_survival(interval_domain, 0.0, [1.0, 0.5])  # not increasing
    with pytest.raises(UnsupportedConfigurationError):
        skeleton_survival(interval_domain, 0.0, [1, 2, 3, 4, 5])
    with pytest.raises(UnsupportedConfigurationError):
        skeleton_survival(interval_domain, 0.0, [1.0], alpha=1.5)


def test_segment_log_concavity(interval_domain):
    worst = segment_log_concavity(interval_domain, (-0.8, 0.8), [0.5, 1.0])
    assert worst <= 1e-7
    worst3 = segment_log_concavity(interval_domain, (-0.8, 0.8),
                                   [0.3, 0.6, 1.0], n_points=15)
    assert worst3 <= 1e-7


def test_lemma_derivative_exponential_example():
    ts = np.linspace(0.0, 40.0, 4001)
    out = check_lemma_derivative(ts, np.exp(-ts), 1.0)
    # I = int 2 e^{-3t} = 2/3, bound = 1/2
    assert abs(out["I"] - 2 / 3) < 1e-3
    assert out["pass"]
    assert out["ratio"] > 1.0


def test_lemma_derivative_minimizing_exponential():
    # f = e^{-rt} with r^2 + c r - 1 = 0 minimizes I among exponentials;
    # the bound still holds with slack
    c = 1.0
    r = (-c + np.sqrt(c**2 + 4)) / 2
    ts = np.linspace(0.0, 60.0, 6001)
    out = check_lemma_derivative(ts, np.exp(-r * ts), c)
    expected = (1 + r**2) / (2 * r + c)
    assert abs(out["I"] - expected) < 1e-3
    assert out["pass"]


def test_lemma_derivative_validation():
    ts = np.linspace(0.0, 10.0, 101)
    with pytest.raises(ValidationError):
        check_lemma_derivative(ts, np.exp(-ts), -1.0)
    with pytest.raises(ValidationError):
        check_lemma_derivative(ts + 0.1, np.exp(-ts), 1.0)
