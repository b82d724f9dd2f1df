"""Transition kernels, subordination, and the stable subordinator sampler."""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erfc, gamma

from stablegap import (
    ValidationError,
    cauchy_constant,
    cauchy_kernel,
    gaussian_kernel,
    sample_subordinator_increment,
    subordinated_gaussian,
    subordinator_density_half,
)


def test_cauchy_constant_closed_form():
    for d in (1, 2, 3):
        expected = gamma((d + 1) / 2) / np.pi ** ((d + 1) / 2)
        assert abs(cauchy_constant(d) - expected) < 1e-14


def test_cauchy_kernel_matches_explicit_1d():
    t, x, y = 0.7, 0.3, -0.4
    expected = t / (np.pi * (t**2 + (x - y) ** 2))
    assert abs(cauchy_kernel(t, x, y, dim=1) - expected) < 1e-14


def test_cauchy_kernel_matches_explicit_2d():
    t = 0.5
    r = 1.3
    expected = t / (2 * np.pi * (t**2 + r**2) ** 1.5)
    assert abs(cauchy_kernel(t, r, 0.0, dim=2) - expected) < 1e-14


def test_cauchy_kernel_normalizes_1d():
    t = 0.9
    total, _ = quad(lambda y: cauchy_kernel(t, 0.0, y, dim=1), -np.inf, np.inf)
    assert abs(total - 1.0) < 1e-10


def test_gaussian_kernel_matches_normal_density():
    # variance of the kernel is 2t per coordinate
    t, x = 0.31, 0.7
    expected = np.exp(-(x**2) / (4 * t)) / np.sqrt(4 * np.pi * t)
    assert abs(gaussian_kernel(t, x, 0.0, dim=1) - expected) < 1e-14


def test_subordination_reproduces_cauchy_kernel():
    # time-changed Gaussian with the 1/2-stable subordinator, quadrature in s,
    # against the closed form: the two routes are independent
    ts = np.array([0.05, 0.3, 1.0, 4.0])
    xs = np.array([0.0, 0.4, 1.5, 8.0])
    for dim in (1, 2):
        for t in ts:
            for x in xs:
                a = subordinated_gaussian(t, x, 0.0, dim=dim)
                b = cauchy_kernel(t, x, 0.0, dim=dim)
                assert abs(a - b) <= 1e-7 * max(1.0, abs(b))


def test_subordinator_density_half_closed_form_and_mass():
    t = 0.8
    s = np.linspace(0.01, 50.0, 7)
    expected = t / (2 * np.sqrt(np.pi) * s**1.5) * np.exp(-(t**2) / (4 * s))
    assert np.allclose(subordinator_density_half(t, s), expected, rtol=1e-12)
    total, _ = quad(lambda u: subordinator_density_half(t, u), 0.0, np.inf)
    assert abs(total - 1.0) < 1e-9


def test_subordinator_sampler_matches_analytic_cdf():
    # P(S_t <= s) = erfc(t / (2 sqrt(s))) for the 1/2-stable subordinator
    rng = np.random.default_rng(7)
    t = 0.5
    draws = sample_subordinator_increment(t, 0.5, rng, size=200_000)
    assert np.all(draws > 0)
    for s in (0.05, 0.2, 1.0, 5.0):
        emp = np.mean(draws <= s)
        ana = erfc(t / (2 * np.sqrt(s)))
        se = np.sqrt(ana * (1 - ana) / draws.size)
        assert abs(emp - ana) < 5 * se + 1e-4


def test_subordinator_sampler_laplace_transform():
    # E exp(-u S_t) = exp(-t u^beta), checked for a non-1/2 index as well
    rng = np.random.default_rng(11)
    for beta in (0.5, 0.75):
        t = 0.3
        draws = sample_subordinator_increment(t, beta, rng, size=400_000)
        for u in (0.5, 2.0):
            vals = np.exp(-u * draws)
            est = vals.mean()
            se = vals.std() / np.sqrt(vals.size)
            assert abs(est - np.exp(-t * u**beta)) < 5 * se + 1e-5


def test_kernel_validation():
    with pytest.raises(ValidationError):
        cauchy_kernel(-1.0, 0.0, 0.0, dim=1)
