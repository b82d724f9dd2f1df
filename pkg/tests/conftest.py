"""Shared fixtures: the expensive spectral solves are session-scoped so the
acceptance suite and the module tests reuse them."""

import numpy as np
import pytest

from stablegap import Domain, solve_spectrum


@pytest.fixture(scope="session")
def interval_domain():
    return Domain.interval(-1.0, 1.0)


@pytest.fixture(scope="session")
def interval_128(interval_domain):
    return solve_spectrum(interval_domain, 1.0, 128)


@pytest.fixture(scope="session")
def interval_512(interval_domain):
    return solve_spectrum(interval_domain, 1.0, 512)


@pytest.fixture(scope="session")
def rect_domain():
    return Domain.rectangle(-2.0, 2.0, -1.0, 1.0)


@pytest.fixture(scope="session")
def rect_32(rect_domain):
    return solve_spectrum(rect_domain, 1.0, 32)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
