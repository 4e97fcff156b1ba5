"""Shared fixtures: the four standard pairs used across the test-suite."""

import numpy as np
import pytest

from dtoda import conformal_pair as CP
from dtoda import series as S
from dtoda.series import AT_INFINITY, LaurentSeries


@pytest.fixture(scope="session")
def fix_id():
    """Identity pair g = w, f = w at order 10."""
    return CP.from_coefficients({1: 1.0}, {1: 1.0}, order=10)


@pytest.fixture(scope="session")
def fix_rand():
    """The standard seeded perturbative pair."""
    return CP.random_pair(seed=7, decay=0.3, order=16)


@pytest.fixture(scope="session")
def fix_sig():
    """Reflection-symmetric pair built from g = w + 0.1/w at order 16."""
    g = LaurentSeries.from_pairs({1: 1.0, -1: 0.1}, AT_INFINITY)
    return CP.sigma_conjugate(g, order=16)


@pytest.fixture(scope="session")
def jouk_pair():
    """g is the functional inverse of z + 0.1/z (so G recovers it); f = w."""
    order = 12
    coeffs = {1: 1.0, -1: 0.1}
    coeffs.update({-k: 0.0 for k in range(2, order + 1)})
    s = LaurentSeries.from_pairs(coeffs, AT_INFINITY)
    g = S.invert_function(s)
    arr = np.zeros(order + 1, dtype=np.complex128)
    arr[0] = 1.0
    f = LaurentSeries(1, arr, "AtZero")
    return CP.ConformalPair(g, f, order)
