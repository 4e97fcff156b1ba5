"""Oracle tests for the windowed Laurent arithmetic.

Every expected value here is either computed by an independent method in
the test itself (brute-force convolution, binomial/geometric/Taylor
closed forms, pointwise numerical evaluation) or is elementary enough to
verify by hand in one line.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtoda import series as S
from dtoda.series import (
    AT_INFINITY,
    AT_ZERO,
    TWO_SIDED,
    CircleZeroError,
    LaurentSeries,
    NonInvertibleError,
    SeriesError,
    WindowUnderflowError,
)


def brute_convolve(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """O(n^2) reference product, written without numpy convolution."""
    lo = a.lo_exp + b.lo_exp
    hi = a.hi_exp + b.hi_exp
    arr = np.zeros(hi - lo + 1, dtype=np.complex128)
    for i in range(a.width):
        for j in range(b.width):
            arr[i + j] += a.coeffs[i] * b.coeffs[j]
    return LaurentSeries(lo, arr)


def series_close(a: LaurentSeries, b: LaurentSeries, tol: float) -> bool:
    return S.max_abs_diff_reliable(a, b) <= tol


# ---------------------------------------------------------------------------
# construction and accessors


def test_coeff_outside_window_is_exact_zero():
    a = LaurentSeries.from_pairs({-2: 3.0, 1: 2.0})
    assert a.coeff(5) == 0.0
    assert a.coeff(-7) == 0.0
    assert isinstance(a.coeff(5), complex)
    assert a.coeff(-2) == 3.0
    assert a.coeff(1) == 2.0


def test_residue_reads_exponent_minus_one():
    a = LaurentSeries.from_pairs({-1: 4.5, 0: 1.0, 2: -2.0})
    assert a.residue() == 4.5
    assert S.residue(a) == 4.5


def test_immutability():
    a = S.monomial(0, 1.0)
    with pytest.raises((ValueError, AttributeError)):
        a.coeffs[0] = 5.0


def test_empty_window_rejected():
    with pytest.raises(SeriesError):
        LaurentSeries(0, np.array([], dtype=np.complex128))


def test_reliable_must_be_nonempty():
    with pytest.raises(WindowUnderflowError):
        LaurentSeries(0, np.ones(3), TWO_SIDED, (2, 1))


# ---------------------------------------------------------------------------
# multiplication: pinned examples and brute-force oracle


def test_mul_difference_of_squares():
    # (w + w^-1)(w - w^-1) = w^2 - w^-2
    a = LaurentSeries.from_pairs({1: 1.0, -1: 1.0})
    b = LaurentSeries.from_pairs({1: 1.0, -1: -1.0})
    c = S.mul(a, b)
    assert c.coeff(2) == 1.0
    assert c.coeff(0) == 0.0
    assert c.coeff(-2) == -1.0


def test_mul_square_with_cross_term():
    # (w + 0.1 w^-1)^2 = w^2 + 0.2 + 0.01 w^-2
    a = LaurentSeries.from_pairs({1: 1.0, -1: 0.1}, AT_INFINITY)
    c = S.mul(a, a)
    assert abs(c.coeff(2) - 1.0) < 1e-15
    assert abs(c.coeff(0) - 0.2) < 1e-15
    assert abs(c.coeff(-2) - 0.01) < 1e-15


def test_mul_matches_brute_force_convolution():
    rng = np.random.default_rng(11)
    for _ in range(20):
        la = int(rng.integers(-6, 3))
        lb = int(rng.integers(-4, 5))
        wa = int(rng.integers(1, 9))
        wb = int(rng.integers(1, 9))
        a = LaurentSeries(la, rng.normal(size=wa) + 1j * rng.normal(size=wa))
        b = LaurentSeries(lb, rng.normal(size=wb) + 1j * rng.normal(size=wb))
        got = S.mul(a, b)
        want = brute_convolve(a, b)
        assert S.max_abs_diff_reliable(got, want) < 1e-15 * max(1.0, want.max_abs_reliable())


def test_mul_reliability_truncation_edge():
    # exact x truncated: the edge shifts by the exact factor's leading exponent
    a = LaurentSeries.from_pairs({1: 1.0})                            # exact w
    b = LaurentSeries(0, np.ones(4), TWO_SIDED, (float("-inf"), 3))   # truncated above 3
    c = S.mul(a, b)
    assert c.reliable == (float("-inf"), 4)


def test_mul_empty_reliable_overlap_raises():
    a = LaurentSeries(0, np.ones(3), TWO_SIDED, (0, 1))    # lead 0, trusted <= 1
    b = LaurentSeries(0, np.ones(3), TWO_SIDED, (2, 2))    # lead 0, trusted only at 2
    with pytest.raises(WindowUnderflowError, match="window underflow"):
        S.mul(a, b)


# ---------------------------------------------------------------------------
# addition


def test_add_unions_windows_and_intersects_reliability():
    a = LaurentSeries(-1, np.array([1.0, 2.0]), TWO_SIDED, (-1, 0))
    b = LaurentSeries(0, np.array([10.0, 20.0]), TWO_SIDED, (0, 1))
    c = S.add(a, b)
    assert (c.lo_exp, c.hi_exp) == (-1, 1)
    assert c.coeff(0) == 12.0
    assert c.reliable == (0, 0)


def test_add_disjoint_reliability_raises():
    a = LaurentSeries(0, np.ones(2), TWO_SIDED, (0, 0))
    b = LaurentSeries(0, np.ones(4), TWO_SIDED, (2, 3))
    with pytest.raises(WindowUnderflowError):
        S.add(a, b)


# ---------------------------------------------------------------------------
# integer powers


def test_int_pow_positive_matches_repeated_mul():
    a = LaurentSeries.from_pairs({-1: 0.3, 0: 1.0, 2: -0.2})
    direct = a
    for k in range(2, 6):
        direct = S.mul(direct, a)
        viapow = S.int_pow(a, k)
        assert S.max_abs_diff_reliable(direct, viapow) < 1e-13


def test_int_pow_zero_is_one():
    a = LaurentSeries.from_pairs({1: 2.0}, AT_ZERO)
    c = S.int_pow(a, 0)
    assert c.coeff(0) == 1.0 and c.width == 1


def test_int_pow_negative_monomial():
    # w^-3 exactly
    a = S.monomial(1, 1.0, AT_ZERO)
    c = S.int_pow(a, -3)
    assert c.coeff(-3) == 1.0
    assert all(c.coeff(k) == 0.0 for k in range(-2, 5))


def test_int_pow_reciprocal_geometric_oracle():
    # 1/(w - 0.1 w^3) = w^-1 (1 + 0.1 w^2 + 0.01 w^4 + ...)
    a = LaurentSeries.from_pairs({1: 1.0, 3: -0.1}, AT_ZERO)
    c = S.int_pow(a, -1, depth=12)
    for i in range(6):
        assert abs(c.coeff(2 * i - 1) - 0.1**i) < 1e-14
        assert c.coeff(2 * i) == 0.0


def test_int_pow_negative_binomial_oracle():
    # (1 + x)^-2 = sum (-1)^k (k+1) x^k with x = 0.2 w
    a = LaurentSeries.from_pairs({0: 1.0, 1: 0.2}, AT_ZERO)
    c = S.int_pow(a, -2, depth=20)
    for k in range(12):
        want = (-1) ** k * (k + 1) * 0.2**k
        assert abs(c.coeff(k) - want) < 1e-13


def test_int_pow_reciprocal_roundtrip_at_infinity():
    rng = np.random.default_rng(3)
    coefs = {1: 1.0, 0: 0.3}
    for k in range(1, 7):
        coefs[-k] = 0.25**k * complex(rng.normal(), rng.normal())
    a = LaurentSeries.from_pairs(coefs, AT_INFINITY)
    inv = S.int_pow(a, -1, depth=24)
    prod = S.mul(a, inv)
    one = S.constant(1.0, AT_INFINITY)
    assert S.max_abs_diff_reliable(prod, one) < 1e-12


def test_int_pow_zero_leading_raises():
    a = S.zero(AT_ZERO)
    with pytest.raises(NonInvertibleError, match="non-invertible leading term"):
        S.int_pow(a, -1)


# ---------------------------------------------------------------------------
# split_normalize


def test_split_examples():
    c, j, u = S.split_normalize(LaurentSeries.from_pairs({1: 1.0, -1: 0.1}, AT_INFINITY))
    assert c == 1.0 and j == 1
    assert u.coeff(-2) == 0.1 and u.coeff(0) == 0.0 and u.coeff(-1) == 0.0

    c, j, u = S.split_normalize(LaurentSeries.from_pairs({3: 2.0}, AT_ZERO))
    assert c == 2.0 and j == 3
    assert float(np.max(np.abs(u.coeffs))) == 0.0

    c, j, u = S.split_normalize(LaurentSeries.from_pairs({1: 0.5, 2: 0.2}, AT_ZERO))
    assert c == 0.5 and j == 1
    assert abs(u.coeff(1) - 0.4) < 1e-16


def test_split_constant_term_exact_zero():
    a = LaurentSeries.from_pairs({1: 0.7, 2: 0.1, 5: -0.3}, AT_ZERO)
    _, _, u = S.split_normalize(a)
    assert u.coeff(0) == 0.0


# ---------------------------------------------------------------------------
# log1p


def test_log1p_pinned_example():
    u = LaurentSeries.from_pairs({-2: 0.1}, AT_INFINITY)
    l = S.log1p(u, depth=10)
    assert abs(l.coeff(-2) - 0.1) < 1e-16
    assert abs(l.coeff(-4) + 0.005) < 1e-16
    assert abs(l.coeff(-6) - 0.1**3 / 3) < 1e-16


def test_log1p_rejects_constant_term():
    u = LaurentSeries.from_pairs({0: 0.1, 1: 0.2}, AT_ZERO)
    with pytest.raises(SeriesError):
        S.log1p(u)


def test_log1p_scalar_oracle():
    # evaluate log(1+u(x)) at a small real point and compare numerically
    u = LaurentSeries.from_pairs({1: 0.3, 2: -0.1}, AT_ZERO)
    l = S.log1p(u, depth=40)
    x = 0.05
    want = math.log(1 + 0.3 * x - 0.1 * x * x)
    got = sum((l.coeff(k) * x**k).real for k in range(0, 41))
    assert abs(got - want) < 1e-14


def test_log1p_exp_roundtrip():
    # exp(log(1+u)) == 1+u, with exp summed directly from the log output
    u = LaurentSeries.from_pairs({1: 0.4, 3: 0.2}, AT_ZERO)
    l = S.log1p(u, depth=24)
    acc = S.constant(1.0, AT_ZERO)
    term = S.constant(1.0, AT_ZERO)
    for k in range(1, 30):
        term = S.clip(S.mul(term, l), 0, 24)
        term = S.scale(term, 1.0 / k)
        acc = S.add(acc, term)
    one_plus_u = S.add(S.constant(1.0, AT_ZERO), u)
    diff = max(abs(acc.coeff(k) - one_plus_u.coeff(k)) for k in range(0, 20))
    assert diff < 1e-12


# ---------------------------------------------------------------------------
# derivative / residue


def test_derivative_rule():
    a = LaurentSeries.from_pairs({-2: 1.0, 0: 5.0, 3: 2.0})
    d = S.derivative(a)
    assert d.coeff(-3) == -2.0
    assert d.coeff(-1) == 0.0
    assert d.coeff(2) == 6.0


def test_residue_of_derivative_is_exact_zero():
    rng = np.random.default_rng(5)
    for _ in range(10):
        w = int(rng.integers(1, 12))
        lo = int(rng.integers(-6, 3))
        a = LaurentSeries(lo, rng.normal(size=w) + 1j * rng.normal(size=w))
        assert S.derivative(a).residue() == 0.0


# ---------------------------------------------------------------------------
# compositional inverse


def test_invert_geometric_oracle():
    # a(w) = w / (1 - w) = w + w^2 + ... inverts to G(z) = z / (1 + z)
    n = 14
    a = LaurentSeries(1, np.ones(n), AT_ZERO)
    g = S.invert_function(a)
    for k in range(1, n + 1):
        want = (-1) ** (k + 1)
        assert abs(g.coeff(k) - want) < 1e-11


def test_invert_roundtrip_at_zero():
    rng = np.random.default_rng(9)
    coefs = {1: 1.3}
    for k in range(2, 10):
        coefs[k] = 0.3 ** (k - 1) * complex(rng.normal(), rng.normal())
    a = LaurentSeries.from_pairs(coefs, AT_ZERO)
    g = S.invert_function(a)
    # numerically compose a(g(z)) at sample points inside the disk
    for z in [0.05, 0.03 + 0.04j, -0.06j]:
        gz = sum(g.coeff(k) * z**k for k in range(1, g.hi_exp + 1))
        agz = sum(a.coeff(k) * gz**k for k in range(1, a.hi_exp + 1))
        assert abs(agz - z) < 1e-12


def test_invert_roundtrip_at_infinity():
    rng = np.random.default_rng(10)
    coefs = {1: 0.8, 0: 0.2}
    for k in range(1, 9):
        coefs[-k] = 0.3 ** (k + 1) * complex(rng.normal(), rng.normal())
    a = LaurentSeries.from_pairs(coefs, AT_INFINITY)
    g = S.invert_function(a)
    for z in [15.0, 10.0 + 7.0j, -12.0j]:
        gz = sum(g.coeff(k) * z**k for k in range(g.lo_exp, 2))
        agz = sum(a.coeff(k) * gz**k for k in range(a.lo_exp, 2))
        assert abs(agz - z) < 1e-11 * abs(z)


def test_invert_joukowski_no_quadratic_term():
    # g = w + 0.1/w: G(z) = z - 0.1/z - 0.01/z^3 - ... (odd symmetry)
    a = LaurentSeries.from_pairs({1: 1.0, -1: 0.1, -2: 0.0, -3: 0.0,
                                  -4: 0.0, -5: 0.0}, AT_INFINITY)
    g = S.invert_function(a)
    # closed form: G(z) = (z + sqrt(z^2 - 0.4))/2 expanded at infinity
    # G = z - 0.1 z^-1 - 0.01 z^-3 - 0.002 z^-5 ...; even powers vanish
    assert abs(g.coeff(1) - 1.0) < 1e-13
    assert abs(g.coeff(0)) < 1e-13
    assert abs(g.coeff(-1) + 0.1) < 1e-12
    assert abs(g.coeff(-2)) < 1e-12
    assert abs(g.coeff(-3) + 0.01) < 1e-12
    assert abs(g.coeff(-5) + 0.002) < 1e-11


def test_invert_rejects_missing_linear_term():
    a = LaurentSeries.from_pairs({2: 1.0}, AT_ZERO)
    with pytest.raises(NonInvertibleError):
        S.invert_function(a)


# ---------------------------------------------------------------------------
# circle division


def test_divide_by_monomial_exact():
    one = S.constant(1.0)
    w = S.monomial(1, 1.0)
    q = S.divide_on_circle(one, w, (-4, 4))
    assert q.coeff(-1) == 1.0
    assert sum(abs(q.coeff(k)) for k in range(-4, 5) if k != -1) == 0.0


def test_divide_geometric_oracle():
    # w^2 / (1 + 0.2 w^-1) = w^2 - 0.2 w + 0.04 - 0.008 w^-1 + ...
    num = S.monomial(2, 1.0)
    den = LaurentSeries.from_pairs({0: 1.0, -1: 0.2}, AT_INFINITY)
    q = S.divide_on_circle(num, den, (-8, 2))
    for i in range(10):
        assert abs(q.coeff(2 - i) - (-0.2) ** i) < 1e-13


def test_divide_matches_reciprocal_multiplication():
    rng = np.random.default_rng(21)
    den_c = {0: 1.0}
    for k in range(1, 6):
        den_c[k] = 0.25**k * complex(rng.normal(), rng.normal())
    den = LaurentSeries.from_pairs(den_c, AT_ZERO)
    num_c = {k: complex(rng.normal(), rng.normal()) for k in range(-2, 4)}
    num = LaurentSeries.from_pairs(num_c)
    q = S.divide_on_circle(num, den, (-6, 10))
    alt = S.mul(num, S.int_pow(den, -1, depth=40))
    diff = max(abs(q.coeff(k) - alt.coeff(k)) for k in range(-6, 11))
    assert diff < 1e-12


def test_divide_vanishing_denominator_raises():
    num = S.constant(1.0)
    den = LaurentSeries.from_pairs({1: 1.0, 0: -1.0})  # w - 1 vanishes at w = 1
    with pytest.raises(CircleZeroError, match="denominator vanishes on circle"):
        S.divide_on_circle(num, den, (-3, 3))


# ---------------------------------------------------------------------------
# clip and reliability bookkeeping


def test_clip_installs_edges_only_when_data_dropped():
    a = LaurentSeries.from_pairs({-3: 1.0, 0: 2.0, 4: 3.0})
    c = S.clip(a, -1, 6)        # drops the -3 entry, keeps everything above
    assert c.reliable == (-1, float("inf"))
    c2 = S.clip(a, -5, 6)       # drops nothing
    assert c2.reliable == (float("-inf"), float("inf"))


def test_clip_to_empty_survivor_keeps_claims():
    a = LaurentSeries.from_pairs({2: 1.0})
    c = S.clip(a, -5, 0)
    assert float(np.max(np.abs(c.coeffs))) == 0.0
    assert c.reliable == (float("-inf"), 0)
    assert c.coeff(-3) == 0.0


# ---------------------------------------------------------------------------
# single-coefficient products


def test_coeff_mul_matches_full_product():
    rng = np.random.default_rng(31)
    a = LaurentSeries(-3, rng.normal(size=9) + 1j * rng.normal(size=9))
    b = LaurentSeries(-2, rng.normal(size=7) + 1j * rng.normal(size=7))
    full = S.mul(a, b)
    for k in range(-6, 11):
        assert abs(S.coeff_mul(a, b, k) - full.coeff(k)) < 1e-14
    assert abs(S.residue_mul(a, b) - full.coeff(-1)) < 1e-14


def test_coeff_mul_honors_reliability():
    a = LaurentSeries(0, np.ones(3), TWO_SIDED, (0, 1))
    b = LaurentSeries(0, np.ones(3))
    with pytest.raises(WindowUnderflowError):
        S.coeff_mul(a, b, 4)


# ---------------------------------------------------------------------------
# hypothesis: ring axioms and determinism


coef = st.complex_numbers(min_magnitude=0.0, max_magnitude=2.0,
                          allow_nan=False, allow_infinity=False)


@st.composite
def small_series(draw):
    lo = draw(st.integers(min_value=-4, max_value=2))
    w = draw(st.integers(min_value=1, max_value=6))
    cs = draw(st.lists(coef, min_size=w, max_size=w))
    return LaurentSeries(lo, np.array(cs, dtype=np.complex128))


@settings(max_examples=60, deadline=None)
@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    scale_ref = max(1.0,
                    float(np.max(np.abs(a.coeffs))),
                    float(np.max(np.abs(b.coeffs))),
                    float(np.max(np.abs(c.coeffs)))) ** 3
    lhs = S.mul(S.add(a, b), c)
    rhs = S.add(S.mul(a, c), S.mul(b, c))
    assert S.max_abs_diff_reliable(lhs, rhs) <= 1e-13 * scale_ref
    comm = S.max_abs_diff_reliable(S.mul(a, b), S.mul(b, a))
    assert comm <= 1e-13 * scale_ref
    asc = S.max_abs_diff_reliable(S.mul(S.mul(a, b), c), S.mul(a, S.mul(b, c)))
    assert asc <= 1e-13 * scale_ref


@settings(max_examples=30, deadline=None)
@given(small_series())
def test_derivative_residue_exact_zero(a):
    assert S.derivative(a).residue() == 0.0


@settings(max_examples=20, deadline=None)
@given(small_series(), small_series())
def test_mul_deterministic(a, b):
    c1 = S.mul(a, b)
    c2 = S.mul(a, b)
    assert np.array_equal(c1.coeffs, c2.coeffs)
    assert c1.lo_exp == c2.lo_exp and c1.reliable == c2.reliable


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=5), small_series())
def test_int_pow_matches_iterated_mul(k, a):
    viapow = S.int_pow(a, k)
    direct = S.constant(1.0)
    for _ in range(k):
        direct = S.mul(direct, a)
    bound = max(1.0, float(np.max(np.abs(a.coeffs)))) ** max(k, 1)
    assert S.max_abs_diff_reliable(viapow, direct) <= 1e-12 * bound
