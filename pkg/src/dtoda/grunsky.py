"""Faber polynomials and the four-quadrant Grunsky coefficient table.

For a pair (g, f) the Faber polynomial of index n is the polynomial part
of a power of the map: for n >= 1 the nonnegative-exponent truncation of
g(w)**n, for n <= -1 the nonpositive-exponent truncation of f(w)**n, and
index 0 stands symbolically for log w.

The table entries b(m, n), |m|, |n| <= N, are defined by the bivariate
log-kernel expansions of the pair's inverse maps G = g^{-1}, F = f^{-1}:

    log[(G(z1) - G(z2)) / (z1 - z2)] = b00 - sum_{m,n>=1} b(m,n)  z1^-m z2^-n
    log[(F(z1) - F(z2)) / (z1 - z2)] = -b00 - sum_{m,n>=1} b(-m,-n) z1^m z2^n
    log[(G(z1) - F(z2)) / z1]        = b00 - sum_{m>=1} b(m,0) z1^-m
                                           - sum_{m,n>=1} b(m,-n) z1^-m z2^n
    log(G(z)/z) = b00 - sum b(m,0) z^-m,   log(F(z)/z) = -b00 - sum b(0,-m) z^m

with b00 = -log b (principal branch).  Two independent computations are
provided:

* :func:`grunsky_table` — the primary path, pure residue extraction in the
  w-parametrization (no functional inversion): with P_n the Faber
  polynomial,

      n b(n, m)   = res(P_n g^{m-1} g'),     n b(n, -m)  = res(P_n f^{-m-1} f'),
      n b(n, 0)   = res(P_n f^{-1} f'),     -n b(-n, 0)  = res(P_{-n} g^{-1} g'),
      n b(-n, -m) = res(P_{-n} f^{-m-1} f'), n b(-n, m)  = res(P_{-n} g^{m-1} g'),
      b(0, m)     = res(log(g/w) g^{m-1} g'), b(0, -m)   = res(log(f/w) f^{-m-1} f'),

  where log(g/w) = log b + log(1+u_g) and log(f/w) = -log b + log(1+u_f)
  share one branch constant so the two halves pair consistently.

* :func:`grunsky_via_inverse` — the oracle path: inverts both maps (at
  depth 2N+4 so corner entries are unaffected by inversion truncation)
  and expands the kernel logarithms formally as truncated bivariate power
  series; no residue pairing is involved.

The symmetry b(m, n) = b(n, m) is *not* imposed: both triangles (and the
0-row against the 0-column) are computed independently and the observed
defect is recorded on the table.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import series as S
from .conformal_pair import ConformalPair
from .series import (
    AT_INFINITY,
    AT_ZERO,
    NEG_INF,
    POS_INF,
    LaurentSeries,
    SeriesError,
)


@dataclass(frozen=True)
class FaberPolynomial:
    """Polynomial part of a power of one of the pair's maps.

    ``coefficients`` maps exponent -> complex; index 0 is the symbolic
    log-w marker and carries no coefficients.
    """

    index: int
    coefficients: dict

    def __post_init__(self):
        object.__setattr__(self, "index", int(self.index))
        n = self.index
        if n == 0:
            if self.coefficients:
                raise SeriesError("index-0 polynomial is a symbolic log marker")
            return
        exps = sorted(self.coefficients)
        lo, hi = (0, n) if n >= 1 else (n, 0)
        if exps and (exps[0] < lo or exps[-1] > hi):
            raise SeriesError("faber coefficients outside expected exponent range")
        if abs(complex(self.coefficients.get(n, 0.0))) < 1e-300:
            raise SeriesError("faber polynomial must have full degree |n|")

    @property
    def is_log_marker(self) -> bool:
        return self.index == 0

    @property
    def degree(self) -> int:
        return abs(self.index)

    def as_series(self) -> LaurentSeries:
        if self.index == 0:
            raise SeriesError("index-0 polynomial is symbolic (log w); no series form")
        return LaurentSeries.from_pairs(self.coefficients)


@dataclass(frozen=True)
class GrunskyTable:
    """Dense coefficient table b(m, n) for |m|, |n| <= order."""

    order: int
    b: dict
    b00: complex
    symmetry_defect: float

    def entry(self, m: int, n: int) -> complex:
        return self.b[(int(m), int(n))]


def faber(pair: ConformalPair, n: int) -> FaberPolynomial:
    """Polynomial part of g**n (n >= 1) or f**n (n <= -1); log marker at 0."""
    n = int(n)
    if abs(n) > pair.order:
        raise SeriesError(f"faber index {n} exceeds pair order {pair.order}")
    if n == 0:
        return FaberPolynomial(0, {})
    if n >= 1:
        p = S.int_pow(pair.g, n)
        return FaberPolynomial(n, {k: p.coeff(k) for k in range(0, n + 1)})
    m = -n
    p = S.int_pow(pair.f, n, depth=2 * m + 8)
    return FaberPolynomial(n, {k: p.reliable_coeff(k) for k in range(n, 1)})


def b_polynomial(pair: ConformalPair, table: GrunskyTable, n: int) -> FaberPolynomial:
    """Faber polynomial with its constant term halved.

    Index n >= 1: P_n - (n/2) b(n,0); index n <= -1 (n = -m): P_n +
    (m/2) b(-m,0).  Either way the constant becomes half the full power's
    mean term.  Index 0 is rejected: its analogue is log w and is handled
    symbolically by callers.
    """
    n = int(n)
    if n == 0:
        raise SeriesError("index 0 has no polynomial truncation (log w)")
    p = faber(pair, n)
    coeffs = dict(p.coefficients)
    if n >= 1:
        shift_c = -(n / 2.0) * table.entry(n, 0)
    else:
        m = -n
        shift_c = (m / 2.0) * table.entry(-m, 0)
    coeffs[0] = coeffs.get(0, 0.0) + shift_c
    return FaberPolynomial(n, coeffs)


# ---------------------------------------------------------------------------
# primary path: residue extraction in w


def _log_ratio_to_w(s: LaurentSeries, branch_constant: complex, depth: int) -> LaurentSeries:
    """log(s(w)/w) for a linear-leading germ, with the supplied constant."""
    _, j, u = S.split_normalize(s)
    if j != 1:
        raise SeriesError("log(s/w) needs a linear-leading series")
    return S.add(S.constant(branch_constant, u.flavor), S.log1p(u, depth=depth))


def grunsky_table(pair: ConformalPair, order: int) -> GrunskyTable:
    """Full table by residue extraction (primary path)."""
    n_max = int(order)
    if n_max > pair.order or n_max < 1:
        raise SeriesError(f"table order {n_max} must lie in [1, pair order {pair.order}]")
    g, f = pair.g, pair.f
    gp, fp = pair.g_prime(), pair.f_prime()
    depth = 2 * pair.order + 12
    cl_lo, cl_hi = -pair.order - n_max - 6, pair.order + n_max + 6

    # weight series: E_g[m] = g^{m-1} g' (m = 1..N), E_g0 = g^{-1} g'
    e_g = []
    g_pow = S.constant(1.0, AT_INFINITY)
    for m in range(1, n_max + 1):
        e_g.append(S.clip(S.mul(g_pow, gp), cl_lo, cl_hi))
        g_pow = S.clip(S.mul(g_pow, g), cl_lo, cl_hi)
    g_inv = S.int_pow(g, -1, depth=depth)
    e_g0 = S.clip(S.mul(g_inv, gp), cl_lo, cl_hi)

    f_inv = S.int_pow(f, -1, depth=depth)
    e_f = []
    f_pow = f_inv
    e_f0 = S.clip(S.mul(f_inv, fp), cl_lo, cl_hi)
    for _ in range(1, n_max + 1):
        f_pow = S.clip(S.mul(f_pow, f_inv), cl_lo, cl_hi)
        e_f.append(S.clip(S.mul(f_pow, fp), cl_lo, cl_hi))

    # Faber polynomials as exact series, from the same power data
    p_pos = [faber(pair, n).as_series() for n in range(1, n_max + 1)]
    p_neg = [faber(pair, -n).as_series() for n in range(1, n_max + 1)]

    lb = cmath.log(pair.b)
    log_g = _log_ratio_to_w(g, lb, depth)
    log_f = _log_ratio_to_w(f, -lb, depth)

    b: dict = {(0, 0): -lb}
    for n in range(1, n_max + 1):
        pn, pm = p_pos[n - 1], p_neg[n - 1]
        b[(n, 0)] = S.residue_mul(pn, e_f0) / n
        b[(-n, 0)] = -S.residue_mul(pm, e_g0) / n
        b[(0, n)] = S.residue_mul(log_g, e_g[n - 1])
        b[(0, -n)] = S.residue_mul(log_f, e_f[n - 1])
        for m in range(1, n_max + 1):
            b[(n, m)] = S.residue_mul(pn, e_g[m - 1]) / n
            b[(n, -m)] = S.residue_mul(pn, e_f[m - 1]) / n
            b[(-n, -m)] = S.residue_mul(pm, e_f[m - 1]) / n
            b[(-n, m)] = S.residue_mul(pm, e_g[m - 1]) / n

    defect = _symmetry_defect(b, n_max)
    return GrunskyTable(n_max, b, -lb, defect)


def _symmetry_defect(b: dict, n_max: int) -> float:
    out = 0.0
    rng = range(-n_max, n_max + 1)
    for m in rng:
        for n in rng:
            if m < n:
                out = max(out, abs(b[(m, n)] - b[(n, m)]))
    return out


# ---------------------------------------------------------------------------
# oracle path: functional inversion and formal bivariate log expansion


def _conv2(a: np.ndarray, b: np.ndarray, n1: int, n2: int) -> np.ndarray:
    """Truncated 2-d convolution on index boxes [0..n1] x [0..n2]."""
    out = np.zeros((n1 + 1, n2 + 1), dtype=np.complex128)
    ai, aj = a.shape
    for i in range(min(ai, n1 + 1)):
        row = a[i]
        for j in range(min(aj, n2 + 1)):
            c = row[j]
            if c == 0:
                continue
            blk = b[: n1 + 1 - i, : n2 + 1 - j]
            out[i : i + blk.shape[0], j : j + blk.shape[1]] += c * blk
    return out


def _log2d(w: np.ndarray) -> np.ndarray:
    """log(1 + W) for a bivariate truncation W with W[0,0] = 0."""
    n1, n2 = w.shape[0] - 1, w.shape[1] - 1
    if w[0, 0] != 0:
        raise SeriesError("bivariate log needs zero constant term")
    out = np.zeros_like(w)
    power = w.copy()
    sign = 1.0
    for k in range(1, n1 + n2 + 2):
        out += (sign / k) * power
        power = _conv2(power, w, n1, n2)
        if not np.any(power):
            break
        sign = -sign
    return out


def _padded_series(s: LaurentSeries, lo: int, hi: int, flavor: str) -> LaurentSeries:
    arr = np.zeros(hi - lo + 1, dtype=np.complex128)
    a, bnd = max(lo, s.lo_exp), min(hi, s.hi_exp)
    if a <= bnd:
        arr[a - lo : bnd - lo + 1] = s.coeffs[a - s.lo_exp : bnd - s.lo_exp + 1]
    return LaurentSeries(lo, arr, flavor, s.reliable)


def grunsky_via_inverse(pair: ConformalPair, order: int) -> GrunskyTable:
    """Full table from the inverse maps and formal kernel-log expansions.

    Treats the pair's stored windows as exact map data (true for
    polynomial pairs); the inversions run at depth 2*order + 4 so that
    every extracted entry is limited by machine precision rather than by
    inversion truncation.
    """
    n_max = int(order)
    if n_max > pair.order or n_max < 1:
        raise SeriesError(f"table order {n_max} must lie in [1, pair order {pair.order}]")
    depth = 2 * n_max + 4
    g_wide = _padded_series(pair.g, -depth, 1, AT_INFINITY)
    f_wide = _padded_series(pair.f, 1, depth + 1, AT_ZERO)
    big_g = S.invert_function(g_wide)
    big_f = S.invert_function(f_wide)
    beta = big_g.coeff(1)
    alpha1 = big_f.coeff(1)
    b00 = cmath.log(beta)

    n1 = n_max
    # G-G kernel: coefficient of z1^-i z2^-j in (G1 - G2)/(z1 - z2) is
    # -G_{-(i+j-1)} for i, j >= 1 (leading beta at (0,0)).
    w_gg = np.zeros((n1 + 1, n1 + 1), dtype=np.complex128)
    for i in range(1, n1 + 1):
        for j in range(1, n1 + 1):
            w_gg[i, j] = -big_g.coeff(-(i + j - 1)) / beta
    l_gg = _log2d(w_gg)

    # F-F kernel: coefficient of z1^i z2^j is F_{i+j+1} for i + j >= 1.
    w_ff = np.zeros((n1 + 1, n1 + 1), dtype=np.complex128)
    for i in range(0, n1 + 1):
        for j in range(0, n1 + 1):
            if i + j >= 1:
                w_ff[i, j] = big_f.coeff(i + j + 1) / alpha1
    l_ff = _log2d(w_ff)

    # G-F kernel: (G(z1) - F(z2))/z1 = beta (1 + W) with
    # W[i, 0] = G_{-(i-1)}/beta (i >= 1) and W[1, j] -= F_j/beta (j >= 1).
    w_gf = np.zeros((n1 + 1, n1 + 1), dtype=np.complex128)
    for i in range(1, n1 + 1):
        w_gf[i, 0] = big_g.coeff(-(i - 1)) / beta
    for j in range(1, n1 + 1):
        w_gf[1, j] -= big_f.coeff(j) / beta
    l_gf = _log2d(w_gf)

    # univariate f-side 0-row: log(F(z)/z) = log(alpha1) + log(1 + u_F)
    _, _, u_big_f = S.split_normalize(big_f)
    log_f_row = S.log1p(u_big_f, depth=n1 + 2)

    b: dict = {(0, 0): b00}
    for m in range(1, n_max + 1):
        b[(m, 0)] = -l_gf[m, 0]
        b[(0, m)] = -l_gf[m, 0]
        val = -log_f_row.coeff(m)
        b[(0, -m)] = val
        b[(-m, 0)] = val
        for n in range(1, n_max + 1):
            b[(m, n)] = -l_gg[m, n]
            b[(-m, -n)] = -l_ff[m, n]
            b[(m, -n)] = -l_gf[m, n]
            b[(-n, m)] = -l_gf[m, n]

    defect = _symmetry_defect(b, n_max)
    return GrunskyTable(n_max, b, b00, defect)


def table_difference(t1: GrunskyTable, t2: GrunskyTable) -> float:
    """Largest elementwise difference over the common index range."""
    n = min(t1.order, t2.order)
    out = 0.0
    for m in range(-n, n + 1):
        for k in range(-n, n + 1):
            out = max(out, abs(t1.entry(m, k) - t2.entry(m, k)))
    return out


# ---------------------------------------------------------------------------
# expansion identities (checks)


def faber_expansion_defect(pair: ConformalPair, table: GrunskyTable) -> float:
    """Residual of the four basis-expansion identities of the polynomials.

    For n = 1..order, with sums over m = 1..order:

      P_n  = g^n + n sum_m b(n, m)  g^-m      (checked at exponents >= -order)
      P_n  = n b(n,0) + n sum_m b(n, -m) f^m  (checked at exponents <= order)
      P_-n = f^-n + n sum_m b(-n,-m) f^m      (checked at exponents <= order)
      P_-n = -n b(-n,0) + n sum_m b(-n, m) g^-m  (checked at exponents >= -order)

    The exponent restriction accounts for the truncation of the m-sums:
    beyond it the residual is dominated by absent m > order terms.
    """
    n_max = table.order
    depth = 2 * pair.order + 12
    g, f = pair.g, pair.f
    cl_lo, cl_hi = -pair.order - n_max - 6, pair.order + n_max + 6

    g_inv = S.int_pow(g, -1, depth=depth)
    g_negs = [g_inv]
    for _ in range(1, n_max + 1):
        g_negs.append(S.clip(S.mul(g_negs[-1], g_inv), cl_lo, cl_hi))
    f_pows = [f]
    for _ in range(1, n_max + 1):
        f_pows.append(S.clip(S.mul(f_pows[-1], f), cl_lo, cl_hi))
    f_inv = S.int_pow(f, -1, depth=depth)
    f_negs = [f_inv]
    for _ in range(1, n_max + 1):
        f_negs.append(S.clip(S.mul(f_negs[-1], f_inv), cl_lo, cl_hi))

    defect = 0.0
    g_pow = S.constant(1.0, AT_INFINITY)
    for n in range(1, n_max + 1):
        g_pow = S.clip(S.mul(g_pow, g), cl_lo, cl_hi)
        pn = faber(pair, n).as_series()
        pm = faber(pair, -n).as_series()

        resid_a = S.sub(pn, g_pow)
        resid_d = S.add(pm, S.constant(n * table.entry(-n, 0)))
        for m in range(1, n_max + 1):
            resid_a = S.sub(resid_a, S.scale(g_negs[m - 1], n * table.entry(n, m)))
            resid_d = S.sub(resid_d, S.scale(g_negs[m - 1], n * table.entry(-n, m)))
        defect = max(defect, S.clip(resid_a, -n_max, cl_hi).max_abs_reliable())
        defect = max(defect, S.clip(resid_d, -n_max, cl_hi).max_abs_reliable())

        resid_b = S.sub(pn, S.constant(n * table.entry(n, 0)))
        resid_c = S.sub(pm, f_negs[n - 1])
        for m in range(1, n_max + 1):
            resid_b = S.sub(resid_b, S.scale(f_pows[m - 1], n * table.entry(n, -m)))
            resid_c = S.sub(resid_c, S.scale(f_pows[m - 1], n * table.entry(-n, -m)))
        defect = max(defect, S.clip(resid_b, cl_lo, n_max).max_abs_reliable())
        defect = max(defect, S.clip(resid_c, cl_lo, n_max).max_abs_reliable())
    return defect
