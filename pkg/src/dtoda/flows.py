"""Flow vector fields on the space of normalized pairs, and their checks.

Each integer n carries a vector field, built from the rational function

    u_n(w) = -P_n'(w) / (g'(w) f'(w) E(w)),

where P_n is the polynomial part of g**n (n >= 1) or f**n (n <= -1), P_0'
is taken to be 1/w, and E is the mixed second partial of the potential
evaluated along (g, f).  Writing c1 for the w^1 coefficient of u_n, the
one-sided split

    dg = g' * ((u_n restricted to exponents <= 0) + c1 w / 2)
    df = -f' * (c1 w / 2 + (u_n restricted to exponents >= 2))

moves g inside its chart window and f inside its own, satisfies
dg/g' - df/f' = u_n exactly, and varies the leading coefficients opposite
ways (d log a1 = -d log b), so normalization a1 b = 1 survives to first
order.  The checks below verify, by central differences and by residue
algebra, that these fields straighten the time variables (dt_m/deps =
delta_{nm}), satisfy the string relation, agree with the bracket form of
the evolution (Lax shape and the canonical relation {L, M} = L), and that
the tau function generates the v's and the pairing table.

The bracket throughout is {A, B} = w dA/dw * dB/dt0 - w dA/dt0 * dB/dw,
with t0-derivatives given by the n = 0 field.
"""

from dataclasses import dataclass

import numpy as np

from . import series as S
from .series import AT_INFINITY, AT_ZERO, LaurentSeries, SeriesError
from .conformal_pair import ConformalPair, from_coefficients
from .grunsky import GrunskyTable, b_polynomial, faber, grunsky_table
from .hamiltonian import GaugeTerm, HamiltonianH, eval_along
from .coords import _halfwidth, _total_sum, time_variables, toda_coordinates

__all__ = [
    "ChartError", "FlowField", "u_field", "flow_field", "step",
    "jacobian_check", "string_check", "lax_check",
    "canonical_bracket_check", "tau_gradient_check",
]


class ChartError(SeriesError):
    """A step left the normalized-pair chart."""


@dataclass(frozen=True)
class FlowField:
    """Direction-n variation of a pair: the function u_n and the split."""

    n: int
    u_series: LaurentSeries
    dg: LaurentSeries
    df: LaurentSeries


def _project(a: LaurentSeries, lo=None, hi=None) -> LaurentSeries:
    """Restriction of ``a`` to exponents in [lo, hi], as a defined object.

    Unlike ``clip``, the dropped exponents are exactly zero *by
    definition* of the result, so reliability widens to infinity on any
    side that was fully trusted up to the cut; inside the kept range the
    input's claims carry over unchanged.
    """
    s_lo = a.lo_exp if lo is None else max(a.lo_exp, int(lo))
    s_hi = a.hi_exp if hi is None else min(a.hi_exp, int(hi))
    r_lo = a.reliable[0] if (lo is None or a.reliable[0] > lo) else S.NEG_INF
    r_hi = a.reliable[1] if (hi is None or a.reliable[1] < hi) else S.POS_INF
    if s_lo > s_hi:
        anchor = int(lo) if lo is not None else int(hi)
        return LaurentSeries(anchor, np.zeros(1, dtype=np.complex128),
                             a.flavor, (r_lo, r_hi))
    arr = a.coeffs[s_lo - a.lo_exp: s_hi - a.lo_exp + 1]
    return LaurentSeries(s_lo, np.array(arr, dtype=np.complex128),
                         a.flavor, (r_lo, r_hi))


def _mixed_partial_along(pair, h, gauge) -> LaurentSeries:
    ms = _total_sum(h, gauge)
    width = _halfwidth(pair, ms, 0)
    return eval_along(ms.d12(), pair, (-width, width))


def u_field(pair, h, n: int, gauge=(), samples: int = 1024,
            pad: int = 0) -> LaurentSeries:
    """The function u_n = -P_n'/(g' f' E) on |exponent| <= order + |n| + pad.

    The quotient's own tails decay at rates set by the zeros of the
    denominator nearest the unit circle, not by the pair's coefficient
    decay, so coefficientwise identity checks pass a positive ``pad`` to
    push the dropped tail below their tolerance; stepping (which clips to
    the chart window anyway) uses the default.
    """
    n = int(n)
    if n == 0:
        num = S.monomial(-1, -1.0)
    else:
        num = S.scale(S.derivative(faber(pair, n).as_series()), -1.0)
    den = S.mul(S.mul(pair.g_prime(), pair.f_prime()),
                _mixed_partial_along(pair, h, gauge))
    half = pair.order + abs(n) + int(pad)
    return S.divide_on_circle(num, den, (-half, half), samples=samples)


def flow_field(pair, h, n: int, gauge=(), samples: int = 1024,
               pad: int = 0) -> FlowField:
    """The direction-n variation (dg, df) from the one-sided split of u_n."""
    u = u_field(pair, h, n, gauge=gauge, samples=samples, pad=pad)
    half = 0.5 * u.coeff(1)
    bracket_g = S.add(_project(u, hi=0), S.monomial(1, half))
    bracket_f = S.scale(S.add(S.monomial(1, half), _project(u, lo=2)), -1.0)
    dg = S.mul(pair.g_prime(), bracket_g)
    df = S.mul(pair.f_prime(), bracket_f)
    return FlowField(n=n, u_series=u, dg=dg, df=df)


@dataclass(frozen=True)
class _ChartPoint:
    """Unvalidated stage point for multistage integrators (duck-typed pair)."""

    g: LaurentSeries
    f: LaurentSeries
    order: int

    def g_prime(self) -> LaurentSeries:
        return S.derivative(self.g)

    def f_prime(self) -> LaurentSeries:
        return S.derivative(self.f)


def _nudge(pair, ff: FlowField, eps: float) -> "_ChartPoint":
    g = S.add(pair.g, S.scale(ff.dg, eps))
    f = S.add(pair.f, S.scale(ff.df, eps))
    g = LaurentSeries(g.lo_exp, g.coeffs, AT_INFINITY, g.reliable)
    f = LaurentSeries(f.lo_exp, f.coeffs, AT_ZERO, f.reliable)
    return _ChartPoint(g, f, pair.order)


def _reassemble(point: "_ChartPoint") -> ConformalPair:
    """Clip a stage point to canonical windows, police drift, renormalize."""
    order = point.order
    g_map = {k: point.g.coeff(k) for k in range(-order, 2)}
    f_map = {k: point.f.coeff(k) for k in range(1, order + 2)}
    drift = abs(f_map[1] * g_map[1] - 1.0)
    if drift > 1e-9:
        raise ChartError("flow left chart")
    if drift > 1e-14:  # below roundoff a rescale only injects noise
        scale = 1.0 / (f_map[1] * g_map[1])
        f_map = {k: scale * c for k, c in f_map.items()}
    return from_coefficients(g_map, f_map, order)


def step(pair, h, n: int, eps: float, method: str = "euler") -> ConformalPair:
    """Advance the pair by eps along direction n and renormalize.

    Euler takes one field evaluation; rk4 takes four (classical weights).
    Normalization drift beyond 1e-9 before renormalization means the step
    size left the chart's validity and raises ChartError.
    """
    eps = float(eps)
    if method == "euler":
        k1 = flow_field(pair, h, n)
        return _reassemble(_nudge(pair, k1, eps))
    if method == "rk4":
        k1 = flow_field(pair, h, n)
        k2 = flow_field(_nudge(pair, k1, eps / 2), h, n)
        k3 = flow_field(_nudge(pair, k2, eps / 2), h, n)
        k4 = flow_field(_nudge(pair, k3, eps), h, n)
        dg = S.add(S.add(k1.dg, S.scale(S.add(k2.dg, k3.dg), 2.0)), k4.dg)
        df = S.add(S.add(k1.df, S.scale(S.add(k2.df, k3.df), 2.0)), k4.df)
        combo = FlowField(n=int(n), u_series=k1.u_series,
                          dg=S.scale(dg, 1.0 / 6.0), df=S.scale(df, 1.0 / 6.0))
        return _reassemble(_nudge(pair, combo, eps))
    raise ValueError(f"unknown method {method!r}")


def jacobian_check(pair, h, order: int, eps: float = 1e-5) -> float:
    """max |dt_m/deps along direction n - delta_{nm}| over |n|,|m| <= order."""
    order = int(order)
    worst = 0.0
    for n in range(-order, order + 1):
        tp, _, _ = time_variables(step(pair, h, n, +eps), h, order)
        tm, _, _ = time_variables(step(pair, h, n, -eps), h, order)
        for m in range(-order, order + 1):
            quotient = (tp[m] - tm[m]) / (2.0 * eps)
            want = 1.0 if m == n else 0.0
            worst = max(worst, abs(quotient - want))
    return worst


def _check_pad(pair) -> int:
    """Window padding for coefficientwise identity checks (see u_field)."""
    return 3 * pair.order + 16


def string_check(pair, h, gauge=()) -> float:
    """Residual of (w g' df0 - w f' dg0) * E - 1 over the reliable window."""
    ff = flow_field(pair, h, 0, gauge=gauge, pad=_check_pad(pair))
    e12 = _mixed_partial_along(pair, h, gauge)
    bracket = S.shift(S.sub(S.mul(pair.g_prime(), ff.df),
                            S.mul(pair.f_prime(), ff.dg)), 1)
    residual = S.sub(S.mul(bracket, e12), S.constant(1.0))
    return S.max_abs_diff_reliable(residual, S.zero())


def _halved_projection(q: LaurentSeries, n: int) -> LaurentSeries:
    """One-sided part of q with half its mean term, matching index sign n."""
    kept = _project(q, lo=1) if n >= 1 else _project(q, hi=-1)
    return S.add(kept, S.monomial(0, 0.5 * q.coeff(0)))


def lax_check(pair, h, table: GrunskyTable, n: int) -> float:
    """Residual of the bracket form of direction n, plus the canonical relation.

    Compares flow_field(n) against {B_n, g} and {B_n, f}, where B_n is the
    half-constant polynomial of index n, its t0-derivative is assembled
    from the n = 0 field through the same one-sided projection that
    defines it, and t0-derivatives inside the bracket are the n = 0 field.
    """
    n = int(n)
    if n == 0:
        raise ValueError("lax index must be nonzero")
    if abs(n) > table.order:
        raise SeriesError(f"lax index {n} exceeds table order {table.order}")
    pad = _check_pad(pair)
    ff0 = flow_field(pair, h, 0, pad=pad)
    ffn = flow_field(pair, h, n, pad=pad)
    poly = b_polynomial(pair, table, n).as_series()
    poly_prime = S.derivative(poly)
    if n >= 1:
        base = S.int_pow(pair.g, n - 1) if n > 1 else S.constant(1.0, AT_INFINITY)
        q = S.scale(S.mul(base, ff0.dg), float(n))
    else:
        depth = 2 * abs(n) + pair.order + 16
        base = S.int_pow(pair.f, n - 1, depth=depth)
        q = S.scale(S.mul(base, ff0.df), float(n))
    dpoly0 = _halved_projection(q, n)

    def bracket_with(ds: LaurentSeries, s_prime: LaurentSeries) -> LaurentSeries:
        return S.shift(S.sub(S.mul(poly_prime, ds), S.mul(dpoly0, s_prime)), 1)

    residual = max(
        S.max_abs_diff_reliable(ffn.dg, bracket_with(ff0.dg, pair.g_prime())),
        S.max_abs_diff_reliable(ffn.df, bracket_with(ff0.df, pair.f_prime())),
    )
    return max(residual, canonical_bracket_check(pair, h))


def canonical_bracket_check(pair, h) -> float:
    """Residual of {L, M} - L with L = g and M = g * d1(potential)(g, f)."""
    ms = h.as_sum() if isinstance(h, HamiltonianH) else h
    width = _halfwidth(pair, ms, 0) + 4
    window = (-width, width)
    a1 = eval_along(ms.d1(), pair, window)
    a11 = eval_along(ms.d11(), pair, window)
    a12 = eval_along(ms.d12(), pair, window)
    ff0 = flow_field(pair, h, 0, pad=_check_pad(pair))
    gp, fp = pair.g_prime(), pair.f_prime()
    d_m = S.add(S.mul(ff0.dg, a1),
                S.mul(pair.g, S.add(S.mul(a11, ff0.dg), S.mul(a12, ff0.df))))
    m_prime = S.add(S.mul(gp, a1),
                    S.mul(pair.g, S.add(S.mul(a11, gp), S.mul(a12, fp))))
    lhs = S.sub(S.shift(S.mul(gp, d_m), 1), S.shift(S.mul(ff0.dg, m_prime), 1))
    return S.max_abs_diff_reliable(lhs, pair.g)


def tau_gradient_check(pair, h, order: int, eps: float = 1e-5) -> dict:
    """Central-difference tests of what the tau function generates.

    Returns a dict of defects: ``gradient`` for d(logT)/dt_n vs v_n
    (v_0 at n = 0), ``hessian`` for d(v_m)/dt_n vs -|mn| b(m,n) off the
    axes, +|m| b(m,0) on the n = 0 column and +|n| b(0,n) on the m = 0
    row, ``v0_t0`` for d(v_0)/dt_0 vs -2 b(0,0), ``hessian_symmetry`` for
    equality of mixed partials, and ``max`` over all of them.
    """
    order = int(order)
    table = grunsky_table(pair, order)
    # The tau function is the pair's, so logT and the v's are evaluated at
    # full lattice order; ``order`` only bounds which entries are compared
    # (a shorter lattice would freeze t_k v_k products that still vary).
    base = toda_coordinates(pair, h)
    nonzero = [m for m in range(-order, order + 1) if m != 0]
    gradient = 0.0
    hessian = 0.0
    v0_t0 = 0.0
    quotients: dict = {}
    for n in range(-order, order + 1):
        cp = toda_coordinates(step(pair, h, n, +eps), h)
        cm = toda_coordinates(step(pair, h, n, -eps), h)
        d_logt = (cp.logT - cm.logT) / (2.0 * eps)
        want = base.v0 if n == 0 else base.v[n]
        gradient = max(gradient, abs(d_logt - want))
        d_v0 = (cp.v0 - cm.v0) / (2.0 * eps)
        if n == 0:
            v0_t0 = abs(d_v0 + 2.0 * table.b00)
        else:
            hessian = max(hessian, abs(d_v0 - abs(n) * table.entry(0, n)))
        for m in nonzero:
            d_vm = (cp.v[m] - cm.v[m]) / (2.0 * eps)
            quotients[(m, n)] = d_vm
            if n == 0:
                want_mn = abs(m) * table.entry(m, 0)
            else:
                want_mn = -abs(m * n) * table.entry(m, n)
            hessian = max(hessian, abs(d_vm - want_mn))
    symmetry = max(abs(quotients[(m, n)] - quotients[(n, m)])
                   for m in nonzero for n in nonzero)
    return {
        "gradient": gradient,
        "hessian": hessian,
        "hessian_symmetry": symmetry,
        "v0_t0": v0_t0,
        "max": max(gradient, hessian, symmetry, v0_t0),
    }
