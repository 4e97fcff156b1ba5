"""Time/velocity coordinates, the v_0 potential, and the tau function.

Given a conformal-map pair (g, f) and a monomial potential, every quantity
here is a residue of an exact truncated-Laurent product in w:

* ``time_variables`` — with M1 = d1(potential)(g, f) * g' and
  M2 = d2(potential)(g, f) * f',

      t_n  = res(M1 * g^-n) / n      v_n  = res(M1 * g^n)       (n >= 1)
      t_-n = res(M2 * f^n) / n       v_-n = res(M2 * f^-n)
      t_0  = res(M1)                 t0_alt = -res(M2),

  the two t_0 expressions agreeing for any valid pair/potential.

* ``v_zero`` — res(M1 * log(g/w) + M2 * log(f/w) - potential(g, f)/w),
  with the two logarithm branches paired: log of f's linear coefficient is
  taken as minus the log of g's, never computed independently.

* ``plemelj_check`` — expands g*d1(potential)(g, f) in the basis {g^k} and
  -f*d2(potential)(g, f) in {f^k} by residues and compares the
  coefficients against (n*t_n, t_0, v_n) and (-n*t_-n, t_0, -v_-n); the
  returned defect is a dual-path consistency measure for the whole
  coordinate construction.

* ``log_tau`` — Z1 = t_0*v_0/2; Z2 = (res(M1*Phi(g)) + res(M2*Psi(f)))/2
  where Phi(z) = sum v_n/n z^-n and Psi(z) = sum v_-n/n z^n; Z3 =
  (res(J1(g,f)*g') + res(J2(g,f)*f'))/4 with (J1, J2) the antiderivative
  pair; and the closed form z2_closed = (sum t_n v_n + sum t_-n v_-n)/2,
  which Z2 reproduces through the series composition.

Gauge monomials (single-variable terms) enter ``time_variables``,
``v_zero`` and ``plemelj_check`` through the optional ``gauge`` argument;
the tau function is only defined for a pure two-variable potential.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from . import series as S
from .series import LaurentSeries
from .hamiltonian import GaugeTerm, HamiltonianH, MonomialSum, eval_along, gauge_sum, j_pair


@dataclass(frozen=True)
class TodaCoordinates:
    """Full coordinate snapshot of a pair under a potential.

    ``t`` covers |n| <= order (including n = 0), ``v`` covers nonzero
    |n| <= order.  ``t0_alt`` is the second contour expression for t_0 and
    agrees with ``t[0]`` to ~1e-10 for healthy inputs; ``z2_closed`` is
    the closed form that ``z_parts[1]`` reproduces.
    """

    order: int
    t: Dict[int, complex]
    v: Dict[int, complex]
    v0: complex
    t0_alt: complex
    logT: complex
    z_parts: Tuple[complex, complex, complex]
    z2_closed: complex


def _total_sum(h, gauge: Sequence[GaugeTerm]) -> MonomialSum:
    ms = h.as_sum() if isinstance(h, HamiltonianH) else h
    if gauge:
        ms = ms + gauge_sum(gauge)
    return ms


def _halfwidth(pair, ms: MonomialSum, order: int) -> int:
    """Window half-width for residue work: structural support plus a
    buffer that pushes clipped-tail contributions below 1e-13."""
    spread = max((abs(mu) + abs(nu) for mu, nu, _ in ms.terms), default=1)
    return pair.order + order + 2 * spread + 32


def _m_series(pair, ms: MonomialSum, width: int):
    """M1 = d1(ms)(g, f) * g' and M2 = d2(ms)(g, f) * f' on (-width, width)."""
    a1 = eval_along(ms.d1(), pair, (-width, width))
    a2 = eval_along(ms.d2(), pair, (-width, width))
    return S.mul(a1, pair.g_prime()), S.mul(a2, pair.f_prime())


def _power_chain(base: LaurentSeries, order: int, depth: int) -> Dict[int, LaurentSeries]:
    """base**k for k = -order..order, built by repeated multiplication."""
    powers = {0: S.constant(1.0), 1: base}
    if order >= 1:
        powers[-1] = S.int_pow(base, -1, depth=depth)
    for k in range(2, order + 1):
        powers[k] = S.mul(powers[k - 1], base)
        powers[-k] = S.mul(powers[-k + 1], powers[-1])
    return powers


def time_variables(pair, h, order: int, gauge: Sequence[GaugeTerm] = ()):
    """The maps t (|n| <= order, with t[0]) and v (n != 0), plus t0_alt."""
    order = int(order)
    if order > pair.order:
        raise ValueError("coordinate order exceeds pair order")
    total = _total_sum(h, gauge)
    width = _halfwidth(pair, total, order)
    m1, m2 = _m_series(pair, total, width)
    depth = width + order + 8
    gp = _power_chain(pair.g, order, depth)
    fp = _power_chain(pair.f, order, depth)
    t: Dict[int, complex] = {0: S.residue(m1)}
    t0_alt = -S.residue(m2)
    v: Dict[int, complex] = {}
    for n in range(1, order + 1):
        t[n] = S.residue_mul(m1, gp[-n]) / n
        v[n] = S.residue_mul(m1, gp[n])
        t[-n] = S.residue_mul(m2, fp[n]) / n
        v[-n] = S.residue_mul(m2, fp[-n])
    return t, v, t0_alt


def _paired_logs(pair, depth: int):
    """log(g/w) and log(f/w) with the branch of log a1 forced to -log b."""
    cg, _, ug = S.split_normalize(pair.g)
    cf, _, uf = S.split_normalize(pair.f)
    lb = cmath.log(cg)
    log_g = S.add(S.constant(lb), S.log1p(ug, depth=depth))
    log_f = S.add(S.constant(-lb), S.log1p(uf, depth=depth))
    return log_g, log_f


def v_zero(pair, h, gauge: Sequence[GaugeTerm] = ()) -> complex:
    """res(M1 log(g/w) + M2 log(f/w) - potential(g, f)/w)."""
    total = _total_sum(h, gauge)
    width = _halfwidth(pair, total, pair.order)
    m1, m2 = _m_series(pair, total, width)
    log_g, log_f = _paired_logs(pair, width)
    h_along = eval_along(total, pair, (-width, width))
    return (S.residue_mul(m1, log_g) + S.residue_mul(m2, log_f)
            - S.coeff(h_along, 0))


def phi_psi(v: Dict[int, complex], order: int) -> Tuple[LaurentSeries, LaurentSeries]:
    """Phi(z) = sum_{n=1..order} v_n/n z^-n and Psi(z) = sum v_-n/n z^n."""
    order = int(order)
    phi = LaurentSeries.from_pairs(
        {-n: v[n] / n for n in range(1, order + 1)},
        S.AT_INFINITY, reliable=(-order, S.POS_INF))
    psi = LaurentSeries.from_pairs(
        {n: v[-n] / n for n in range(1, order + 1)},
        S.AT_ZERO, reliable=(S.NEG_INF, order))
    return phi, psi


def plemelj_check(pair, h, order: int, gauge: Sequence[GaugeTerm] = ()) -> float:
    """Max defect of the two basis expansions against (t, v, t_0)."""
    order = int(order)
    total = _total_sum(h, gauge)
    t, v, _ = time_variables(pair, h, order, gauge)
    width = _halfwidth(pair, total, order)
    x1 = S.mul(eval_along(total.d1(), pair, (-width, width)), pair.g)
    x2 = S.scale(S.mul(eval_along(total.d2(), pair, (-width, width)), pair.f), -1.0)
    depth = width + order + 8
    gp = _power_chain(pair.g, order + 1, depth)
    fp = _power_chain(pair.f, order + 1, depth)
    dg, df = pair.g_prime(), pair.f_prime()
    defect = 0.0
    for k in range(-order, order + 1):
        a_k = S.residue_mul(S.mul(x1, gp[-k - 1]), dg)
        b_k = S.residue_mul(S.mul(x2, fp[-k - 1]), df)
        if k >= 1:
            want_a, want_b = k * t[k], -v[-k]
        elif k == 0:
            want_a, want_b = t[0], t[0]
        else:
            want_a, want_b = v[-k], k * t[k]
        defect = max(defect, abs(a_k - want_a), abs(b_k - want_b))
    return defect


def _compose_tail(coeffs, base: LaurentSeries, lo: int, hi: int) -> LaurentSeries:
    """sum_{n=1..len} coeffs[n-1] * base**n via Horner with clipping."""
    acc = None
    for cn in reversed(list(coeffs)):
        head = S.constant(cn) if acc is None else S.add(S.constant(cn), acc)
        acc = S.clip(S.mul(head, base), lo, hi)
    if acc is None:
        return S.zero()
    return acc


def log_tau(pair, h: HamiltonianH, t: Dict[int, complex], v: Dict[int, complex],
            v0: complex):
    """(Z1, Z2, Z3, logT, z2_closed) for a pure two-variable potential."""
    order = max(n for n in t if n >= 0)
    ms = h.as_sum()
    width = _halfwidth(pair, ms, order)
    m1, m2 = _m_series(pair, ms, width)
    depth = width + order + 8

    z1_part = t[0] * v0 / 2.0

    g_inv = S.int_pow(pair.g, -1, depth=depth)
    phi_g = _compose_tail([v[n] / n for n in range(1, order + 1)],
                          g_inv, -width, width)
    psi_f = _compose_tail([v[-n] / n for n in range(1, order + 1)],
                          pair.f, -width, width)
    z2_part = (S.residue_mul(m1, phi_g) + S.residue_mul(m2, psi_f)) / 2.0

    j1, j2 = j_pair(h)
    j1_along = eval_along(j1, pair, (-width, width))
    j2_along = eval_along(j2, pair, (-width, width))
    z3_part = (S.residue_mul(j1_along, pair.g_prime())
               + S.residue_mul(j2_along, pair.f_prime())) / 4.0

    z2_closed = sum(t[n] * v[n] + t[-n] * v[-n]
                    for n in range(1, order + 1)) / 2.0
    log_t = z1_part + z2_part + z3_part
    return z1_part, z2_part, z3_part, log_t, z2_closed


def toda_coordinates(pair, h: HamiltonianH, order: int | None = None) -> TodaCoordinates:
    """Assemble the full coordinate snapshot for a pure potential."""
    if order is None:
        order = pair.order
    order = int(order)
    t, v, t0_alt = time_variables(pair, h, order)
    v0 = v_zero(pair, h)
    z1_part, z2_part, z3_part, log_t, z2_closed = log_tau(pair, h, t, v, v0)
    return TodaCoordinates(order=order, t=t, v=v, v0=v0, t0_alt=t0_alt,
                           logT=log_t, z_parts=(z1_part, z2_part, z3_part),
                           z2_closed=z2_closed)
