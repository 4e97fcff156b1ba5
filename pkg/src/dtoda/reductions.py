"""Reflection-symmetric reductions and the boundary Green kernel.

A pair sits on the reflection-symmetric subfamily when f is the image of
g under the unit-circle reflection w -> 1/conj(g(1/conj(w))).  There the
exterior image domain carries a classical Dirichlet Green's function

    G_dom(z1, z2) = log |(G(z1) - G(z2)) / (G(z1) * conj(G(z2)) - 1)|,

with G the functional inverse of g, and the coordinate lattice collapses:
t(-n) = -conj(t(n)), v(-n) = -conj(v(n)), with t(0) and v0 real.

Subtracting the logarithmic singularity log|1/z1 - 1/z2| leaves a kernel
whose double expansion in z1^{-m} * conj(z2)^{-n} has finitely many
sources per entry.  Written through the lattice coefficient table,

    kernel(0,0) = -b00,      kernel(m,0) = b(m,0),
    kernel(0,n) = -b(-n,0),  kernel(m,n) = b(m,-n)    (m, n >= 1),

which is half the second-derivative table of log tau: each entry equals
the coefficient of z1^{-m} conj(z2)^{-n} in (1/2) D(z1) D(z2) log tau for
the generating operator D(z) = d/dt(0) + sum_n z^{-n}/n d/dt(n) (+ the
conjugate directions).  ``green_coefficients`` builds the left side from
the inverse map alone and ``green_identity_check`` compares the two —
a finite, coefficientwise form of an infinite hierarchy of constraints
on log tau.

Potentials enter the reflection checks only through a reality condition:
every monomial c * z1^mu * z2^{-nu} needs the partner
conj(c) * z1^nu * z2^{-mu}, so that H(z, 1/conj(z)) is real-valued.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from . import series as S
from .series import AT_INFINITY, LaurentSeries, SeriesError
from .conformal_pair import sigma_conjugate
from .coords import time_variables, toda_coordinates, v_zero
from .grunsky import _log2d, _padded_series, grunsky_table


class SigmaAdmissibilityError(ValueError):
    """The potential breaks the reflection reality condition."""


def require_sigma_admissible(h) -> None:
    """Raise unless every monomial (mu, nu, c) has partner (nu, mu, conj(c))."""
    merged: Dict[Tuple[int, int], complex] = {}
    for mu, nu, c in h.terms:
        merged[(mu, nu)] = merged.get((mu, nu), 0.0) + c
    for (mu, nu), c in merged.items():
        partner = merged.get((nu, mu))
        if partner is None or abs(partner - np.conj(c)) > 1e-12 * max(1.0, abs(c)):
            raise SigmaAdmissibilityError("H not Σ-admissible")


def sigma_coordinate_check(g: LaurentSeries, h, order: int) -> float:
    """Largest reflection-reality defect of the coordinates of (g, sigma g).

    Builds the pair whose f is the reflection image of g, computes the
    lattice coordinates up to ``order`` and returns the max of
    |t(-n) + conj(t(n))|, |v(-n) + conj(v(n))| over n >= 1, together
    with |Im t(0)| and |Im v0|.  The pair is carried well past ``order``
    because the reflection image's tail decays at the rate set by its own
    nearest singularity, which for moderate perturbations of w can be as
    slow as ~0.5 per exponent.
    """
    require_sigma_admissible(h)
    order = int(order)
    pair = sigma_conjugate(g, order=max(3 * order, order + 32))
    t, v, _ = time_variables(pair, h, order)
    v0 = v_zero(pair, h)
    out = max(abs(np.imag(t[0])), abs(np.imag(v0)))
    for n in range(1, order + 1):
        out = max(out, abs(t[-n] + np.conj(t[n])), abs(v[-n] + np.conj(v[n])))
    return float(out)


@dataclass(frozen=True)
class GreenCoefficients:
    """Double expansion of the regularized boundary Green kernel.

    ``kernel[(m, n)]`` multiplies z1^{-m} * conj(z2)^{-n} for
    0 <= m, n <= order; the conjugate block is implied by the Hermitian
    relation kernel(m, n) = conj(kernel(n, m)), whose numerical residue
    is recorded in ``hermitian_defect``.
    """

    order: int
    kernel: Dict[Tuple[int, int], complex]
    hermitian_defect: float

    def entry(self, m: int, n: int) -> complex:
        return self.kernel[(m, n)]


def green_coefficients(g: LaurentSeries, order: int) -> GreenCoefficients:
    """Kernel table of G_dom - log|1/z1 - 1/z2| from the inverse map alone.

    With G the inverse of g and Gbar the series with conjugated
    coefficients, the two generating logs

        log((G(z1) - G(z2)) / (z1 - z2)),
        log((G(z1) * Gbar(y) - 1) / (z1 * y)),      y = conj(z2),

    are expanded as nested formal Laurent series.  The first contributes
    only its constant log(beta) to the stored table: its genuinely
    bivariate terms pair z1 with z2, not conj(z2), so they fall outside
    the stored index family.  The second is jointly a power series in
    1/z1 and 1/y and carries every remaining entry.  The stored windows
    of ``g`` are treated as exact map data, so each entry is exact up to
    roundoff (polynomial g loses nothing to truncation).
    """
    n_max = int(order)
    if n_max < 1:
        raise SeriesError(f"kernel order {n_max} must be >= 1")
    depth = n_max + 4
    g_wide = _padded_series(g, -depth, 1, AT_INFINITY)
    big_g = S.invert_function(g_wide)
    beta = big_g.coeff(1)

    # G(z)/(beta z) = 1 + sum_{i>=1} u_i z^-i
    u = np.array([big_g.coeff(1 - i) / beta for i in range(1, n_max + 1)])
    w = np.zeros((n_max + 1, n_max + 1), dtype=np.complex128)
    w[1:, 0] = u
    w[0, 1:] = np.conj(u)
    w[1:, 1:] = np.outer(u, np.conj(u))
    w[1, 1] -= 1.0 / (beta * np.conj(beta))
    l_mixed = _log2d(w)

    const_holo = cmath.log(beta)
    const_mixed = const_holo + cmath.log(np.conj(beta))
    kernel: Dict[Tuple[int, int], complex] = {(0, 0): const_holo - const_mixed}
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            if m or n:
                kernel[(m, n)] = -l_mixed[m, n]

    herm = 0.0
    for m in range(n_max + 1):
        for n in range(m, n_max + 1):
            herm = max(herm, abs(kernel[(m, n)] - np.conj(kernel[(n, m)])))
    return GreenCoefficients(n_max, kernel, float(herm))


def green_identity_check(g: LaurentSeries, h, order: int) -> float:
    """Max defect between the kernel table and its log-tau Hessian assembly.

    The right side resolves (1/2) D(z1) D(z2) log tau coefficientwise
    into lattice-table entries,

        (0,0) -> -b00        (half of  d^2 logT / dt0^2 = -2 b00),
        (m,0) -> b(m,0),     (0,n) -> -b(-n,0),     (m,n) -> b(m,-n),

    and compares against ``green_coefficients``.  The assembly never
    applies D(z) as a differential operator; the identity is independent
    of the potential, which is validated for the reflection reality
    condition and enters nothing else.
    """
    require_sigma_admissible(h)
    n_max = int(order)
    # The pair runs three times deeper than the table so that the
    # reflection image's truncation sits far below the comparison floor.
    pair = sigma_conjugate(g, order=3 * n_max)
    table = grunsky_table(pair, n_max)
    left = green_coefficients(g, n_max)
    out = 0.0
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            if m == 0 and n == 0:
                right = -table.b00
            elif n == 0:
                right = table.entry(m, 0)
            elif m == 0:
                right = -table.entry(-n, 0)
            else:
                right = table.entry(m, -n)
            out = max(out, abs(left.kernel[(m, n)] - right))
    return float(out)


def real_subspace_check(pair, h, order: int) -> float:
    """Largest imaginary part across t, v, v0 and logT.

    On pairs with real coefficients and a potential that is real on real
    arguments, every coordinate and log tau itself are real; the returned
    defect is the numerical distance from that subspace.
    """
    snap = toda_coordinates(pair, h, int(order))
    out = max(abs(np.imag(snap.v0)), abs(np.imag(snap.logT)))
    for val in snap.t.values():
        out = max(out, abs(np.imag(val)))
    for val in snap.v.values():
        out = max(out, abs(np.imag(val)))
    return float(out)
