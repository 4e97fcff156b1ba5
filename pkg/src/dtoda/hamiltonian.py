"""Two-variable Laurent-monomial potentials and their derivative calculus.

A potential is a finite sum  sum_j c_j * z1**mu_j * z2**(-nu_j).  Terms are
stored as ``(mu, nu, c)`` triples in that sign convention, so ``(1, 1, 1.0)``
is z1/z2 and ``(2, -1, 0.5)`` is 0.5*z1**2*z2.  Two layers:

* ``MonomialSum`` — the unconstrained algebra (any integer exponents,
  including zero) that partial derivatives and antiderivatives live in.
* ``HamiltonianH`` — the validated potential: every exponent nonzero, the
  mixed second partial not identically zero, and no ordered pair of terms
  with mu + mu' = 0 or nu + nu' = 0, so the antiderivative pair ``j_pair``
  stays inside the monomial algebra (no logarithmic terms).

``eval_along`` substitutes z1 = g(w), z2 = f(w) for a conformal-map pair and
returns a truncated Laurent series clipped to a requested window, choosing
an internal expansion depth large enough that the reliability claim covers
the window.

``gauge_shift_constants`` gives the closed-form origin shifts of the
time/velocity coordinates induced by adding single-variable monomials
c*z1**k or c*z2**k to the potential:

    z1**k, k >= 1:  t_k   += c        z1**k, k <= -1:  v_{-k} += c*k
    z2**k, k <= -1: t_k   += -c       z2**k, k >= 1:   v_{-k} += c*k

with t_0, v_0 and every other coordinate unchanged.  Each shift is the
residue the coordinate definition assigns to the added monomial (a winding
count, hence an exact integer multiple of c); the v_0 integrand's
logarithmic part cancels its -potential/w part by integration by parts, so
v_0 never moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from . import series as S
from .series import LaurentSeries


class LogObstructionError(ValueError):
    """An exponent pairing would force a logarithmic antiderivative."""


def _merge_terms(terms) -> Tuple[Tuple[int, int, complex], ...]:
    """Combine like monomials, drop exact zeros, sort for determinism."""
    acc: dict = {}
    for mu, nu, c in terms:
        key = (int(mu), int(nu))
        acc[key] = acc.get(key, 0j) + complex(c)
    return tuple(
        (mu, nu, c) for (mu, nu), c in sorted(acc.items()) if c != 0
    )


@dataclass(frozen=True)
class MonomialSum:
    """Finite sum  c * z1**mu * z2**(-nu)  with unconstrained exponents."""

    terms: Tuple[Tuple[int, int, complex], ...]

    @staticmethod
    def of(*terms) -> "MonomialSum":
        return MonomialSum(_merge_terms(terms))

    def __add__(self, other: "MonomialSum") -> "MonomialSum":
        return MonomialSum(_merge_terms(tuple(self.terms) + tuple(other.terms)))

    def scaled(self, factor) -> "MonomialSum":
        factor = complex(factor)
        return MonomialSum(_merge_terms((m, n, c * factor) for m, n, c in self.terms))

    def d1(self) -> "MonomialSum":
        return MonomialSum(_merge_terms(
            (mu - 1, nu, c * mu) for mu, nu, c in self.terms if mu
        ))

    def d2(self) -> "MonomialSum":
        # d/dz2 of z2**(-nu) is -nu * z2**(-nu-1), i.e. nu -> nu + 1.
        return MonomialSum(_merge_terms(
            (mu, nu + 1, -c * nu) for mu, nu, c in self.terms if nu
        ))

    def d11(self) -> "MonomialSum":
        return MonomialSum(_merge_terms(
            (mu - 2, nu, c * mu * (mu - 1))
            for mu, nu, c in self.terms if mu not in (0, 1)
        ))

    def d12(self) -> "MonomialSum":
        return MonomialSum(_merge_terms(
            (mu - 1, nu + 1, -c * mu * nu)
            for mu, nu, c in self.terms if mu and nu
        ))


@dataclass(frozen=True)
class HamiltonianH:
    """Validated potential  sum c * z1**mu * z2**(-nu).

    Rejects exponent families that break the downstream machinery: a zero
    mu or nu (the term would be a pure gauge monomial, handled separately
    by ``GaugeTerm``), a vanishing mixed second partial, or an ordered
    term pair with mu + mu' = 0 or nu + nu' = 0, for which the
    antiderivative pair would need a logarithm.
    """

    terms: Tuple[Tuple[int, int, complex], ...]

    def __post_init__(self):
        merged = _merge_terms(self.terms)
        object.__setattr__(self, "terms", merged)
        if not merged:
            raise ValueError("mixed second partial identically zero")
        for mu, nu, _ in merged:
            if mu == 0 or nu == 0:
                raise ValueError("potential exponents mu, nu must be nonzero")
        for mu, nu, _ in merged:
            for mup, nup, _ in merged:
                if mu + mup == 0 or nu + nup == 0:
                    raise LogObstructionError("log obstruction in J construction")

    @staticmethod
    def of(*terms) -> "HamiltonianH":
        return HamiltonianH(tuple(terms))

    def as_sum(self) -> MonomialSum:
        return MonomialSum(self.terms)


def partials(h) -> Tuple[MonomialSum, MonomialSum, MonomialSum]:
    """First partials and the mixed second partial, termwise."""
    ms = h if isinstance(h, MonomialSum) else h.as_sum()
    return ms.d1(), ms.d2(), ms.d12()


def eval_along(ms, pair, window, depth: int | None = None) -> LaurentSeries:
    """Substitute z1 = g(w), z2 = f(w) and clip to ``window``.

    ``depth`` controls the geometric-series truncation used for negative
    powers; the default is generous enough that the result's reliability
    claim covers the requested window.
    """
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise ValueError("empty window")
    terms = ms.terms
    if depth is None:
        spread = max((abs(mu) + abs(nu) for mu, nu, _ in terms), default=0)
        depth = max(16, (hi - lo) + 2 * spread + 8)
    g_pows: dict = {}
    f_pows: dict = {}

    def power(base: LaurentSeries, cache: dict, k: int) -> LaurentSeries:
        if k not in cache:
            cache[k] = S.int_pow(base, k, depth=depth)
        return cache[k]

    acc = None
    for mu, nu, c in terms:
        if mu and nu:
            prod = S.mul(power(pair.g, g_pows, mu), power(pair.f, f_pows, -nu))
        elif mu:
            prod = power(pair.g, g_pows, mu)
        elif nu:
            prod = power(pair.f, f_pows, -nu)
        else:
            prod = S.constant(1.0)
        piece = S.clip(S.scale(prod, c), lo, hi)
        acc = piece if acc is None else S.add(acc, piece)
    if acc is None:
        return LaurentSeries(lo, np.zeros(hi - lo + 1, dtype=np.complex128),
                             S.TWO_SIDED, (S.NEG_INF, S.POS_INF))
    return acc


def j_pair(h) -> Tuple[MonomialSum, MonomialSum]:
    """The antiderivative pair (J1, J2) of the product rule

        -dJ1/dz2 = dJ2/dz1 = (potential) * (mixed second partial),

    accumulated over ordered term pairs.  Any valid choice differs from
    this one by functions of z1 alone or z2 alone, which drop out of every
    residue downstream.
    """
    ms = h if isinstance(h, MonomialSum) else h.as_sum()
    j1: list = []
    j2: list = []
    for mu, nu, c in ms.terms:
        for mup, nup, cp in ms.terms:
            if mu + mup == 0 or nu + nup == 0:
                raise LogObstructionError("log obstruction in J construction")
            w = c * cp * mup * nup
            j1.append((mu + mup - 1, nu + nup, -w / (nu + nup)))
            j2.append((mu + mup, nu + nup + 1, -w / (mu + mup)))
    return MonomialSum(_merge_terms(j1)), MonomialSum(_merge_terms(j2))


@dataclass(frozen=True)
class GaugeTerm:
    """A single-variable monomial  c * z1**exponent  or  c * z2**exponent."""

    variable: str
    exponent: int
    c: complex

    def __post_init__(self):
        if self.variable not in ("z1", "z2"):
            raise ValueError("gauge variable must be 'z1' or 'z2'")
        if int(self.exponent) == 0:
            raise ValueError("gauge exponent must be nonzero")
        object.__setattr__(self, "exponent", int(self.exponent))
        object.__setattr__(self, "c", complex(self.c))

    def as_sum(self) -> MonomialSum:
        k = self.exponent
        if self.variable == "z1":
            return MonomialSum.of((k, 0, self.c))
        return MonomialSum.of((0, -k, self.c))


def gauge_sum(gauge_terms: Sequence[GaugeTerm]) -> MonomialSum:
    """All gauge monomials combined into one sum."""
    total = MonomialSum.of()
    for gt in gauge_terms:
        total = total + gt.as_sum()
    return total


def gauge_shift_constants(gauge_terms: Sequence[GaugeTerm], order: int):
    """Closed-form coordinate shifts from adding the gauge monomials.

    Returns ``(t_shift, v_shift, v0_shift)``: ``t_shift`` maps every
    |n| <= order (including n = 0, always zero there), ``v_shift`` maps
    every nonzero |n| <= order, and ``v0_shift`` vanishes identically.
    """
    order = int(order)
    t_shift = {n: 0j for n in range(-order, order + 1)}
    v_shift = {n: 0j for n in range(-order, order + 1) if n != 0}
    for gt in gauge_terms:
        k, c = gt.exponent, gt.c
        if gt.variable == "z1":
            if 1 <= k <= order:
                t_shift[k] += c
            elif k <= -1 and -k <= order:
                v_shift[-k] += c * k
        else:
            if k <= -1 and -k <= order:
                t_shift[k] += -c
            elif 1 <= k <= order:
                v_shift[-k] += c * k
    return t_shift, v_shift, 0j
