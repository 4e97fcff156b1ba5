"""Truncated Laurent-series arithmetic with reliability windows.

A :class:`LaurentSeries` stores a finite window of complex coefficients
``c[lo_exp] .. c[lo_exp + len - 1]`` for powers of one variable ``w``,
tagged with

* a *flavor* describing where the underlying function is a germ:
  ``AT_ZERO`` (finitely many negative powers, infinite tail may extend
  upward), ``AT_INFINITY`` (finitely many positive powers, tail extends
  downward), or ``TWO_SIDED`` (no one-sided claim); and
* a *reliable window* ``(r_lo, r_hi)``: the exponent range on which
  stored-or-zero coefficients are trusted to equal the represented
  function's true coefficients.  Queries outside the stored window return
  exactly zero, and the reliable window may extend past the stored window
  (a claim that the true coefficients there are zero).  Exact polynomials
  carry the sentinels ``(-inf, +inf)``.  Operations that truncate an
  infinite tail (negative integer powers, ``log1p``, ``invert_function``,
  ``divide_on_circle``, lossy clips) install finite edges, and the ring
  operations propagate them.

Reliability propagation through a product pairs a truncation edge of one
factor with the *leading* exponent of the other factor (the exponent
carrying its largest coefficient): a dropped tail times a leading O(1)
coefficient is the first contamination that matters.  Dropped tails paired
with sub-leading coefficients, and dropped x dropped terms, are of the
order of the dropped coefficients themselves; with geometrically decaying
tails and the window depths used throughout this package they sit far
below every tolerance in the verification suite, and are waived.  The
iterative solvers (Neumann reciprocal, Newton functional inversion) claim
their output reliability from their convergence analysis rather than from
interval propagation through every intermediate; round-trip identities in
the test-suite check those claims directly.

All coefficients are complex doubles, all operations are pure (inputs are
never mutated) and deterministic: identical inputs give bit-identical
outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

AT_ZERO = "AtZero"
AT_INFINITY = "AtInfinity"
TWO_SIDED = "TwoSided"

_FLAVORS = (AT_ZERO, AT_INFINITY, TWO_SIDED)

NEG_INF = float("-inf")
POS_INF = float("inf")


class SeriesError(ValueError):
    """Base class for series-arithmetic failures."""


class WindowUnderflowError(SeriesError):
    """An operation produced an empty reliable window."""


class NonInvertibleError(SeriesError):
    """A required leading coefficient is (numerically) zero."""


class CircleZeroError(SeriesError):
    """A denominator (nearly) vanishes on the sampling circle."""


def _as_reliable(value) -> tuple:
    if value is None:
        return (NEG_INF, POS_INF)
    r_lo, r_hi = value
    r_lo = NEG_INF if math.isinf(float(r_lo)) else int(r_lo)
    r_hi = POS_INF if math.isinf(float(r_hi)) else int(r_hi)
    return (r_lo, r_hi)


@dataclass(frozen=True)
class LaurentSeries:
    """Finite window of Laurent coefficients with flavor and reliability.

    Fields
    ------
    lo_exp:   exponent of ``coeffs[0]``; entry k holds the coefficient of
              ``w**(lo_exp + k)``.
    coeffs:   complex128 array (read-only), length >= 1.
    flavor:   one of AT_ZERO / AT_INFINITY / TWO_SIDED.
    reliable: pair (r_lo, r_hi); ints or -inf/+inf sentinels.
    """

    lo_exp: int
    coeffs: np.ndarray
    flavor: str = TWO_SIDED
    reliable: tuple = (NEG_INF, POS_INF)

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise SeriesError("coefficient window must be a non-empty 1-d array")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "lo_exp", int(self.lo_exp))
        if self.flavor not in _FLAVORS:
            raise SeriesError(f"unknown flavor {self.flavor!r}")
        r_lo, r_hi = _as_reliable(self.reliable)
        if r_lo > r_hi:
            raise WindowUnderflowError("window underflow: empty reliable window")
        object.__setattr__(self, "reliable", (r_lo, r_hi))

    # -- basic geometry ----------------------------------------------------

    @property
    def hi_exp(self) -> int:
        return self.lo_exp + self.coeffs.size - 1

    @property
    def width(self) -> int:
        return self.coeffs.size

    @property
    def lead(self) -> int:
        """Exponent of the largest stored coefficient (ties: lowest)."""
        return self.lo_exp + int(np.argmax(np.abs(self.coeffs)))

    # -- queries -----------------------------------------------------------

    def coeff(self, k: int) -> complex:
        """Stored coefficient of w**k, or exactly zero outside the window."""
        idx = int(k) - self.lo_exp
        if 0 <= idx < self.coeffs.size:
            return complex(self.coeffs[idx])
        return 0.0 + 0.0j

    def residue(self) -> complex:
        """Coefficient of w**-1."""
        return self.coeff(-1)

    def is_reliable(self, k: int) -> bool:
        r_lo, r_hi = self.reliable
        return r_lo <= k <= r_hi

    def reliable_coeff(self, k: int) -> complex:
        if not self.is_reliable(k):
            raise WindowUnderflowError(
                f"window underflow: exponent {k} outside reliable {self.reliable}"
            )
        return self.coeff(k)

    def max_abs_reliable(self) -> float:
        """Largest |coefficient| over the reliable part of the stored window."""
        r_lo, r_hi = self.reliable
        lo = self.lo_exp if math.isinf(r_lo) else max(int(r_lo), self.lo_exp)
        hi = self.hi_exp if math.isinf(r_hi) else min(int(r_hi), self.hi_exp)
        if lo > hi:
            return 0.0
        seg = self.coeffs[lo - self.lo_exp : hi - self.lo_exp + 1]
        return float(np.max(np.abs(seg)))

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_pairs(pairs, flavor: str = TWO_SIDED, reliable=None) -> "LaurentSeries":
        """Build from {exponent: coefficient} or [(exponent, coefficient)]."""
        items = list(pairs.items()) if isinstance(pairs, Mapping) else list(pairs)
        if not items:
            return LaurentSeries(0, np.zeros(1), flavor, _as_reliable(reliable))
        exps = [int(e) for e, _ in items]
        lo, hi = min(exps), max(exps)
        arr = np.zeros(hi - lo + 1, dtype=np.complex128)
        for e, c in items:
            arr[int(e) - lo] += complex(c)
        return LaurentSeries(lo, arr, flavor, _as_reliable(reliable))

    # -- arithmetic sugar ------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)


# ---------------------------------------------------------------------------
# constructors


def monomial(exponent: int, coefficient=1.0, flavor: str = TWO_SIDED) -> LaurentSeries:
    return LaurentSeries(int(exponent), np.array([coefficient], dtype=np.complex128), flavor)


def constant(value, flavor: str = TWO_SIDED) -> LaurentSeries:
    return monomial(0, value, flavor)


def zero(flavor: str = TWO_SIDED) -> LaurentSeries:
    return monomial(0, 0.0, flavor)


def _strip(a: LaurentSeries) -> LaurentSeries:
    """Same window, reliability dropped (internal use by solvers)."""
    return LaurentSeries(a.lo_exp, a.coeffs, a.flavor)


# ---------------------------------------------------------------------------
# flavor / reliability plumbing


def _is_exact(a: LaurentSeries) -> bool:
    return math.isinf(a.reliable[0]) and math.isinf(a.reliable[1])


def _merge_flavor(a: LaurentSeries, b: LaurentSeries) -> str:
    if a.flavor == b.flavor:
        return a.flavor
    # an exact polynomial is compatible with either germ flavor
    if a.flavor == TWO_SIDED and _is_exact(a):
        return b.flavor
    if b.flavor == TWO_SIDED and _is_exact(b):
        return a.flavor
    return TWO_SIDED


def _mul_reliable(a: LaurentSeries, b: LaurentSeries) -> tuple:
    """Reliability window of a product.

    A finite truncation edge of one factor contaminates the product from
    (edge + leading exponent of the other factor) outward; tails against
    sub-leading coefficients are at dropped-coefficient scale and waived
    (module docstring).
    """
    hi_cands = []
    if not math.isinf(a.reliable[1]):
        hi_cands.append(a.reliable[1] + b.lead)
    if not math.isinf(b.reliable[1]):
        hi_cands.append(b.reliable[1] + a.lead)
    lo_cands = []
    if not math.isinf(a.reliable[0]):
        lo_cands.append(a.reliable[0] + b.lead)
    if not math.isinf(b.reliable[0]):
        lo_cands.append(b.reliable[0] + a.lead)
    r_hi = min(hi_cands) if hi_cands else POS_INF
    r_lo = max(lo_cands) if lo_cands else NEG_INF
    if r_lo > r_hi:
        raise WindowUnderflowError("window underflow: product has empty reliable window")
    return (r_lo, r_hi)


def clip(a: LaurentSeries, lo: int, hi: int) -> LaurentSeries:
    """Restrict the stored window to [lo, hi].

    Discarding a nonzero coefficient moves the corresponding reliability
    edge inward (the discarded data becomes an untracked tail) and, when
    the support claim of a germ flavor is broken, demotes the flavor.
    """
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise SeriesError("clip: empty window requested")
    dropped_low = a.lo_exp < lo and bool(np.any(a.coeffs[: min(lo - a.lo_exp, a.width)] != 0))
    dropped_high = a.hi_exp > hi and bool(np.any(a.coeffs[max(hi - a.lo_exp + 1, 0) :] != 0))
    r_lo, r_hi = a.reliable
    flavor = a.flavor
    if dropped_low:
        r_lo = max(r_lo, lo)
        if flavor == AT_ZERO:
            flavor = TWO_SIDED
    if dropped_high:
        r_hi = min(r_hi, hi)
        if flavor == AT_INFINITY:
            flavor = TWO_SIDED
    if r_lo > r_hi:
        raise WindowUnderflowError("window underflow: clip removed all reliable data")
    new_lo = max(lo, a.lo_exp)
    new_hi = min(hi, a.hi_exp)
    if new_lo > new_hi:
        return LaurentSeries(lo, np.zeros(1), flavor, (r_lo, r_hi))
    arr = a.coeffs[new_lo - a.lo_exp : new_hi - a.lo_exp + 1]
    return LaurentSeries(new_lo, arr, flavor, (r_lo, r_hi))


def shift(a: LaurentSeries, j: int) -> LaurentSeries:
    """Multiply by w**j (exact)."""
    j = int(j)
    r_lo, r_hi = a.reliable
    r_lo = r_lo if math.isinf(r_lo) else r_lo + j
    r_hi = r_hi if math.isinf(r_hi) else r_hi + j
    return LaurentSeries(a.lo_exp + j, a.coeffs, a.flavor, (r_lo, r_hi))


# ---------------------------------------------------------------------------
# ring operations


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo = min(a.lo_exp, b.lo_exp)
    hi = max(a.hi_exp, b.hi_exp)
    arr = np.zeros(hi - lo + 1, dtype=np.complex128)
    arr[a.lo_exp - lo : a.hi_exp - lo + 1] += a.coeffs
    arr[b.lo_exp - lo : b.hi_exp - lo + 1] += b.coeffs
    r_lo = max(a.reliable[0], b.reliable[0])
    r_hi = min(a.reliable[1], b.reliable[1])
    if r_lo > r_hi:
        raise WindowUnderflowError("window underflow: sum has empty reliable window")
    return LaurentSeries(lo, arr, _merge_flavor(a, b), (r_lo, r_hi))


def sub(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return add(a, scale(b, -1.0))


def scale(a: LaurentSeries, factor) -> LaurentSeries:
    return LaurentSeries(a.lo_exp, a.coeffs * complex(factor), a.flavor, a.reliable)


def mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Windowed convolution product; reliability per module docstring."""
    reliable = _mul_reliable(a, b)
    arr = np.convolve(a.coeffs, b.coeffs)
    return LaurentSeries(a.lo_exp + b.lo_exp, arr, _merge_flavor(a, b), reliable)


def derivative(a: LaurentSeries) -> LaurentSeries:
    """Termwise d/dw."""
    exps = np.arange(a.lo_exp, a.hi_exp + 1, dtype=np.float64)
    arr = a.coeffs * exps
    r_lo, r_hi = a.reliable
    r_lo = r_lo if math.isinf(r_lo) else r_lo - 1
    r_hi = r_hi if math.isinf(r_hi) else r_hi - 1
    if a.width == 1 and a.lo_exp == 0:
        # derivative of a constant window: keep a well-formed zero window
        return LaurentSeries(0, np.zeros(1), a.flavor, (r_lo, r_hi))
    return LaurentSeries(a.lo_exp - 1, arr, a.flavor, (r_lo, r_hi))


def residue(a: LaurentSeries) -> complex:
    return a.residue()


def coeff(a: LaurentSeries, k: int) -> complex:
    return a.coeff(k)


# ---------------------------------------------------------------------------
# reduced products (single-coefficient extraction without full convolution)


def coeff_mul(a: LaurentSeries, b: LaurentSeries, k: int, check: bool = True) -> complex:
    """Coefficient of w**k in a*b, via one dot product.

    With ``check`` the reliability window of the (never materialized)
    product is computed and the request must fall inside it.
    """
    k = int(k)
    if check:
        r_lo, r_hi = _mul_reliable(a, b)
        if not (r_lo <= k <= r_hi):
            raise WindowUnderflowError(
                f"window underflow: coefficient {k} outside reliable ({r_lo}, {r_hi})"
            )
    i_lo = max(a.lo_exp, k - b.hi_exp)
    i_hi = min(a.hi_exp, k - b.lo_exp)
    if i_lo > i_hi:
        return 0.0 + 0.0j
    sa = a.coeffs[i_lo - a.lo_exp : i_hi - a.lo_exp + 1]
    sb = b.coeffs[k - i_hi - b.lo_exp : k - i_lo - b.lo_exp + 1][::-1]
    return complex(np.dot(sa, sb))


def residue_mul(a: LaurentSeries, b: LaurentSeries, check: bool = True) -> complex:
    """Residue (coefficient of w**-1) of a*b."""
    return coeff_mul(a, b, -1, check=check)


# ---------------------------------------------------------------------------
# normalization, powers, logarithm


def split_normalize(a: LaurentSeries) -> tuple:
    """Factor a = c * w**j * (1 + u) exactly on the stored window.

    The leading term is taken in the flavor direction (lowest stored
    nonzero exponent for AT_ZERO, highest for AT_INFINITY); u has exactly
    zero constant term and decays strictly in the flavor direction.
    """
    if a.flavor not in (AT_ZERO, AT_INFINITY):
        raise SeriesError("split_normalize needs a germ flavor (AtZero or AtInfinity)")
    nz = np.nonzero(a.coeffs)[0]
    if nz.size == 0:
        raise NonInvertibleError("non-invertible leading term: zero series")
    idx = int(nz[0]) if a.flavor == AT_ZERO else int(nz[-1])
    c = complex(a.coeffs[idx])
    if abs(c) < 1e-300:
        raise NonInvertibleError("non-invertible leading term")
    j = a.lo_exp + idx
    arr = (a.coeffs / c).copy()
    arr[idx] = 0.0  # subtract the leading 1 exactly
    r_lo, r_hi = a.reliable
    r_lo = r_lo if math.isinf(r_lo) else r_lo - j
    r_hi = r_hi if math.isinf(r_hi) else r_hi - j
    u = LaurentSeries(a.lo_exp - j, arr, a.flavor, (r_lo, r_hi))
    return c, j, u


def _decay_step(u: LaurentSeries) -> int:
    """Smallest |exponent| of a nonzero term of u; 0 for the zero window."""
    nz = np.nonzero(u.coeffs)[0]
    if nz.size == 0:
        return 0
    if u.flavor == AT_ZERO:
        step = u.lo_exp + int(nz[0])
    else:
        step = -(u.lo_exp + int(nz[-1]))
    if step < 1:
        raise SeriesError("series must strictly decay in its flavor direction")
    return step


def _geometric_sum(u: LaurentSeries, depth: int) -> LaurentSeries:
    """(1 + u)**-1 = sum over k of (-u)**k, truncated ``depth`` orders out.

    u must have zero constant term and strict one-sided support in its
    flavor direction.  The result's reliability is claimed from the
    truncation analysis: min(depth, u's own edge) in the flavor direction,
    unbounded on the exact side.
    """
    if abs(u.coeff(0)) != 0.0:
        raise SeriesError("geometric sum needs zero constant term")
    if u.flavor == AT_ZERO:
        window = (0, depth)
    elif u.flavor == AT_INFINITY:
        window = (-depth, 0)
    else:
        raise SeriesError("geometric sum needs a germ flavor")
    step = _decay_step(u)
    acc = constant(1.0, u.flavor)
    if step:
        term = constant(1.0, u.flavor)
        neg_u = _strip(scale(u, -1.0))
        k = 1
        while k * step <= depth:
            term = clip(mul(term, neg_u), window[0], window[1])
            if float(np.max(np.abs(term.coeffs))) == 0.0:
                break
            acc = add(acc, _strip(term))
            k += 1
    if u.flavor == AT_ZERO:
        r_hi = min(depth, u.reliable[1])
        return LaurentSeries(acc.lo_exp, acc.coeffs, u.flavor, (NEG_INF, r_hi))
    r_lo = max(-depth, u.reliable[0])
    return LaurentSeries(acc.lo_exp, acc.coeffs, u.flavor, (r_lo, POS_INF))


def _local_depth(depth, fallback_width: int) -> int:
    if depth is not None:
        return int(depth)
    return max(2 * int(fallback_width), 16)


def int_pow(a: LaurentSeries, k: int, depth: int | None = None) -> LaurentSeries:
    """Integer power a**k.

    k >= 0: repeated squaring of the exact windowed product.  k < 0:
    factor a = c * w**j * (1+u) (`split_normalize`), invert by the
    geometric series on u truncated ``depth`` local orders past the
    leading term, then raise the reciprocal to |k| by repeated squaring.
    """
    k = int(k)
    if k == 0:
        return constant(1.0, a.flavor)
    if k > 0:
        result = None
        base = a
        e = k
        while e:
            if e & 1:
                result = base if result is None else mul(result, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return result
    c, j, u = split_normalize(a)
    depth = _local_depth(depth, a.width)
    inv = _geometric_sum(u, depth)
    rec = shift(scale(inv, 1.0 / c), -j)
    return rec if k == -1 else int_pow(rec, -k)


def log1p(u: LaurentSeries, depth: int | None = None) -> LaurentSeries:
    """log(1 + u) as the alternating power sum, truncated at ``depth``.

    u must have exactly zero constant term and strictly one-sided support
    in its flavor direction.
    """
    if abs(u.coeff(0)) != 0.0:
        raise SeriesError("log1p: nonzero constant term")
    if u.flavor == AT_ZERO:
        exact_side_lo = True
    elif u.flavor == AT_INFINITY:
        exact_side_lo = False
    else:
        raise SeriesError("log1p needs a germ flavor (AtZero or AtInfinity)")
    depth = _local_depth(depth, u.width)
    step = _decay_step(u)
    if step == 0:
        return LaurentSeries(0, np.zeros(1), u.flavor, u.reliable)
    window = (0, depth) if exact_side_lo else (-depth, 0)
    acc = zero(u.flavor)
    power = constant(1.0, u.flavor)
    u_raw = _strip(u)
    sign = 1.0
    k = 1
    while k * step <= depth:
        power = clip(mul(power, u_raw), window[0], window[1])
        if float(np.max(np.abs(power.coeffs))) == 0.0:
            break
        acc = add(acc, scale(power, sign / k))
        sign = -sign
        k += 1
    if exact_side_lo:
        r_hi = min(depth, u.reliable[1])
        return LaurentSeries(acc.lo_exp, acc.coeffs, u.flavor, (NEG_INF, r_hi))
    r_lo = max(-depth, u.reliable[0])
    return LaurentSeries(acc.lo_exp, acc.coeffs, u.flavor, (r_lo, POS_INF))


# ---------------------------------------------------------------------------
# evaluation and composition helpers


def eval_at_points(a: LaurentSeries, pts: np.ndarray) -> np.ndarray:
    """Evaluate the stored window at complex points (Horner)."""
    pts = np.asarray(pts, dtype=np.complex128)
    vals = np.full(pts.shape, a.coeffs[-1], dtype=np.complex128)
    for c in a.coeffs[-2::-1]:
        vals = vals * pts + c
    if a.lo_exp:
        vals = vals * pts ** float(a.lo_exp)
    return vals


def _horner_positive(coeff_list: Sequence, base: LaurentSeries,
                     window: tuple) -> LaurentSeries:
    """sum_{k>=1} coeff_list[k-1] * base**k, Horner form with clipping."""
    acc = constant(coeff_list[-1], base.flavor)
    for c in reversed(coeff_list[:-1]):
        acc = clip(mul(acc, base), window[0] - 1, window[1] + 1)
        acc = add(acc, constant(c, base.flavor))
    return clip(mul(acc, base), window[0], window[1])


def _tail_horner(tail: Sequence, rec: LaurentSeries, window: tuple) -> LaurentSeries:
    """sum_{k>=1} tail[k-1] * rec**k with window clipping (rec decaying)."""
    if not tail:
        return zero(rec.flavor)
    acc = constant(tail[-1], rec.flavor)
    for c in reversed(tail[:-1]):
        acc = clip(mul(acc, rec), window[0] - 1, window[1] + 1)
        acc = add(acc, constant(c, rec.flavor))
    return clip(mul(acc, rec), window[0], window[1])


def invert_function(a: LaurentSeries) -> LaurentSeries:
    """Compositional inverse G with a(G(z)) = z, by Newton iteration.

    AT_ZERO input  a = a1*w + a2*w^2 + ...  (a1 != 0) gives G = z/a1 + ...
    on the window [1, hi_exp(a)], reliable up to that edge.  AT_INFINITY
    input a = b*w + b0 + b1/w + ... (b != 0) gives G = z/b + ... on a
    window mirroring the input depth, reliable down to that edge.
    Iteration count: ceil(log2(depth + 1)) + 2; the output reliability
    claim rests on the quadratic convergence of the iteration (round-trip
    identities are asserted in the test-suite).
    """
    if a.flavor == AT_ZERO:
        if abs(a.coeff(1)) < 1e-300:
            raise NonInvertibleError("non-invertible leading term: need a = a1*w + ...")
        if a.lo_exp < 1 and np.any(a.coeffs[: 1 - a.lo_exp] != 0):
            raise NonInvertibleError("non-invertible leading term: need a = a1*w + ...")
        depth = max(a.hi_exp - 1, 1)
        window = (1, 1 + depth)
        a1 = a.coeff(1)
        g = monomial(1, 1.0 / a1, AT_ZERO)
        zc = monomial(1, 1.0, AT_ZERO)
        acoeffs = [a.coeff(k) for k in range(1, a.hi_exp + 1)]
        dcoeffs = [k * a.coeff(k) for k in range(1, a.hi_exp + 1)]
        n_iter = math.ceil(math.log2(depth + 1)) + 2
        for _ in range(n_iter):
            comp = _horner_positive(acoeffs, g, (window[0], window[1] + 1))
            resid = sub(comp, zc)
            dacc = constant(dcoeffs[-1], AT_ZERO)
            for c in reversed(dcoeffs[:-1]):
                dacc = clip(mul(dacc, g), 0, window[1])
                dacc = add(dacc, constant(c, AT_ZERO))
            dinv = _strip(int_pow(dacc, -1, depth=depth + 2))
            g = sub(g, clip(mul(resid, dinv), window[0], window[1]))
            g = _strip(clip(g, window[0], window[1]))
        return LaurentSeries(g.lo_exp, g.coeffs, AT_ZERO, (NEG_INF, window[1]))
    if a.flavor == AT_INFINITY:
        if abs(a.coeff(1)) < 1e-300:
            raise NonInvertibleError("non-invertible leading term: need a = b*w + b0 + ...")
        if a.hi_exp > 1 and np.any(a.coeffs[2 - a.lo_exp :] != 0):
            raise NonInvertibleError("non-invertible leading term: need a = b*w + b0 + ...")
        depth = max(1 - a.lo_exp, 1)
        window = (1 - depth, 1)
        b = a.coeff(1)
        b0 = a.coeff(0)
        g = LaurentSeries.from_pairs({1: 1.0 / b, 0: -b0 / b}, AT_INFINITY)
        zc = monomial(1, 1.0, AT_INFINITY)
        tail = [a.coeff(-k) for k in range(1, depth + 1)]
        dtail = [-k * a.coeff(-k) for k in range(1, depth + 1)]
        n_iter = math.ceil(math.log2(depth + 1)) + 2
        for _ in range(n_iter):
            rec = _strip(int_pow(g, -1, depth=depth + 2))
            comp = _tail_horner(tail, rec, (window[0] - 1, 1))
            comp = add(comp, add(scale(g, b), constant(b0, AT_INFINITY)))
            resid = sub(comp, zc)
            dcomp = _tail_horner(dtail, rec, (window[0] - 1, 0))
            dcomp = clip(mul(dcomp, rec), window[0] - 1, 0)
            dcomp = add(dcomp, constant(b, AT_INFINITY))
            dinv = _strip(int_pow(dcomp, -1, depth=depth + 2))
            g = sub(g, clip(mul(resid, dinv), window[0], window[1]))
            g = _strip(clip(g, window[0], window[1]))
        return LaurentSeries(g.lo_exp, g.coeffs, AT_INFINITY, (window[0], POS_INF))
    raise SeriesError("invert_function needs a germ flavor")


# ---------------------------------------------------------------------------
# circle division


def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m <<= 1
    return m


def divide_on_circle(num: LaurentSeries, den: LaurentSeries,
                     window: tuple, samples: int = 1024) -> LaurentSeries:
    """Quotient num/den restricted to an exponent window.

    Samples both series at M-th roots of unity (M a power of two, at least
    4x the window width and at least ``samples``), divides pointwise and
    reads the window coefficients back off the discrete transform.  The
    denominator must stay away from zero on |w| = 1 (min sampled modulus
    > 1e-8).  Denominators with a single nonzero stored coefficient are
    divided exactly (shift and scale) instead of sampled.
    """
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise SeriesError("divide_on_circle: empty window")
    flavor = num.flavor if num.flavor == den.flavor else TWO_SIDED
    nz = np.nonzero(den.coeffs)[0]
    if nz.size == 0:
        raise CircleZeroError("denominator vanishes on circle")
    if nz.size == 1:
        c = complex(den.coeffs[nz[0]])
        j = den.lo_exp + int(nz[0])
        out = clip(shift(scale(num, 1.0 / c), -j), lo, hi)
        r_lo = lo if math.isinf(out.reliable[0]) else max(out.reliable[0], lo)
        r_hi = hi if math.isinf(out.reliable[1]) else min(out.reliable[1], hi)
        arr = np.zeros(hi - lo + 1, dtype=np.complex128)
        s_lo, s_hi = max(lo, out.lo_exp), min(hi, out.hi_exp)
        if s_lo <= s_hi:
            arr[s_lo - lo : s_hi - lo + 1] = out.coeffs[s_lo - out.lo_exp : s_hi - out.lo_exp + 1]
        return LaurentSeries(lo, arr, flavor, (r_lo, r_hi))
    width = hi - lo + 1
    m = max(_next_pow2(4 * width), _next_pow2(int(samples)))
    pts = np.exp(2j * np.pi * np.arange(m) / m)
    den_vals = eval_at_points(den, pts)
    if float(np.min(np.abs(den_vals))) <= 1e-8:
        raise CircleZeroError("denominator vanishes on circle")
    num_vals = eval_at_points(num, pts)
    spec = np.fft.fft(num_vals / den_vals) / m
    arr = spec[np.mod(np.arange(lo, hi + 1), m)]
    return LaurentSeries(lo, arr, flavor, (lo, hi))


# ---------------------------------------------------------------------------
# comparison helper (used by checks and tests)


def max_abs_diff_reliable(a: LaurentSeries, b: LaurentSeries) -> float:
    """max |a_k - b_k| over the intersection of reliable windows.

    The scan is capped by the union of stored windows: outside both, both
    sides are exactly zero.
    """
    r_lo = max(a.reliable[0], b.reliable[0])
    r_hi = min(a.reliable[1], b.reliable[1])
    if r_lo > r_hi:
        raise WindowUnderflowError("window underflow: no common reliable window")
    lo = min(a.lo_exp, b.lo_exp)
    hi = max(a.hi_exp, b.hi_exp)
    lo = lo if math.isinf(r_lo) else max(lo, int(r_lo))
    hi = hi if math.isinf(r_hi) else min(hi, int(r_hi))
    out = 0.0
    for k in range(lo, hi + 1):
        out = max(out, abs(a.coeff(k) - b.coeff(k)))
    return out
