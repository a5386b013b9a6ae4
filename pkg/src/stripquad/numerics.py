"""Floating-point workhorses shared by the rest of the package.

Three things live here: an adaptive reference integrator working on
log-scale integrands, stable log-domain accumulation helpers, and a
bracketed Newton root finder driven by three-term recurrences.
"""

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BracketViolation,
    InvalidInterval,
    InvalidParameter,
    PanelLimitExceeded,
)

__all__ = [
    "IntegrationResult",
    "LogProduct",
    "ThreeTermRecurrence",
    "integrate_reference",
    "log_sum_exp",
    "poly_roots_by_newton",
    "legendre_recurrence",
    "hermite_recurrence",
    "hermite_orthonormal_recurrence",
]

# Gauss-Kronrod 7/15 pair on [-1, 1].  Positive abscissae and weights; the
# even-indexed Kronrod abscissae interleave the 7 Gauss points (odd indices
# plus the centre).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point layout, ascending
_K_ABSC = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_K_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G_IDX = np.arange(1, 15, 2)          # the embedded 7 Gauss points
_G_W = np.concatenate([_WG[:-1], _WG[::-1]])

_MIN_REL_TOL = 1e-15
_MAX_REL_TOL = 1e-2


@dataclass(frozen=True)
class IntegrationResult:
    """Value of a definite integral with an error estimate."""

    value: float
    abs_error_estimate: float
    panels_used: int


@dataclass(frozen=True)
class LogProduct:
    """A signed real carried as (log of magnitude, sign).

    sign is 0 exactly when the magnitude is zero (log_magnitude == -inf),
    which keeps long products of factors in (-1, 1) representable.
    """

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise InvalidParameter(f"sign must be -1, 0, or +1, got {self.sign}")
        if (self.sign == 0) != (self.log_magnitude == -math.inf):
            raise InvalidParameter("sign == 0 must coincide with log_magnitude == -inf")

    @classmethod
    def from_value(cls, v):
        if v == 0.0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(v)), 1 if v > 0 else -1)

    @classmethod
    def one(cls):
        return cls(0.0, 1)

    def __mul__(self, other):
        sign = self.sign * other.sign
        if sign == 0:
            return LogProduct(-math.inf, 0)
        return LogProduct(self.log_magnitude + other.log_magnitude, sign)

    @property
    def value(self):
        return self.sign * math.exp(self.log_magnitude)


def log_sum_exp(terms):
    """ln(sum of exp(t) over terms); empty or all -inf input gives -inf."""
    terms = [float(t) for t in terms]
    if not terms:
        return -math.inf
    m = max(terms)
    if m == -math.inf:
        return -math.inf
    s = math.fsum(math.exp(t - m) for t in terms)
    return m + math.log(s)


def _vectorized(log_f, probe):
    """Return a batched version of log_f; wraps scalar-only callables."""
    try:
        out = np.asarray(log_f(probe), dtype=float)
        if out.shape == probe.shape:
            return log_f
    except Exception:
        pass

    def batched(xs):
        return np.array([log_f(float(x)) for x in xs], dtype=float)

    return batched


def _panel(log_f, a, b):
    """One 15-point panel with embedded 7-point estimate on [a, b].

    exp is taken only after subtracting the panel-max log, so panels whose
    whole integrand sits at e.g. e^-700 still contribute correctly.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    logs = log_f(c + h * _K_ABSC)
    m = np.max(logs)
    if m == -math.inf:
        return 0.0, 0.0
    if math.isnan(m) or m == math.inf:
        raise InvalidParameter(f"integrand log value is {m} on [{a}, {b}]")
    f = np.exp(logs - m)
    k15 = float(np.dot(_K_W, f))
    g7 = float(np.dot(_G_W, f[_G_IDX]))
    scale = math.exp(m) * h
    return scale * k15, abs(scale) * abs(k15 - g7)


def integrate_reference(log_f, a, b, rel_tol, *, panel_budget=20000,
                        breakpoints=()):
    """Adaptively integrate exp(log_f) over [a, b] to a relative tolerance.

    log_f maps points to ln of a nonnegative integrand (-inf allowed where
    the integrand vanishes); it may be scalar or accept numpy arrays.
    Panels are bisected worst-error-first using a nested 15/7 point pair
    until the summed error estimate is below rel_tol times the integral.
    Optional interior breakpoints seed the initial panel set.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise InvalidInterval(f"need finite a < b, got [{a}, {b}]")
    if not (_MIN_REL_TOL < rel_tol < _MAX_REL_TOL):
        raise InvalidParameter(f"rel_tol must be in (1e-15, 1e-2), got {rel_tol}")

    edges = [a] + sorted(float(x) for x in breakpoints if a < x < b) + [b]
    probe = 0.5 * (edges[0] + edges[1]) + 0.25 * (edges[1] - edges[0]) * _K_ABSC[:3]
    log_f = _vectorized(log_f, probe)

    heap = []
    counter = 0
    total_v = 0.0
    total_e = 0.0
    panels = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _panel(log_f, lo, hi)
        panels += 1
        total_v += v
        total_e += e
        heapq.heappush(heap, (-e, counter, lo, hi, v, e))
        counter += 1

    while total_e > rel_tol * abs(total_v):
        if panels >= panel_budget:
            raise PanelLimitExceeded(
                f"panel budget {panel_budget} exhausted; "
                f"error estimate {total_e:.3e} on value {total_v:.3e}")
        neg_e, _, lo, hi, v, e = heapq.heappop(heap)
        if neg_e == 0.0:
            # only unsplittable panels remain
            heapq.heappush(heap, (neg_e, counter, lo, hi, v, e))
            counter += 1
            break
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 1e-15 * max(1.0, abs(lo), abs(hi)):
            # panel too narrow to split; park it with zero priority
            heapq.heappush(heap, (0.0, counter, lo, hi, v, e))
            counter += 1
            continue
        v1, e1 = _panel(log_f, lo, mid)
        v2, e2 = _panel(log_f, mid, hi)
        panels += 2
        total_v += v1 + v2 - v
        total_e += e1 + e2 - e
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, e2))
        counter += 2

    # re-sum for accuracy; the incremental running totals accumulate drift
    total_v = math.fsum(item[4] for item in heap)
    total_e = math.fsum(item[5] for item in heap)
    return IntegrationResult(total_v, total_e, panels)


@dataclass(frozen=True)
class ThreeTermRecurrence:
    """p_{k+1}(x) = (a(k) x + b(k)) p_k(x) - c(k) p_{k-1}(x), p_0 = p0.

    a, b, c map the index k >= 0 to the recurrence coefficients; c(0) is
    never used.
    """

    a: Callable[[int], float]
    b: Callable[[int], float]
    c: Callable[[int], float]
    p0: float = 1.0

    def value_and_derivative(self, n, x):
        """(p_n(x), p_n'(x), log_scale): true values are p * exp(log_scale).

        Intermediates are rescaled whenever they pass 1e250 so that high
        degrees do not overflow; only the ratio p/p' and the log of the
        magnitude are meaningful contracts.
        """
        if n < 0:
            raise InvalidParameter(f"degree must be >= 0, got {n}")
        p_prev, dp_prev = 0.0, 0.0
        p, dp = float(self.p0), 0.0
        log_scale = 0.0
        for k in range(n):
            ak, bk = self.a(k), self.b(k)
            ck = self.c(k) if k > 0 else 0.0
            lin = ak * x + bk
            p_next = lin * p - ck * p_prev
            dp_next = ak * p + lin * dp - ck * dp_prev
            p_prev, dp_prev = p, dp
            p, dp = p_next, dp_next
            mag = max(abs(p), abs(dp), abs(p_prev), abs(dp_prev))
            if mag > 1e250:
                s = 1e-250
                p *= s
                dp *= s
                p_prev *= s
                dp_prev *= s
                log_scale += math.log(1e250)
        return p, dp, log_scale


def legendre_recurrence():
    return ThreeTermRecurrence(
        a=lambda k: (2 * k + 1) / (k + 1),
        b=lambda k: 0.0,
        c=lambda k: k / (k + 1),
        p0=1.0,
    )


def hermite_recurrence():
    """Physicists' Hermite polynomials H_n."""
    return ThreeTermRecurrence(
        a=lambda k: 2.0,
        b=lambda k: 0.0,
        c=lambda k: 2.0 * k,
        p0=1.0,
    )


def hermite_orthonormal_recurrence():
    """Hermite polynomials orthonormal under exp(-x^2); same zeros as H_n."""
    return ThreeTermRecurrence(
        a=lambda k: math.sqrt(2.0 / (k + 1)),
        b=lambda k: 0.0,
        c=lambda k: math.sqrt(k / (k + 1)),
        p0=math.pi ** -0.25,
    )


def _refine_root(recurrence, n, lo, hi):
    """Safeguarded Newton inside a sign-change bracket."""
    f = lambda x: recurrence.value_and_derivative(n, x)
    plo, _, _ = f(lo)
    phi, _, _ = f(hi)
    if plo == 0.0:
        return lo
    if phi == 0.0:
        return hi
    if math.copysign(1.0, plo) == math.copysign(1.0, phi):
        raise BracketViolation(f"no sign change on bracket [{lo}, {hi}]")
    x = 0.5 * (lo + hi)
    for _ in range(200):
        p, dp, _ = f(x)
        if p == 0.0:
            return x
        if math.copysign(1.0, p) == math.copysign(1.0, plo):
            lo = x
        else:
            hi = x
        if dp != 0.0:
            x_new = x - p / dp
            if not (lo < x_new < hi):
                x_new = 0.5 * (lo + hi)
        else:
            x_new = 0.5 * (lo + hi)
        # stop well inside the 1e-14 relative contract
        if abs(x_new - x) <= 1e-15 * max(abs(x_new), 1.0):
            return x_new
        x = x_new
    raise BracketViolation(
        f"no convergence in 200 iterations on bracket [{lo}, {hi}]")


def poly_roots_by_newton(recurrence, n, brackets):
    """All n roots of the degree-n recurrence polynomial, one per bracket.

    Brackets must be strictly ordered and disjoint with a sign change in
    each; roots are polished to relative tolerance 1e-14.
    """
    if n < 1:
        raise InvalidParameter(f"need n >= 1, got {n}")
    brackets = [(float(lo), float(hi)) for lo, hi in brackets]
    if len(brackets) != n:
        raise InvalidParameter(
            f"need exactly {n} brackets, got {len(brackets)}")
    for (lo, hi) in brackets:
        if not lo < hi:
            raise InvalidParameter(f"empty bracket [{lo}, {hi}]")
    for (_, hi), (lo2, _) in zip(brackets[:-1], brackets[1:]):
        if not hi < lo2:
            raise InvalidParameter("brackets must be disjoint and ascending")
    return [_refine_root(recurrence, n, lo, hi) for lo, hi in brackets]
