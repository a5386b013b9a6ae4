"""Construction of the four quadrature rules as node/weight vectors.

Node locations are pinned down by bracketed Newton refinement on the
orthogonal-polynomial recurrences; the bracket inequalities double as the
test contract for the node layout.
"""

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import BracketViolation, InvalidParameter, Overflow
from .numerics import (
    hermite_orthonormal_recurrence,
    legendre_recurrence,
    log_sum_exp,
    poly_roots_by_newton,
)
from .weights import DEWeight, SEWeight, StripDomain, validate

__all__ = [
    "RuleKind",
    "RuleMeta",
    "QuadratureRule",
    "trapezoidal_rule",
    "scaling_factor",
    "scaled_gauss_legendre",
    "scaled_clenshaw_curtis",
    "gauss_hermite_rule",
    "min_separation",
    "emit_rule_csv",
]

_SQRT_PI = math.sqrt(math.pi)
_LOG_MAX = math.log(1.7976931348623157e308)

# Above this degree the Christoffel sums for Gauss-Hermite weights are
# assembled in log scale; the direct sums would overflow near the edge nodes.
_GH_DIRECT_LIMIT = 320
_GH_MAX_N = 500


class RuleKind(str, Enum):
    TRAPEZOIDAL = "Trapezoidal"
    GAUSS_LEGENDRE_SCALED = "GaussLegendreScaled"
    CLENSHAW_CURTIS_SCALED = "ClenshawCurtisScaled"
    GAUSS_HERMITE = "GaussHermite"


SHORT_KIND = {
    RuleKind.TRAPEZOIDAL: "trap",
    RuleKind.GAUSS_LEGENDRE_SCALED: "gl",
    RuleKind.CLENSHAW_CURTIS_SCALED: "cc",
    RuleKind.GAUSS_HERMITE: "gh",
}
KIND_FROM_SHORT = {v: k for k, v in SHORT_KIND.items()}


@dataclass(frozen=True)
class RuleMeta:
    xi_min: float
    m: Optional[int] = None
    T: Optional[float] = None
    L: Optional[float] = None


@dataclass(frozen=True)
class QuadratureRule:
    """Immutable rule: sum of weights[i] * f(nodes[i]) approximates the
    integral of f over the whole real line."""

    kind: RuleKind
    nodes: np.ndarray
    weights: np.ndarray
    n: int
    meta: RuleMeta


def _make_rule(kind, nodes, weights, **meta_fields):
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if nodes.ndim != 1 or nodes.shape != weights.shape:
        raise InvalidParameter("nodes and weights must be equal-length vectors")
    if nodes.size > 1 and not np.all(np.diff(nodes) > 0):
        raise InvalidParameter("nodes must be strictly increasing")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    xi_min = float(np.min(np.diff(nodes))) if nodes.size > 1 else math.inf
    meta_fields.setdefault("xi_min", xi_min)
    return QuadratureRule(kind=kind, nodes=nodes, weights=weights,
                          n=nodes.size, meta=RuleMeta(**meta_fields))


def trapezoidal_rule(domain, w, m):
    """Equispaced rule with 2m+1 nodes i*xi_min and all weights xi_min.

    The step is matched to the weight decay: (2 pi d)^(1/(rho+1)) (beta m)^(-rho/(rho+1))
    for SE, ln(2 pi d gamma m / beta2)/(gamma m) for DE.
    """
    validate(domain, w)
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidParameter(f"m must be an integer >= 1, got {m}")
    d = domain.d
    if isinstance(w, SEWeight):
        xi = ((2.0 * math.pi * d) ** (1.0 / (w.rho + 1.0))
              * (w.beta * m) ** (-w.rho / (w.rho + 1.0)))
    else:
        arg = 2.0 * math.pi * d * w.gamma * m / w.beta2
        if arg <= 1.0:
            raise InvalidParameter(
                f"2*pi*d*gamma*m/beta2 = {arg:g} <= 1; step would not be positive")
        xi = math.log(arg) / (w.gamma * m)
    idx = np.arange(-m, m + 1, dtype=float)
    return _make_rule(RuleKind.TRAPEZOIDAL, idx * xi,
                      np.full(2 * m + 1, xi), m=int(m), xi_min=xi)


def scaling_factor(w, n, L):
    """Truncation half-length T for rules scaled from [-1,1] to [-T,T]."""
    if n < 2:
        raise InvalidParameter(f"need n >= 2, got {n}")
    if not (math.isfinite(L) and L > 0):
        raise InvalidParameter(f"L must be finite and > 0, got {L}")
    if isinstance(w, SEWeight):
        return L * n ** (1.0 / (w.rho + 1.0))
    if w.gamma * L < 1.0:
        raise InvalidParameter(f"gamma*L = {w.gamma * L:g} < 1")
    return L * math.log(n)


def _legendre_theta_bounds(n, i):
    """Angle bounds for the i-th ascending node (i = 1..n//2)."""
    lo = (1.0 - i / (n + 1.0)) * math.pi
    hi = (1.0 - (i - 0.5) / n) * math.pi
    return lo, hi


def _legendre_brackets(n):
    neg = []
    for i in range(1, n // 2 + 1):
        t_lo, t_hi = _legendre_theta_bounds(n, i)
        neg.append((math.cos(t_hi), math.cos(t_lo)))
    brackets = list(neg)
    if n % 2 == 1:
        inner = neg[-1][1] if neg else -0.5
        brackets.append((0.5 * inner, -0.5 * inner))
    brackets.extend((-hi, -lo) for lo, hi in reversed(neg))
    return brackets


def scaled_gauss_legendre(n, T, *, L=None):
    """Gauss rule on [-T, T]: scaled Legendre zeros and 2/((1-x^2) P'(x)^2) weights."""
    if n < 1:
        raise InvalidParameter(f"need n >= 1, got {n}")
    if not (math.isfinite(T) and T > 0):
        raise InvalidParameter(f"T must be finite and > 0, got {T}")
    rec = legendre_recurrence()
    roots = np.array(poly_roots_by_newton(rec, n, _legendre_brackets(n)))
    roots = 0.5 * (roots - roots[::-1])
    dp = np.array([rec.value_and_derivative(n, x)[1] for x in roots])
    wts = 2.0 / ((1.0 - roots ** 2) * dp ** 2)
    wts = 0.5 * (wts + wts[::-1])
    return _make_rule(RuleKind.GAUSS_LEGENDRE_SCALED, T * roots, T * wts,
                      T=T, L=L)


def scaled_clenshaw_curtis(n, T, *, L=None):
    """Endpoint-including cosine-spaced rule on [-T, T] with exact cosine-sum weights."""
    if n < 2:
        raise InvalidParameter(f"need n >= 2, got {n}")
    if not (math.isfinite(T) and T > 0):
        raise InvalidParameter(f"T must be finite and > 0, got {T}")
    N = n - 1
    k = np.arange(n)
    theta = k * math.pi / N
    if N >= 2:
        j = np.arange(1, N // 2 + 1)
        b = np.where(2 * j == N, 1.0, 2.0)
        corr = np.cos(2.0 * np.outer(theta, j)) @ (b / (4.0 * j ** 2 - 1.0))
    else:
        corr = np.zeros(n)
    c = np.where((k == 0) | (k == N), 1.0, 2.0)
    wts = (c / N) * (1.0 - corr)
    nodes = np.cos(theta)[::-1]
    wts = wts[::-1]
    nodes = 0.5 * (nodes - nodes[::-1])
    wts = 0.5 * (wts + wts[::-1])
    return _make_rule(RuleKind.CLENSHAW_CURTIS_SCALED, T * nodes, T * wts,
                      T=T, L=L)


def _hermite_grid_sign_scan(n):
    """Disjoint brackets for the positive Hermite zeros by sign changes.

    The scan step is half the minimum node separation pi/sqrt(2n+1), so a
    grid cell contains at most one zero.
    """
    rec = hermite_orthonormal_recurrence()
    s = math.sqrt(2.0 * n + 1.0)
    h = math.pi / (2.0 * s)
    found = -1
    for attempt in range(3):
        delta = h * (0.5 + 1e-3 * attempt)
        grid = np.arange(delta, s + 3.0 * h, h)
        p_prev = np.zeros_like(grid)
        p = np.full_like(grid, rec.p0)
        for k in range(n):
            ak = rec.a(k)
            ck = rec.c(k) if k > 0 else 0.0
            p, p_prev = (ak * grid) * p - ck * p_prev, p
        sign = np.sign(p)
        if np.any(sign == 0.0):
            continue
        idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        found = idx.size
        if found == n // 2:
            return [(float(grid[i]), float(grid[i + 1])) for i in idx]
    raise BracketViolation(
        f"sign scan found {found} brackets for {n // 2} positive zeros")


def _hermite_brackets(n):
    pos = _hermite_grid_sign_scan(n)
    brackets = [(-hi, -lo) for lo, hi in reversed(pos)]
    if n % 2 == 1:
        inner = pos[0][0] if pos else 0.5
        brackets.append((-0.5 * inner, 0.5 * inner))
    brackets.extend(pos)
    return brackets


def _hermite_log_weights(nodes, n):
    """ln of the raw Gauss-Hermite weights via the inverse Christoffel sum,
    with per-node rescaling; used above the direct-evaluation limit."""
    rec = hermite_orthonormal_recurrence()
    out = np.empty(len(nodes))
    for i, x in enumerate(nodes):
        p_prev, p = 0.0, rec.p0
        log_scale = 0.0
        terms = [2.0 * math.log(abs(p))]
        for k in range(n - 1):
            ak = rec.a(k)
            ck = rec.c(k) if k > 0 else 0.0
            p, p_prev = ak * x * p - ck * p_prev, p
            if abs(p) > 1e200:
                p *= 1e-200
                p_prev *= 1e-200
                log_scale += math.log(1e200)
            if p != 0.0:
                terms.append(2.0 * (math.log(abs(p)) + log_scale))
        out[i] = -log_sum_exp(terms)
    return out


def gauss_hermite_rule(n):
    """Rule at the zeros of the degree-n Hermite polynomial, with weights
    premultiplied by exp(node^2) so the rule targets the plain integral.

    The premultiplied weights are assembled in log scale; degrees above 500
    are rejected rather than silently saturated.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameter(f"n must be an integer >= 1, got {n}")
    if n > _GH_MAX_N:
        raise InvalidParameter(f"n <= {_GH_MAX_N} required, got {n}")
    if n == 1:
        nodes = np.array([0.0])
    else:
        rec = hermite_orthonormal_recurrence()
        roots = np.array(poly_roots_by_newton(rec, n, _hermite_brackets(n)))
        nodes = 0.5 * (roots - roots[::-1])
    t = nodes * nodes
    if n <= _GH_DIRECT_LIMIT:
        rec = hermite_orthonormal_recurrence()
        p_prev = np.zeros_like(nodes)
        p = np.full_like(nodes, rec.p0)
        S = p * p
        for k in range(n - 1):
            ak = rec.a(k)
            ck = rec.c(k) if k > 0 else 0.0
            p, p_prev = (ak * nodes) * p - ck * p_prev, p
            S += p * p
        w = 1.0 / S
        w *= _SQRT_PI / math.fsum(w)
        w_mod = w * np.exp(t)
    else:
        lnw = _hermite_log_weights(nodes, n)
        lnw -= log_sum_exp(lnw) - 0.5 * math.log(math.pi)
        ln_mod = lnw + t
        if np.any(ln_mod >= _LOG_MAX):
            raise Overflow("premultiplied weight exceeds the largest finite double")
        w_mod = np.exp(ln_mod)
    if not np.all(np.isfinite(w_mod)):
        raise Overflow("premultiplied weight exceeds the largest finite double")
    return _make_rule(RuleKind.GAUSS_HERMITE, nodes, w_mod)


def min_separation(rule):
    """Smallest gap between adjacent nodes."""
    if rule.n < 2:
        raise InvalidParameter("min_separation needs at least 2 nodes")
    return float(np.min(np.diff(rule.nodes)))


def emit_rule_csv(rule, out):
    """Write `index,node,weight` rows, ascending nodes, 17 significant digits."""
    close = False
    if isinstance(out, (str, Path)):
        out = open(out, "w", encoding="utf-8", newline="")
        close = True
    try:
        out.write("index,node,weight\n")
        for i, (x, wt) in enumerate(zip(rule.nodes, rule.weights), start=1):
            out.write(f"{i},{x:.17g},{wt:.17g}\n")
    finally:
        if close:
            out.close()
