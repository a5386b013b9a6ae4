"""Worst-case-error bounds, all evaluated and reported in natural-log scale.

The fooling-integral bound is computed by adaptive integration of
omega(x) * prod tanh^2(pi (x - node)/(4d)); everything downstream of it is
closed-form arithmetic assembled with log-sum-exp.  Values are left in log
scale because typical magnitudes run below e^-200.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import InvalidParameter, PreconditionNotMet
from .numerics import LogProduct, integrate_reference, log_sum_exp
from .rules import (
    RuleKind,
    gauss_hermite_rule,
    min_separation,
    scaled_clenshaw_curtis,
    scaled_gauss_legendre,
    scaling_factor,
)
from .weights import (
    SEWeight,
    _cutoff_from_log_eps,
    _log_tail_mass,
    _log_weight_vec,
    log_weight,
    validate,
)

__all__ = [
    "BoundKind",
    "BoundReport",
    "fooling_log_integrand",
    "lower_bound_prop22",
    "lower_bound_thm31",
    "lower_bound_thm32",
    "lower_bound_cor41",
    "lower_bound_cor42",
    "lower_bound_cor43",
    "universal_lower_sugihara",
    "upper_bound_tail",
    "upper_bound_bernstein_rate",
    "upper_bound_trap_rate",
    "bound_report_to_json",
]

_LOG_PREF = 4.0 * math.log(math.tanh(1.0))  # ln((tanh 1)^4)


class BoundKind(str, Enum):
    PROP22 = "Prop22"
    THM31 = "Thm31"
    THM32 = "Thm32"
    COR41 = "Cor41"
    COR42 = "Cor42"
    COR43 = "Cor43"
    SUGIHARA_UNIVERSAL = "SugiharaUniversal"
    UPPER_TAIL = "UpperTail"
    UPPER_BERNSTEIN_RATE = "UpperBernsteinRate"
    UPPER_TRAP_RATE = "UpperTrapRate"


_UP_TO_CONSTANT = {
    BoundKind.SUGIHARA_UNIVERSAL,
    BoundKind.UPPER_BERNSTEIN_RATE,
    BoundKind.UPPER_TRAP_RATE,
}


@dataclass(frozen=True)
class BoundReport:
    """One bound value in natural-log scale."""

    kind: BoundKind
    log_value: float
    up_to_constant: bool
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.up_to_constant != (self.kind in _UP_TO_CONSTANT):
            raise InvalidParameter(
                f"{self.kind.value} must have up_to_constant="
                f"{self.kind in _UP_TO_CONSTANT}")


def _report(kind, log_value, **meta):
    return BoundReport(kind=kind, log_value=float(log_value),
                       up_to_constant=kind in _UP_TO_CONSTANT, meta=meta)


def bound_report_to_json(report):
    """JSON text: kind, log_value (-inf encoded as the string "-inf"),
    up_to_constant, meta."""
    lv = report.log_value
    payload = {
        "kind": report.kind.value,
        "log_value": "-inf" if lv == -math.inf else lv,
        "up_to_constant": report.up_to_constant,
        "meta": {k: (str(v) if isinstance(v, float) and not math.isfinite(v) else v)
                 for k, v in report.meta.items()},
    }
    return json.dumps(payload, sort_keys=True)


def _require_sorted_nodes(rule):
    nodes = np.asarray(rule.nodes, dtype=float)
    if nodes.size > 1 and not np.all(np.diff(nodes) > 0):
        raise InvalidParameter("rule nodes must be strictly increasing")
    return nodes


def fooling_log_integrand(rule, domain, w, x):
    """ln of the unit-ball fooling function at a real point x.

    Equals ln omega(x) + 2 sum_i ln|tanh(pi (x - node_i)/(4d))|; exactly
    -inf at the nodes, where the fooling function vanishes.
    """
    validate(domain, w)
    x = float(x)
    scale = math.pi / (4.0 * domain.d)
    prod = LogProduct.one()
    for xi in rule.nodes:
        t = math.tanh(scale * (x - xi))
        prod = prod * LogProduct.from_value(t * t)
    return log_weight(w, x) + prod.log_magnitude


def _fooling_log_f(rule, domain, w):
    nodes = np.asarray(rule.nodes, dtype=float)
    d = domain.d

    def log_f(xs):
        return _log_weight_vec(w, xs) + kernels.fooling_log_sum(xs, nodes, d)

    return log_f


def lower_bound_prop22(rule, domain, w, rel_tol=1e-10):
    """Fooling-integral lower bound: certified up to integration tolerance.

    The infinite integral is truncated where the closed-form weight tail
    drops below rel_tol/10 times a cheap lower estimate of the integral,
    and the initial panels split at every node and gap midpoint (the
    integrand has a quadratic zero at each node).
    """
    validate(domain, w)
    nodes = _require_sorted_nodes(rule)
    if rule.n >= 2:
        log_scale = lower_bound_thm31(rule, domain, w).log_value
    else:
        probe = abs(float(nodes[0])) + 1.0 + 4.0 * domain.d
        log_scale = fooling_log_integrand(rule, domain, w, probe)
    log_eps = math.log(rel_tol) + log_scale - math.log(10.0)
    X = _cutoff_from_log_eps(w, log_eps)
    X = max(X, float(np.max(np.abs(nodes))) + 1.0)
    breaks = np.concatenate([nodes, 0.5 * (nodes[1:] + nodes[:-1])])
    result = integrate_reference(_fooling_log_f(rule, domain, w), -X, X,
                                 rel_tol, breakpoints=np.sort(breaks))
    lv = math.log(result.value) if result.value > 0 else -math.inf
    return _report(BoundKind.PROP22, lv, cutoff=X,
                   abs_error_estimate=result.abs_error_estimate,
                   panels_used=result.panels_used, rel_tol=rel_tol)


def _log_gap_min_term(gap, d):
    """ln( gap * min{1, (pi*gap/(4d))^4} )."""
    return math.log(gap) + min(0.0, 4.0 * math.log(math.pi * gap / (4.0 * d)))


def lower_bound_thm31(rule, domain, w):
    """Gap-by-gap lower bound: no integral, one term per adjacent node pair,
    each carrying the full one-sided tanh products."""
    validate(domain, w)
    nodes = _require_sorted_nodes(rule)
    if rule.n < 2:
        raise InvalidParameter("bound needs at least 2 distinct nodes")
    d = domain.d
    left, right = kernels.pairwise_log_tanh(nodes, d)
    terms = []
    for i in range(rule.n - 1):
        gap = float(nodes[i + 1] - nodes[i])
        lw = log_weight(w, max(abs(nodes[i]), abs(nodes[i + 1])))
        terms.append(lw + _log_gap_min_term(gap, d) + left[i] + right[i + 1])
    lv = _LOG_PREF - math.log(30.0) + log_sum_exp(terms)
    return _report(BoundKind.THM31, lv)


def lower_bound_thm32(rule, domain, w):
    """Minimum-separation lower bound: the tanh products collapse into
    exp(-2 pi d / xi_min)."""
    validate(domain, w)
    nodes = _require_sorted_nodes(rule)
    if rule.n < 2:
        raise InvalidParameter("bound needs at least 2 distinct nodes")
    d = domain.d
    xi_min = min_separation(rule)
    log_sum_w = log_sum_exp(
        log_weight(w, max(abs(nodes[i]), abs(nodes[i + 1])))
        for i in range(rule.n - 1))
    lv = (_LOG_PREF - math.log(30.0) + _log_gap_min_term(xi_min, d)
          - 2.0 * math.pi * d / xi_min + log_sum_w)
    return _report(BoundKind.THM32, lv, xi_min=xi_min)


def lower_bound_cor41(domain, w, m):
    """Explicit-constant lower bound for the step-matched trapezoidal rule."""
    validate(domain, w)
    d = domain.d
    n = 2 * m + 1
    if isinstance(w, SEWeight):
        if m < w.rho:
            raise PreconditionNotMet(f"m = {m} < rho = {w.rho:g}")
        lo = (2.0 * math.pi * d / w.beta ** w.rho) ** (1.0 / (w.rho + 1.0))
        hi = lo * (w.rho + 1.0) / w.rho ** (w.rho / (w.rho + 1.0))
        c = integrate_reference(lambda xs: -((w.beta * xs) ** w.rho),
                                lo, hi, 1e-12).value
        xi_n = ((2.0 * math.pi * d) ** (1.0 / (w.rho + 1.0))
                / (w.beta * n) ** (w.rho / (w.rho + 1.0)))
        exponent = -((math.pi * d * w.beta * n) ** (w.rho / (w.rho + 1.0)))
        meta = {"c_beta_rho": c, "m": m, "n": n}
    else:
        arg_m = 2.0 * math.pi * d * w.gamma * m / w.beta2
        if arg_m <= 1.0:
            raise PreconditionNotMet(
                f"2*pi*d*gamma*m/beta2 = {arg_m:g} <= 1")
        xi_min = math.log(arg_m) / (w.gamma * m)
        anchor = 2.0 * math.pi * d / (w.beta2 * math.e)
        if xi_min > anchor:
            raise PreconditionNotMet(
                f"lower endpoint xi_min = {xi_min:g} > 2*pi*d/(beta2*e) = {anchor:g}")
        if (m + 1) * xi_min < anchor + 1.0:
            raise PreconditionNotMet(
                f"upper endpoint (m+1)*xi_min = {(m + 1) * xi_min:g} "
                f"< 2*pi*d/(beta2*e)+1 = {anchor + 1.0:g}")
        c = integrate_reference(
            lambda xs: -w.beta1 * np.exp(np.minimum(w.gamma * xs, 700.0)),
            anchor, anchor + 1.0, 1e-12).value
        arg_n = math.pi * d * w.gamma * n / w.beta2
        if arg_n <= 1.0:
            raise PreconditionNotMet(f"pi*d*gamma*n/beta2 = {arg_n:g} <= 1")
        xi_n = math.log(arg_n) / (w.gamma * n)
        exponent = -math.pi * d * w.gamma * n / math.log(arg_n)
        meta = {"c_beta1_beta2_gamma": c, "m": m, "n": n}
    lv = (math.log(w.alpha1) + math.log(c) + _LOG_PREF - math.log(15.0)
          + 4.0 * math.log(math.pi * xi_n / (4.0 * d)) + exponent)
    return _report(BoundKind.COR41, lv, **meta)


def lower_bound_cor42(domain, w, n, L, rulekind):
    """Mid-gap lower bound for the scaled Gauss-Legendre and
    Clenshaw-Curtis node families."""
    validate(domain, w)
    if isinstance(rulekind, str):
        rulekind = {"gl": RuleKind.GAUSS_LEGENDRE_SCALED,
                    "cc": RuleKind.CLENSHAW_CURTIS_SCALED}.get(
                        rulekind.lower(), rulekind)
    T = scaling_factor(w, n, L)
    d = domain.d
    if rulekind == RuleKind.GAUSS_LEGENDRE_SCALED:
        if n < 4:
            raise PreconditionNotMet(f"need n >= 4 for Gauss-Legendre, got {n}")
        rule = scaled_gauss_legendre(n, T, L=L)
        n_eff = n
        mid = abs(float(rule.nodes[n_eff // 2 - 1]))
    elif rulekind == RuleKind.CLENSHAW_CURTIS_SCALED:
        if n < 6:
            raise PreconditionNotMet(f"need n >= 6 for Clenshaw-Curtis, got {n}")
        rule = scaled_clenshaw_curtis(n, T, L=L)
        n_eff = n - 2                      # interior nodes drive the bound
        mid = abs(float(rule.nodes[n_eff // 2]))
    else:
        raise InvalidParameter(f"rulekind must be gl or cc, got {rulekind!r}")
    lv = (_LOG_PREF - math.log(30.0) + log_weight(w, mid)
          + math.log(2.0 * T / (n_eff + 1.0))
          + min(0.0, 4.0 * math.log(math.pi * T / (2.0 * d * (n_eff + 1.0))))
          - 3.0 * n_eff * math.pi * d / (T * math.sqrt(2.0 - math.sqrt(2.0))))
    return _report(BoundKind.COR42, lv, T=T, L=L, n_eff=n_eff,
                   rulekind=rulekind.value)


def lower_bound_cor43(domain, w, n):
    """Square-root-rate lower bound at the Hermite nodes; the weight sum is
    computed from the constructed nodes rather than bounded."""
    validate(domain, w)
    if n < 2:
        raise InvalidParameter(f"need n >= 2, got {n}")
    d = domain.d
    rule = gauss_hermite_rule(n)
    nodes = rule.nodes
    s = math.sqrt(2.0 * n + 1.0)
    log_sum_w = log_sum_exp(
        log_weight(w, max(abs(nodes[i]), abs(nodes[i + 1])))
        for i in range(n - 1))
    lv = (_LOG_PREF - math.log(30.0) + math.log(math.pi / s)
          + min(0.0, 4.0 * math.log(math.pi ** 2 / (4.0 * d * s)))
          - 2.0 * d * s + log_sum_w)
    return _report(BoundKind.COR43, lv, sqrt_2n_plus_1=s)


def universal_lower_sugihara(domain, w, n):
    """Rule-independent lower bound; multiplicative constant unknown."""
    validate(domain, w)
    d = domain.d
    if isinstance(w, SEWeight):
        if n < 1:
            raise InvalidParameter(f"need n >= 1, got {n}")
        rho = w.rho
        inner = (2.0 / (rho + 1.0)) ** (1.0 / rho) * 2.0 * math.pi * d * w.beta * n
        lv = math.log(n) / (rho + 1.0) - inner ** (rho / (rho + 1.0))
    else:
        if n < 2:
            raise PreconditionNotMet(f"need n >= 2 for the DE form, got {n}")
        arg = math.pi * d * w.gamma * n / w.beta1
        if arg <= 1.0:
            raise PreconditionNotMet(f"pi*d*gamma*n/beta1 = {arg:g} <= 1")
        lv = (math.log(math.log(n))
              - 2.0 * math.pi * d * w.gamma * n / math.log(arg))
    return _report(BoundKind.SUGIHARA_UNIVERSAL, lv, n=n)


def upper_bound_tail(domain, w, T):
    """Log of the closed-form bound on the weight mass beyond [-T, T]."""
    validate(domain, w)
    return _report(BoundKind.UPPER_TAIL, _log_tail_mass(w, T), T=T)


def upper_bound_bernstein_rate(domain, T, n, rulekind):
    """Interior geometric rate after rescaling [-T, T] to [-1, 1]:
    r = 1 + d/T, with r^-2n for Gauss-Legendre and r^-n for Clenshaw-Curtis."""
    if not (math.isfinite(T) and T > 0):
        raise InvalidParameter(f"T must be finite and > 0, got {T}")
    if isinstance(rulekind, str):
        rulekind = {"gl": RuleKind.GAUSS_LEGENDRE_SCALED,
                    "cc": RuleKind.CLENSHAW_CURTIS_SCALED}.get(
                        rulekind.lower(), rulekind)
    r = 1.0 + domain.d / T
    if rulekind == RuleKind.GAUSS_LEGENDRE_SCALED:
        lv = -2.0 * n * math.log(r)
    elif rulekind == RuleKind.CLENSHAW_CURTIS_SCALED:
        lv = -n * math.log(r)
    else:
        raise InvalidParameter(f"rulekind must be gl or cc, got {rulekind!r}")
    return _report(BoundKind.UPPER_BERNSTEIN_RATE, lv, r=r, T=T, n=n,
                   rulekind=rulekind.value)


def upper_bound_trap_rate(domain, w, n):
    """Known decay rate of the step-matched trapezoidal rule (constant
    unspecified)."""
    validate(domain, w)
    d = domain.d
    if isinstance(w, SEWeight):
        lv = -((math.pi * d * w.beta * n) ** (w.rho / (w.rho + 1.0)))
    else:
        arg = math.pi * d * w.gamma * n / w.beta2
        if arg <= 1.0:
            raise PreconditionNotMet(f"pi*d*gamma*n/beta2 = {arg:g} <= 1")
        lv = -math.pi * d * w.gamma * n / math.log(arg)
    return _report(BoundKind.UPPER_TRAP_RATE, lv, n=n)
