"""Sweeps over n, empirical integration errors, and decay-rate fits.

A sweep evaluates every lower bound plus the applicable specialized and
upper bounds for one rule/weight family across a list of n, and records
raw integration errors on a small reference catalog.  Rates are fitted by
ordinary least squares of -log(bound) against a model abscissa.
"""

import concurrent.futures
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import bounds as _bounds
from .errors import (
    DegenerateAbscissa,
    InsufficientData,
    InvalidParameter,
    PreconditionNotMet,
)
from .rules import (
    KIND_FROM_SHORT,
    SHORT_KIND,
    RuleKind,
    gauss_hermite_rule,
    scaled_clenshaw_curtis,
    scaled_gauss_legendre,
    scaling_factor,
    trapezoidal_rule,
)
from .weights import StripDomain, weight_tag

__all__ = [
    "TestIntegrand",
    "SweepRecord",
    "SweepConfig",
    "FitResult",
    "RateModel",
    "catalog",
    "empirical_error",
    "sweep",
    "fit_rate",
    "select_exponent",
    "emit_csv",
    "parse_csv",
    "fit_to_json",
    "MODEL_SQRT_N",
    "MODEL_N_OVER_LOG_N",
    "MODEL_SQRT_2N_PLUS_1",
    "power_model",
    "se_rate_model",
]

CSV_HEADER = ("n,rule,weight,log_prop22,log_thm31,log_thm32,log_special,"
              "log_upper,err_gauss,err_sech,err_degauss")

# reference value of the double-exponential catalog integral, frozen from a
# 25-digit modified-Bessel evaluation ahead of the build
TWO_K0_2 = 0.22778774549906687131


@dataclass(frozen=True)
class TestIntegrand:
    """A positive reference integrand carried as ln f with a known integral."""

    tag: str
    log_f: Callable[[float], float]
    reference_integral: float
    provenance: str


def catalog():
    """The three reference integrands used by every sweep."""
    return (
        TestIntegrand("gauss", lambda x: -(x * x), math.sqrt(math.pi),
                      "exact: integral of exp(-x^2) is sqrt(pi)"),
        TestIntegrand("sech", lambda x: -np.logaddexp(x, -x) + math.log(2.0),
                      math.pi, "exact: antiderivative 2*arctan(e^x)"),
        TestIntegrand("degauss", lambda x: -2.0 * np.cosh(np.minimum(np.abs(x), 700.0)),
                      TWO_K0_2, "modified-Bessel oracle, 25-digit evaluation"),
    )


def empirical_error(rule, f):
    """ln |A_n(f) - reference|, or -inf when the difference rounds to zero."""
    logs = np.array([f.log_f(float(x)) for x in rule.nodes], dtype=float)
    terms = rule.weights * np.exp(logs)
    a_n = math.fsum(terms)
    diff = abs(a_n - f.reference_integral)
    return math.log(diff) if diff > 0.0 else -math.inf


@dataclass(frozen=True)
class SweepRecord:
    n: int
    rule_kind: RuleKind
    weight_tag: str
    log_prop22: float
    log_thm31: float
    log_thm32: float
    log_specialized: Optional[float]
    log_upper: Optional[float]
    empirical_log_errors: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepConfig:
    rule_kind: RuleKind
    weight: object
    domain: StripDomain
    n_list: tuple
    L: Optional[float] = None
    rel_tol: float = 1e-10


def _build_rule(config, n):
    kind = config.rule_kind
    if kind == RuleKind.TRAPEZOIDAL:
        if n < 3 or n % 2 == 0:
            raise InvalidParameter(
                f"trapezoidal sweep needs odd n >= 3, got {n}")
        return trapezoidal_rule(config.domain, config.weight, (n - 1) // 2)
    if kind == RuleKind.GAUSS_HERMITE:
        return gauss_hermite_rule(n)
    L = config.L if config.L is not None else 1.0
    T = scaling_factor(config.weight, n, L)
    if kind == RuleKind.GAUSS_LEGENDRE_SCALED:
        return scaled_gauss_legendre(n, T, L=L)
    if kind == RuleKind.CLENSHAW_CURTIS_SCALED:
        return scaled_clenshaw_curtis(n, T, L=L)
    raise InvalidParameter(f"unknown rule kind {kind!r}")


def _specialized(config, rule, n):
    kind = config.rule_kind
    try:
        if kind == RuleKind.TRAPEZOIDAL:
            return _bounds.lower_bound_cor41(
                config.domain, config.weight, (n - 1) // 2).log_value
        if kind == RuleKind.GAUSS_HERMITE:
            return _bounds.lower_bound_cor43(
                config.domain, config.weight, n).log_value
        L = config.L if config.L is not None else 1.0
        return _bounds.lower_bound_cor42(
            config.domain, config.weight, n, L, kind).log_value
    except PreconditionNotMet:
        return None


def _upper(config, rule, n):
    kind = config.rule_kind
    try:
        if kind == RuleKind.TRAPEZOIDAL:
            return _bounds.upper_bound_trap_rate(
                config.domain, config.weight, n).log_value
        if kind == RuleKind.GAUSS_HERMITE:
            return None
        T = rule.meta.T
        bern = _bounds.upper_bound_bernstein_rate(
            config.domain, T, n, kind).log_value
        tail = _bounds.upper_bound_tail(config.domain, config.weight, T).log_value
        return max(bern, tail)
    except PreconditionNotMet:
        return None


def _one_record(config, n):
    rule = _build_rule(config, n)
    errors = {f.tag: empirical_error(rule, f) for f in catalog()}
    return SweepRecord(
        n=n,
        rule_kind=config.rule_kind,
        weight_tag=weight_tag(config.weight),
        log_prop22=_bounds.lower_bound_prop22(
            rule, config.domain, config.weight, config.rel_tol).log_value,
        log_thm31=_bounds.lower_bound_thm31(
            rule, config.domain, config.weight).log_value,
        log_thm32=_bounds.lower_bound_thm32(
            rule, config.domain, config.weight).log_value,
        log_specialized=_specialized(config, rule, n),
        log_upper=_upper(config, rule, n),
        empirical_log_errors=errors,
    )


def sweep(config, workers=1):
    """One record per n; entries are independent and may run concurrently,
    the output order is always ascending n."""
    n_list = list(config.n_list)
    if any(b <= a for a, b in zip(n_list[:-1], n_list[1:])):
        raise InvalidParameter("n_list must be strictly increasing")
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(lambda n: _one_record(config, n), n_list))
    else:
        records = [_one_record(config, n) for n in n_list]
    return sorted(records, key=lambda r: r.n)


@dataclass(frozen=True)
class RateModel:
    """Named abscissa a(n) for straight-line fits of -log(bound)."""

    name: str
    abscissa: Callable[[int], float]


MODEL_SQRT_N = RateModel("sqrt_n", math.sqrt)
MODEL_N_OVER_LOG_N = RateModel("n_over_log_n", lambda n: n / math.log(n))
MODEL_SQRT_2N_PLUS_1 = RateModel("sqrt_2n_plus_1",
                                 lambda n: math.sqrt(2.0 * n + 1.0))


def power_model(p):
    return RateModel(f"pow:{p:g}", lambda n: float(n) ** p)


def se_rate_model(rho):
    """n^(rho/(rho+1)), the single-exponential decay abscissa."""
    p = rho / (rho + 1.0)
    return RateModel(f"pow_se:{rho:g}", lambda n: float(n) ** p)


@dataclass(frozen=True)
class FitResult:
    model: str
    slope: float
    intercept: float
    r_squared: float
    n_lo: int
    n_hi: int


_FIELDS = {
    "log_prop22": lambda r: r.log_prop22,
    "log_thm31": lambda r: r.log_thm31,
    "log_thm32": lambda r: r.log_thm32,
    "log_special": lambda r: r.log_specialized,
    "log_upper": lambda r: r.log_upper,
    "err_gauss": lambda r: r.empirical_log_errors.get("gauss"),
    "err_sech": lambda r: r.empirical_log_errors.get("sech"),
    "err_degauss": lambda r: r.empirical_log_errors.get("degauss"),
}


def fit_rate(records, fieldname, model, discard=2):
    """OLS fit of -log(field) against model.abscissa(n).

    The smallest `discard` n values are dropped first (pre-asymptotic
    transients); at least 4 records must come in.
    """
    if fieldname not in _FIELDS:
        raise InvalidParameter(f"unknown field {fieldname!r}; "
                               f"one of {sorted(_FIELDS)}")
    records = sorted(records, key=lambda r: r.n)
    if len(records) < 4:
        raise InsufficientData(f"need at least 4 records, got {len(records)}")
    records = records[discard:]
    get = _FIELDS[fieldname]
    ys, xs, ns = [], [], []
    for r in records:
        v = get(r)
        if v is None or not math.isfinite(v):
            raise InsufficientData(
                f"field {fieldname} missing or non-finite at n={r.n}")
        ys.append(-v)
        xs.append(model.abscissa(r.n))
        ns.append(r.n)
    xs = np.array(xs)
    ys = np.array(ys)
    if np.ptp(xs) == 0.0:
        raise DegenerateAbscissa(f"abscissa {model.name} constant over records")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return FitResult(model=model.name, slope=float(slope),
                     intercept=float(intercept), r_squared=r2,
                     n_lo=min(ns), n_hi=max(ns))


def select_exponent(records, fieldname, p_grid, discard=2):
    """Best-r^2 exponent over a fixed power grid; returns (p_star, fit)."""
    best = None
    for p in p_grid:
        fit = fit_rate(records, fieldname, power_model(p), discard=discard)
        if best is None or fit.r_squared > best[1].r_squared:
            best = (p, fit)
    if best is None:
        raise InsufficientData("empty exponent grid")
    return best


def _fmt(v):
    if v is None:
        return ""
    if v == -math.inf:
        return "-inf"
    return f"{v:.17g}"


def emit_csv(records, out):
    """Deterministic sweep CSV: ascending n, 17 significant digits.

    The weight tag itself contains commas, so rows go through the csv
    module and that one field comes out quoted.
    """
    close = False
    if isinstance(out, (str, Path)):
        out = open(out, "w", encoding="utf-8", newline="")
        close = True
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in sorted(records, key=lambda rec: rec.n):
            errs = r.empirical_log_errors
            writer.writerow(
                [str(r.n), SHORT_KIND[r.rule_kind], r.weight_tag,
                 _fmt(r.log_prop22), _fmt(r.log_thm31), _fmt(r.log_thm32),
                 _fmt(r.log_specialized), _fmt(r.log_upper),
                 _fmt(errs.get("gauss")), _fmt(errs.get("sech")),
                 _fmt(errs.get("degauss"))])
    finally:
        if close:
            out.close()


def _parse_float(text):
    if text == "":
        return None
    if text == "-inf":
        return -math.inf
    return float(text)


def parse_csv(path_or_file):
    """Inverse of emit_csv; round-trips records bit-exactly."""
    close = False
    if isinstance(path_or_file, (str, Path)):
        path_or_file = open(path_or_file, "r", encoding="utf-8", newline="")
        close = True
    try:
        reader = csv.reader(path_or_file)
        header = next(reader)
        if header != CSV_HEADER.split(","):
            raise InvalidParameter(f"unexpected sweep CSV header {header}")
        records = []
        for row in reader:
            (n, rule, wtag, p22, t31, t32, spec, upper,
             eg, es, ed) = row
            errors = {}
            for tag, text in (("gauss", eg), ("sech", es), ("degauss", ed)):
                v = _parse_float(text)
                if v is not None:
                    errors[tag] = v
            records.append(SweepRecord(
                n=int(n), rule_kind=KIND_FROM_SHORT[rule], weight_tag=wtag,
                log_prop22=_parse_float(p22), log_thm31=_parse_float(t31),
                log_thm32=_parse_float(t32), log_specialized=_parse_float(spec),
                log_upper=_parse_float(upper), empirical_log_errors=errors))
        return records
    finally:
        if close:
            path_or_file.close()


def fit_to_json(fit):
    return json.dumps({"model": fit.model, "slope": fit.slope,
                       "intercept": fit.intercept, "r2": fit.r_squared,
                       "n_lo": fit.n_lo, "n_hi": fit.n_hi}, sort_keys=True)
