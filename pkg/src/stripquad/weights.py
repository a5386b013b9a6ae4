"""Single- and double-exponential weight envelopes on the real line.

A weight is declared by envelope constants; the evaluable representative
is the canonical member exp(-(beta*|x|)^rho) or exp(-beta1*exp(gamma*|x|)),
which sits inside the envelope whenever alpha1 <= 1 <= alpha2.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidParameter, NonexistentWeight

__all__ = [
    "StripDomain",
    "SEWeight",
    "DEWeight",
    "WeightSpec",
    "validate",
    "log_weight",
    "tail_mass_upper",
    "integration_cutoff",
    "parse_weight",
    "weight_tag",
]

_MAX_FLOAT = 1.7976931348623157e308
_LOG_MAX = math.log(_MAX_FLOAT)


@dataclass(frozen=True)
class StripDomain:
    """Half-width d of the strip of analyticity around the real axis."""

    d: float

    def __post_init__(self):
        if not (math.isfinite(self.d) and self.d > 0):
            raise InvalidParameter(f"strip half-width must be finite and > 0, got {self.d}")


@dataclass(frozen=True)
class SEWeight:
    """Single-exponential decay envelope alpha * exp(-(beta*|x|)^rho)."""

    beta: float
    rho: float
    alpha1: float = 1.0
    alpha2: float = 1.0


@dataclass(frozen=True)
class DEWeight:
    """Double-exponential decay envelope alpha * exp(-beta * exp(gamma*|x|))."""

    beta1: float
    beta2: float
    gamma: float
    alpha1: float = 1.0
    alpha2: float = 1.0


WeightSpec = Union[SEWeight, DEWeight]


def validate(domain, w):
    """Check envelope constraints and compatibility with the strip.

    Raises InvalidParameter for ordering/positivity violations and
    NonexistentWeight for double-exponential decay faster than the strip
    admits (gamma > pi/(2d)); gamma == pi/(2d) is allowed.
    """
    if not isinstance(domain, StripDomain):
        domain = StripDomain(float(domain))
    for name in ("alpha1", "alpha2"):
        v = getattr(w, name)
        if not (math.isfinite(v) and v > 0):
            raise InvalidParameter(f"{name} must be finite and > 0, got {v}")
    if w.alpha1 > w.alpha2:
        raise InvalidParameter(
            f"alpha1={w.alpha1:g} > alpha2={w.alpha2:g}")
    if not (w.alpha1 <= 1.0 <= w.alpha2):
        raise InvalidParameter(
            "canonical representative requires alpha1 <= 1 <= alpha2, "
            f"got alpha1={w.alpha1:g}, alpha2={w.alpha2:g}")
    if isinstance(w, SEWeight):
        if not (math.isfinite(w.beta) and w.beta > 0):
            raise InvalidParameter(f"beta must be finite and > 0, got {w.beta}")
        if not (math.isfinite(w.rho) and w.rho >= 1):
            raise InvalidParameter(f"rho must be >= 1, got {w.rho}")
    elif isinstance(w, DEWeight):
        for name in ("beta1", "beta2", "gamma"):
            v = getattr(w, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameter(f"{name} must be finite and > 0, got {v}")
        if w.beta1 < w.beta2:
            raise InvalidParameter(
                f"beta1={w.beta1:g} < beta2={w.beta2:g}")
        limit = math.pi / (2.0 * domain.d)
        if w.gamma > limit:
            raise NonexistentWeight(
                f"gamma={w.gamma:g} > pi/(2d)={limit:.4f}")
    else:
        raise InvalidParameter(f"unknown weight spec {type(w).__name__}")
    return True


def log_weight(w, x):
    """ln of the canonical representative at a real point; always <= 0.

    Never returns -inf for finite x: where exp(gamma*|x|) would overflow
    the result is clamped to the most negative finite double.
    """
    ax = abs(float(x))
    if isinstance(w, SEWeight):
        return -((w.beta * ax) ** w.rho)
    t = w.gamma * ax
    if t >= _LOG_MAX:
        return -_MAX_FLOAT
    v = -w.beta1 * math.exp(t)
    return v if v > -_MAX_FLOAT else -_MAX_FLOAT


def _log_weight_vec(w, xs):
    xs = np.abs(np.asarray(xs, dtype=float))
    if isinstance(w, SEWeight):
        return -((w.beta * xs) ** w.rho)
    t = np.minimum(w.gamma * xs, _LOG_MAX - 1.0)
    return np.maximum(-w.beta1 * np.exp(t), -_MAX_FLOAT)


def _log_tail_mass(w, T):
    """ln of the closed-form bound on the weight mass beyond |x| > T."""
    if not T > 0:
        raise InvalidParameter(f"tail cutoff must be > 0, got {T}")
    if isinstance(w, SEWeight):
        return (math.log(2.0 * w.alpha2 / (w.rho * w.beta ** w.rho))
                - (w.rho - 1.0) * math.log(T) - (w.beta * T) ** w.rho)
    t = w.gamma * T
    inner = w.beta2 * math.exp(t) if t < _LOG_MAX else _MAX_FLOAT
    return (math.log(2.0 * w.alpha2 / (w.beta2 * w.gamma)) - t
            - min(inner, _MAX_FLOAT))


def tail_mass_upper(w, T):
    """Closed-form upper bound on the weight mass outside [-T, T]."""
    lt = _log_tail_mass(w, T)
    return math.exp(lt) if lt < _LOG_MAX else math.inf


def _cutoff_from_log_eps(w, log_eps):
    """Smallest X (doubling search, then bisection) with log tail <= log_eps."""
    X = 1.0
    guard = 0
    while _log_tail_mass(w, X) > log_eps:
        X *= 2.0
        guard += 1
        if guard > 200:
            raise InvalidParameter("tail target unreachable")
    if X == 1.0:
        lo = 0.0
        while _log_tail_mass(w, max(X / 2.0, 1e-300)) <= log_eps and X > 1e-300:
            X /= 2.0
        lo, hi = X / 2.0, X
    else:
        lo, hi = X / 2.0, X
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if mid <= 0:
            break
        if _log_tail_mass(w, mid) <= log_eps:
            hi = mid
        else:
            lo = mid
    return hi


def integration_cutoff(w, eps):
    """Truncation point X > 0 with tail_mass_upper(w, X) <= eps."""
    if not (0.0 < eps < 1.0):
        raise InvalidParameter(f"eps must be in (0, 1), got {eps}")
    return _cutoff_from_log_eps(w, math.log(eps))


def parse_weight(text):
    """Parse the CLI weight grammar.

    se:beta=<f>,rho=<f>[,alpha1=<f>,alpha2=<f>]
    de:beta1=<f>,beta2=<f>,gamma=<f>[,alpha1=<f>,alpha2=<f>]
    """
    try:
        kind, _, body = text.partition(":")
        kind = kind.strip().lower()
        fields = {}
        for item in body.split(","):
            if not item.strip():
                continue
            key, _, val = item.partition("=")
            fields[key.strip()] = float(val)
    except ValueError as exc:
        raise InvalidParameter(f"bad weight spec {text!r}: {exc}") from None
    try:
        if kind == "se":
            spec = SEWeight(beta=fields.pop("beta"), rho=fields.pop("rho"),
                            alpha1=fields.pop("alpha1", 1.0),
                            alpha2=fields.pop("alpha2", 1.0))
        elif kind == "de":
            spec = DEWeight(beta1=fields.pop("beta1"), beta2=fields.pop("beta2"),
                            gamma=fields.pop("gamma"),
                            alpha1=fields.pop("alpha1", 1.0),
                            alpha2=fields.pop("alpha2", 1.0))
        else:
            raise InvalidParameter(
                f"weight kind must be 'se' or 'de', got {kind!r}")
    except KeyError as exc:
        raise InvalidParameter(f"weight spec {text!r} is missing {exc}") from None
    if fields:
        raise InvalidParameter(f"unknown weight fields {sorted(fields)} in {text!r}")
    return spec


def weight_tag(w):
    """Canonical text form; round-trips through parse_weight."""
    alphas = ""
    if w.alpha1 != 1.0 or w.alpha2 != 1.0:
        alphas = f",alpha1={w.alpha1:.17g},alpha2={w.alpha2:.17g}"
    if isinstance(w, SEWeight):
        return f"se:beta={w.beta:.17g},rho={w.rho:.17g}" + alphas
    return (f"de:beta1={w.beta1:.17g},beta2={w.beta2:.17g},"
            f"gamma={w.gamma:.17g}" + alphas)
