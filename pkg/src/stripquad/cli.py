"""Command-line front end: rule construction, bound evaluation, sweeps,
rate fits, and weight validation.

Exit codes: 0 success, 1 computation error, 2 usage error.  Every error
path prints exactly one diagnostic line to stderr.
"""

import argparse
import contextlib
import sys

from . import bounds as _bounds
from . import harness as _harness
from .errors import StripQuadError
from .rules import (
    KIND_FROM_SHORT,
    RuleKind,
    emit_rule_csv,
    gauss_hermite_rule,
    scaled_clenshaw_curtis,
    scaled_gauss_legendre,
    scaling_factor,
    trapezoidal_rule,
)
from .weights import StripDomain, parse_weight, validate

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="stripquad", add_help=True)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, rule=False, weight=False, d=False, n=False,
               n_list=False, m=False, L=False, rel_tol=False, out=False,
               fmt=False, kind=False):
        if kind:
            p.add_argument("--kind", required=True, choices=[
                "prop22", "thm31", "thm32", "cor41", "cor42", "cor43",
                "sugihara", "uppertail", "upperbernstein", "uppertrap"])
        if rule:
            p.add_argument("--rule", choices=["trap", "gl", "cc", "gh"])
        if weight:
            p.add_argument("--weight", help="se:beta=..,rho=.. or de:beta1=..,beta2=..,gamma=..")
        if d:
            p.add_argument("--d", type=float, help="strip half-width")
        if n:
            p.add_argument("--n", type=int)
        if n_list:
            p.add_argument("--n-list", dest="n_list",
                           help="comma-separated strictly increasing integers")
        if m:
            p.add_argument("--m", type=int, help="trapezoidal half-count (n = 2m+1)")
        if L:
            p.add_argument("--L", type=float, help="scaling length for gl/cc")
        if rel_tol:
            p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-10)
        if out:
            p.add_argument("--out", default="-", help="output path, '-' for stdout")
        if fmt:
            p.add_argument("--format", choices=["csv", "json"])

    p = sub.add_parser("nodes", description="construct a rule and emit it")
    common(p, rule=True, weight=True, d=True, n=True, m=True, L=True,
           out=True, fmt=True)

    p = sub.add_parser("bound", description="evaluate one bound as JSON")
    common(p, kind=True, rule=True, weight=True, d=True, n=True, m=True,
           L=True, rel_tol=True, out=True)

    p = sub.add_parser("sweep", description="bounds and errors over an n list")
    common(p, rule=True, weight=True, d=True, n_list=True, L=True,
           rel_tol=True, out=True)

    p = sub.add_parser("fit", description="fit a decay rate")
    common(p, rule=True, weight=True, d=True, n_list=True, L=True,
           rel_tol=True, out=True)
    p.add_argument("--in", dest="input_csv",
                   help="fit an existing sweep CSV instead of sweeping")
    p.add_argument("--field", default="log_prop22")
    p.add_argument("--model",
                   help="sqrtn | nlogn | powse | pow:<p>; default inferred")

    p = sub.add_parser("validate", description="check a weight against a strip")
    common(p, weight=True, d=True)
    return parser


def _require(args, names):
    for name in names:
        if getattr(args, name, None) is None:
            raise _UsageError(f"--{name.replace('_', '-')} is required here")


def _domain(args):
    _require(args, ["d"])
    return StripDomain(args.d)


def _weight(args):
    _require(args, ["weight"])
    return parse_weight(args.weight)


def _rule_from_args(args, need_domain=True):
    _require(args, ["rule"])
    kind = KIND_FROM_SHORT[args.rule]
    if kind == RuleKind.TRAPEZOIDAL:
        _require(args, ["m"])
        return trapezoidal_rule(_domain(args), _weight(args), args.m)
    if kind == RuleKind.GAUSS_HERMITE:
        _require(args, ["n"])
        return gauss_hermite_rule(args.n)
    _require(args, ["n", "L"])
    T = scaling_factor(_weight(args), args.n, args.L)
    ctor = (scaled_gauss_legendre if kind == RuleKind.GAUSS_LEGENDRE_SCALED
            else scaled_clenshaw_curtis)
    return ctor(args.n, T, L=args.L)


@contextlib.contextmanager
def _output(args):
    path = getattr(args, "out", "-") or "-"
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _cmd_nodes(args):
    rule = _rule_from_args(args)
    with _output(args) as out:
        if getattr(args, "format", None) == "json":
            import json
            payload = {"kind": rule.kind.value, "n": rule.n,
                       "nodes": [f"{x:.17g}" for x in rule.nodes],
                       "weights": [f"{w:.17g}" for w in rule.weights],
                       "xi_min": f"{rule.meta.xi_min:.17g}"}
            out.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            emit_rule_csv(rule, out)
    return 0


def _cmd_bound(args):
    kind = args.kind
    if kind in ("prop22", "thm31", "thm32"):
        rule = _rule_from_args(args)
        fn = {"prop22": lambda: _bounds.lower_bound_prop22(
                  rule, _domain(args), _weight(args), args.rel_tol),
              "thm31": lambda: _bounds.lower_bound_thm31(
                  rule, _domain(args), _weight(args)),
              "thm32": lambda: _bounds.lower_bound_thm32(
                  rule, _domain(args), _weight(args))}[kind]
        report = fn()
    elif kind == "cor41":
        _require(args, ["m"])
        report = _bounds.lower_bound_cor41(_domain(args), _weight(args), args.m)
    elif kind == "cor42":
        _require(args, ["n", "L", "rule"])
        report = _bounds.lower_bound_cor42(
            _domain(args), _weight(args), args.n, args.L, args.rule)
    elif kind == "cor43":
        _require(args, ["n"])
        report = _bounds.lower_bound_cor43(_domain(args), _weight(args), args.n)
    elif kind == "sugihara":
        _require(args, ["n"])
        report = _bounds.universal_lower_sugihara(
            _domain(args), _weight(args), args.n)
    elif kind == "uppertail":
        _require(args, ["n", "L"])
        T = scaling_factor(_weight(args), args.n, args.L)
        report = _bounds.upper_bound_tail(_domain(args), _weight(args), T)
    elif kind == "upperbernstein":
        _require(args, ["n", "L", "rule"])
        T = scaling_factor(_weight(args), args.n, args.L)
        report = _bounds.upper_bound_bernstein_rate(
            _domain(args), T, args.n, args.rule)
    else:
        _require(args, ["n"])
        report = _bounds.upper_bound_trap_rate(_domain(args), _weight(args), args.n)
    with _output(args) as out:
        out.write(_bounds.bound_report_to_json(report) + "\n")
    return 0


def _parse_n_list(args):
    _require(args, ["n_list"])
    try:
        values = tuple(int(x) for x in args.n_list.split(","))
    except ValueError:
        raise _UsageError(f"--n-list must be comma-separated integers, "
                          f"got {args.n_list!r}")
    if any(b <= a for a, b in zip(values[:-1], values[1:])):
        raise _UsageError("--n-list must be strictly increasing")
    return values


def _sweep_config(args):
    _require(args, ["rule"])
    return _harness.SweepConfig(
        rule_kind=KIND_FROM_SHORT[args.rule],
        weight=_weight(args),
        domain=_domain(args),
        n_list=_parse_n_list(args),
        L=args.L,
        rel_tol=args.rel_tol,
    )


def _cmd_sweep(args):
    records = _harness.sweep(_sweep_config(args))
    with _output(args) as out:
        _harness.emit_csv(records, out)
    return 0


def _pick_model(args, records):
    name = args.model
    if name is None:
        kind = records[0].rule_kind
        wtag = records[0].weight_tag
        if kind == RuleKind.GAUSS_HERMITE:
            return _harness.MODEL_SQRT_N
        if wtag.startswith("de:"):
            return _harness.MODEL_N_OVER_LOG_N
        rho = parse_weight(wtag).rho
        return _harness.se_rate_model(rho)
    if name == "sqrtn":
        return _harness.MODEL_SQRT_N
    if name == "nlogn":
        return _harness.MODEL_N_OVER_LOG_N
    if name == "powse":
        return _harness.se_rate_model(_weight(args).rho)
    if name.startswith("pow:"):
        return _harness.power_model(float(name[4:]))
    raise _UsageError(f"unknown model {name!r}")


def _cmd_fit(args):
    if args.input_csv:
        records = _harness.parse_csv(args.input_csv)
    else:
        records = _harness.sweep(_sweep_config(args))
    model = _pick_model(args, records)
    fit = _harness.fit_rate(records, args.field, model)
    with _output(args) as out:
        out.write(_harness.fit_to_json(fit) + "\n")
    return 0


def _cmd_validate(args):
    validate(_domain(args), _weight(args))
    sys.stdout.write("ok\n")
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    handler = {"nodes": _cmd_nodes, "bound": _cmd_bound, "sweep": _cmd_sweep,
               "fit": _cmd_fit, "validate": _cmd_validate}[args.subcommand]
    try:
        return handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except StripQuadError as exc:
        print(f"{type(exc).__name__} {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
