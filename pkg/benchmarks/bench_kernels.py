#!/usr/bin/env python3
"""Benchmark the compiled tanh-product kernels against the numpy fallback.

Run as: python benchmarks/bench_kernels.py [--repeat N]

Times the two hot kernels on rule sizes spanning the sweep range and
checks that both backends agree to 1e-12.  The compiled backend is what
an editable install builds by default; the fallback is what you get with
STRIPQUAD_PURE_PYTHON=1 or without a compiler.
"""

import argparse
import math
import time

import numpy as np

from stripquad import _kernels_py
from stripquad.rules import gauss_hermite_rule, trapezoidal_rule
from stripquad.weights import SEWeight, StripDomain

try:
    from stripquad import _kernels as _compiled
except ImportError:
    _compiled = None


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(repeat):
    d = 1.0
    cases = []
    for m in (32, 128, 512):
        rule = trapezoidal_rule(StripDomain(d), SEWeight(1.0, 1.0), m)
        cases.append((f"trap m={m} (n={rule.n})", rule.nodes))
    rule = gauss_hermite_rule(160)
    cases.append(("gh n=160", rule.nodes))

    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.append(("compiled", _compiled))

    print(f"{'case':24s} {'kernel':18s} " +
          " ".join(f"{name:>10s}" for name, _ in backends) + "   speedup")
    for label, nodes in cases:
        xs = np.linspace(nodes[0] - 5.0, nodes[-1] + 5.0, 4096)
        rows = {
            "fooling_log_sum": lambda impl, xs=xs, nodes=nodes:
                impl.fooling_log_sum(xs, nodes, d),
            "pairwise_log_tanh": lambda impl, nodes=nodes:
                impl.pairwise_log_tanh(nodes, d),
        }
        for kernel_name, call in rows.items():
            times = []
            results = []
            for _, impl in backends:
                times.append(_time(lambda: call(impl), repeat))
                results.append(call(impl))
            ref = np.asarray(results[0], dtype=object)
            for other in results[1:]:
                a = np.concatenate([np.ravel(r) for r in np.atleast_1d(results[0])]) \
                    if isinstance(results[0], tuple) else np.ravel(results[0])
                b = np.concatenate([np.ravel(r) for r in np.atleast_1d(other)]) \
                    if isinstance(other, tuple) else np.ravel(other)
                finite = np.isfinite(a)
                assert np.array_equal(finite, np.isfinite(b))
                assert np.max(np.abs(a[finite] - b[finite]), initial=0.0) < 1e-12, \
                    f"backend mismatch on {label}/{kernel_name}"
            speed = times[0] / times[-1] if len(times) > 1 else float("nan")
            print(f"{label:24s} {kernel_name:18s} " +
                  " ".join(f"{t * 1e3:9.3f}ms" for t in times) +
                  (f"   {speed:6.1f}x" if len(times) > 1 else "   (no ext)"))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    bench(ap.parse_args().repeat)
