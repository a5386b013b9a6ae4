"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation when
the extension is unavailable or when STRIPQUAD_PURE_PYTHON is set.
"""

import os

from . import _kernels_py

if os.environ.get("STRIPQUAD_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

fooling_log_sum = _impl.fooling_log_sum
pairwise_log_tanh = _impl.pairwise_log_tanh


def backend():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
