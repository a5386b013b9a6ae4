"""Pure-numpy kernels for products of tanh factors in log scale.

Twin of the compiled extension ``stripquad._kernels``; both expose the same
two functions and must agree to ~1e-15 absolute.  Terms with
pi*|dx|/(4d) > 22 are skipped: each contributes more than -1.3e-19 to the
log sum, far below every tolerance used downstream.
"""

import numpy as np

NEGLIGIBLE_ARG = 22.0


def fooling_log_sum(xs, nodes, d):
    """For each x in xs, sum of 2*ln|tanh(pi*(x - node)/(4d))| over all nodes.

    xs: 1-d array of evaluation points.
    nodes: 1-d sorted array of quadrature nodes.
    Returns an array the shape of xs; -inf where x hits a node exactly.
    """
    xs = np.asarray(xs, dtype=float)
    nodes = np.asarray(nodes, dtype=float)
    scale = np.pi / (4.0 * d)
    win = NEGLIGIBLE_ARG / scale
    lo = np.searchsorted(nodes, xs - win, side="left")
    hi = np.searchsorted(nodes, xs + win, side="right")
    out = np.empty(xs.shape, dtype=float)
    for k in range(xs.size):
        t = scale * np.abs(xs.flat[k] - nodes[lo[k]:hi[k]])
        if t.size and t.min() == 0.0:
            out.flat[k] = -np.inf
        else:
            out.flat[k] = 2.0 * np.sum(np.log(np.tanh(t))) if t.size else 0.0
    return out


def pairwise_log_tanh(nodes, d):
    """Per-node one-sided log tanh-product sums against all other nodes.

    Returns (left, right) with
      left[i]  = sum_{j < i} 2*ln|tanh(pi*(nodes[i] - nodes[j])/(4d))|
      right[i] = sum_{j > i} 2*ln|tanh(pi*(nodes[j] - nodes[i])/(4d))|
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    scale = np.pi / (4.0 * d)
    win = NEGLIGIBLE_ARG / scale
    left = np.zeros(n)
    right = np.zeros(n)
    lo = np.searchsorted(nodes, nodes - win, side="left")
    hi = np.searchsorted(nodes, nodes + win, side="right")
    for i in range(n):
        if lo[i] < i:
            t = scale * (nodes[i] - nodes[lo[i]:i])
            left[i] = 2.0 * np.sum(np.log(np.tanh(t)))
        if i + 1 < hi[i]:
            t = scale * (nodes[i + 1:hi[i]] - nodes[i])
            right[i] = 2.0 * np.sum(np.log(np.tanh(t)))
    return left, right
