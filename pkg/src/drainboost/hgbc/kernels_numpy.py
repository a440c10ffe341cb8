"""Vectorized tree-growth engine used when the compiled path is disabled.

Mirrors kernels_numba operation for operation: histograms accumulate in
segment order (np.bincount), prefix statistics come from sequential
cumulative sums, and candidate ties resolve to the lowest feature then
lowest bin, so both engines grow bitwise-identical trees.
"""
from __future__ import annotations

import numpy as np


def _seq_sum(a: np.ndarray) -> float:
    # Sequential accumulation, matching the compiled engine's running loop
    # (np.sum would reduce pairwise and round differently).
    return float(np.cumsum(a)[-1]) if a.size else 0.0


def grow_tree(
    x_binned: np.ndarray,
    n_bins: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    min_leaf: int,
    max_leaves: int,
    l2: float,
    lr: float,
    use_subtraction: bool,
    hist_g: np.ndarray,
    hist_h: np.ndarray,
    hist_c: np.ndarray,
):
    """Grow one best-first tree on binned features and per-sample g/h.

    Returns (feature, bin_split, left, right, value, n_nodes, train_pred).
    Internal nodes carry the split feature and the highest bin code routed
    left; leaves carry feature -1 and the learning-rate-scaled value.
    """
    n, d = x_binned.shape
    width = hist_g.shape[2]
    max_nodes = 2 * max_leaves - 1

    feature = np.full(max_nodes, -1, dtype=np.int64)
    bin_split = np.full(max_nodes, -1, dtype=np.int64)
    left = np.full(max_nodes, -1, dtype=np.int64)
    right = np.full(max_nodes, -1, dtype=np.int64)
    value = np.zeros(max_nodes)
    start = np.zeros(max_nodes, dtype=np.int64)
    end = np.zeros(max_nodes, dtype=np.int64)
    node_g = np.zeros(max_nodes)
    node_h = np.zeros(max_nodes)
    best_gain = np.full(max_nodes, -np.inf)
    best_feat = np.full(max_nodes, -1, dtype=np.int64)
    best_bin = np.full(max_nodes, -1, dtype=np.int64)
    is_open = np.zeros(max_nodes, dtype=bool)

    sidx = np.arange(n, dtype=np.int64)
    bin_cols = np.arange(width)

    def build_hist(node: int) -> None:
        seg = sidx[start[node] : end[node]]
        for f in range(d):
            codes = x_binned[seg, f]
            hist_g[node, f, :] = np.bincount(codes, weights=g[seg], minlength=width)
            hist_h[node, f, :] = np.bincount(codes, weights=h[seg], minlength=width)
            hist_c[node, f, :] = np.bincount(codes, minlength=width)

    def subtract_hist(node: int, parent: int, sibling: int) -> None:
        hist_g[node] = hist_g[parent] - hist_g[sibling]
        hist_h[node] = hist_h[parent] - hist_h[sibling]
        hist_c[node] = hist_c[parent] - hist_c[sibling]

    def scan(node: int) -> None:
        if node_h[node] + l2 <= 0.0:
            return
        count = int(end[node] - start[node])
        gg = node_g[node] * node_g[node] / (node_h[node] + l2)
        gl = np.cumsum(hist_g[node], axis=1)
        hl = np.cumsum(hist_h[node], axis=1)
        cl = np.cumsum(hist_c[node], axis=1)
        gr = node_g[node] - gl
        hr = node_h[node] - hl
        cr = count - cl
        valid = (
            (bin_cols[None, :] < n_bins[:, None] - 1)
            & (cl >= min_leaf)
            & (cr >= min_leaf)
            & (hl + l2 > 0.0)
            & (hr + l2 > 0.0)
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = 0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - gg)
        gain = np.where(valid, gain, -np.inf)
        flat = int(np.argmax(gain))
        top = gain.flat[flat]
        if top > 0.0:
            best_gain[node] = top
            best_feat[node] = flat // width
            best_bin[node] = flat % width

    start[0], end[0] = 0, n
    node_g[0] = _seq_sum(g[sidx])
    node_h[0] = _seq_sum(h[sidx])
    build_hist(0)
    scan(0)
    is_open[0] = True
    n_nodes = 1
    n_leaves = 1

    while n_leaves < max_leaves:
        open_gain = np.where(is_open[:n_nodes], best_gain[:n_nodes], -np.inf)
        q = int(np.argmax(open_gain))
        if open_gain[q] <= 0.0:
            break
        f, b = int(best_feat[q]), int(best_bin[q])
        s, e = int(start[q]), int(end[q])
        seg = sidx[s:e]
        mask = x_binned[seg, f] <= b
        sidx[s:e] = np.concatenate([seg[mask], seg[~mask]])
        mid = s + int(np.count_nonzero(mask))

        lc, rc = n_nodes, n_nodes + 1
        n_nodes += 2
        feature[q] = f
        bin_split[q] = b
        left[q], right[q] = lc, rc
        start[lc], end[lc] = s, mid
        start[rc], end[rc] = mid, e
        node_g[lc] = _seq_sum(g[sidx[s:mid]])
        node_h[lc] = _seq_sum(h[sidx[s:mid]])
        node_g[rc] = _seq_sum(g[sidx[mid:e]])
        node_h[rc] = _seq_sum(h[sidx[mid:e]])

        if use_subtraction:
            if mid - s <= e - mid:
                build_hist(lc)
                subtract_hist(rc, q, lc)
            else:
                build_hist(rc)
                subtract_hist(lc, q, rc)
        else:
            build_hist(lc)
            build_hist(rc)
        scan(lc)
        scan(rc)

        is_open[q] = False
        is_open[lc] = True
        is_open[rc] = True
        n_leaves += 1

    train_pred = np.zeros(n)
    for node in range(n_nodes):
        if left[node] == -1:
            denom = node_h[node] + l2
            if denom > 0.0:
                v = -node_g[node] / denom * lr
                # a subnormal denom can overflow the ratio; an infinite
                # leaf would poison every later score, so drop the step
                value[node] = v if np.isfinite(v) else 0.0
            else:
                value[node] = 0.0
            train_pred[sidx[start[node] : end[node]]] = value[node]

    return (
        feature[:n_nodes].copy(),
        bin_split[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        n_nodes,
        train_pred,
    )
