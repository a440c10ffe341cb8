"""Compiled tree-growth engine.

Kept operation-for-operation parallel with kernels_numpy: histograms
accumulate in segment order, prefix statistics are running sums, gains use
the identical expression, and ties resolve to the lowest feature then
lowest bin, so the two engines grow bitwise-identical trees. No fastmath:
reordering float arithmetic would break that parity.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _seq_sum_range(vals, sidx, s, e):
    acc = 0.0
    for j in range(s, e):
        acc += vals[sidx[j]]
    return acc


@njit(cache=True)
def _build_hist(x_binned, sidx, s, e, g, h, hist_g, hist_h, hist_c, node):
    d = x_binned.shape[1]
    width = hist_g.shape[2]
    for f in range(d):
        for b in range(width):
            hist_g[node, f, b] = 0.0
            hist_h[node, f, b] = 0.0
            hist_c[node, f, b] = 0
        for j in range(s, e):
            i = sidx[j]
            b = x_binned[i, f]
            hist_g[node, f, b] += g[i]
            hist_h[node, f, b] += h[i]
            hist_c[node, f, b] += 1


@njit(cache=True)
def _subtract_hist(hist_g, hist_h, hist_c, node, parent, sibling):
    d = hist_g.shape[1]
    width = hist_g.shape[2]
    for f in range(d):
        for b in range(width):
            hist_g[node, f, b] = hist_g[parent, f, b] - hist_g[sibling, f, b]
            hist_h[node, f, b] = hist_h[parent, f, b] - hist_h[sibling, f, b]
            hist_c[node, f, b] = hist_c[parent, f, b] - hist_c[sibling, f, b]


@njit(cache=True)
def _scan(hist_g, hist_h, hist_c, n_bins, node, ng, nh, count, min_leaf, l2):
    best = -np.inf
    bf = np.int64(-1)
    bb = np.int64(-1)
    if nh + l2 <= 0.0:
        return best, bf, bb
    gg = ng * ng / (nh + l2)
    d = hist_g.shape[1]
    for f in range(d):
        gl = 0.0
        hl = 0.0
        cl = 0
        for b in range(n_bins[f] - 1):
            gl += hist_g[node, f, b]
            hl += hist_h[node, f, b]
            cl += hist_c[node, f, b]
            if cl < min_leaf:
                continue
            cr = count - cl
            if cr < min_leaf:
                break
            hr = nh - hl
            if hl + l2 <= 0.0 or hr + l2 <= 0.0:
                continue
            gr = ng - gl
            gain = 0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - gg)
            if gain > best:
                best = gain
                bf = np.int64(f)
                bb = np.int64(b)
    return best, bf, bb


@njit(cache=True)
def _grow(x_binned, n_bins, g, h, min_leaf, max_leaves, l2, lr, use_subtraction, hist_g, hist_h, hist_c):
    n = x_binned.shape[0]
    max_nodes = 2 * max_leaves - 1

    feature = np.full(max_nodes, -1, np.int64)
    bin_split = np.full(max_nodes, -1, np.int64)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    value = np.zeros(max_nodes)
    start = np.zeros(max_nodes, np.int64)
    end = np.zeros(max_nodes, np.int64)
    node_g = np.zeros(max_nodes)
    node_h = np.zeros(max_nodes)
    best_gain = np.full(max_nodes, -np.inf)
    best_feat = np.full(max_nodes, -1, np.int64)
    best_bin = np.full(max_nodes, -1, np.int64)
    is_open = np.zeros(max_nodes, np.bool_)

    sidx = np.arange(n)
    tmp = np.empty(n, np.int64)

    start[0] = 0
    end[0] = n
    node_g[0] = _seq_sum_range(g, sidx, 0, n)
    node_h[0] = _seq_sum_range(h, sidx, 0, n)
    _build_hist(x_binned, sidx, 0, n, g, h, hist_g, hist_h, hist_c, 0)
    bg, bf, bb = _scan(hist_g, hist_h, hist_c, n_bins, 0, node_g[0], node_h[0], n, min_leaf, l2)
    if bg > 0.0:
        best_gain[0] = bg
        best_feat[0] = bf
        best_bin[0] = bb
    is_open[0] = True
    n_nodes = 1
    n_leaves = 1

    while n_leaves < max_leaves:
        q = -1
        top = -np.inf
        for i in range(n_nodes):
            if is_open[i] and best_gain[i] > top:
                top = best_gain[i]
                q = i
        if q < 0 or top <= 0.0:
            break

        f = best_feat[q]
        b = best_bin[q]
        s = start[q]
        e = end[q]
        nl = 0
        for j in range(s, e):
            if x_binned[sidx[j], f] <= b:
                nl += 1
        mid = s + nl
        li = s
        ri = 0
        for j in range(s, e):
            i = sidx[j]
            if x_binned[i, f] <= b:
                tmp[li] = i
                li += 1
            else:
                tmp[mid + ri] = i
                ri += 1
        for j in range(s, e):
            sidx[j] = tmp[j]

        lc = n_nodes
        rc = n_nodes + 1
        n_nodes += 2
        feature[q] = f
        bin_split[q] = b
        left[q] = lc
        right[q] = rc
        start[lc] = s
        end[lc] = mid
        start[rc] = mid
        end[rc] = e
        node_g[lc] = _seq_sum_range(g, sidx, s, mid)
        node_h[lc] = _seq_sum_range(h, sidx, s, mid)
        node_g[rc] = _seq_sum_range(g, sidx, mid, e)
        node_h[rc] = _seq_sum_range(h, sidx, mid, e)

        if use_subtraction:
            if mid - s <= e - mid:
                _build_hist(x_binned, sidx, s, mid, g, h, hist_g, hist_h, hist_c, lc)
                _subtract_hist(hist_g, hist_h, hist_c, rc, q, lc)
            else:
                _build_hist(x_binned, sidx, mid, e, g, h, hist_g, hist_h, hist_c, rc)
                _subtract_hist(hist_g, hist_h, hist_c, lc, q, rc)
        else:
            _build_hist(x_binned, sidx, s, mid, g, h, hist_g, hist_h, hist_c, lc)
            _build_hist(x_binned, sidx, mid, e, g, h, hist_g, hist_h, hist_c, rc)

        bg, bf, bb = _scan(
            hist_g, hist_h, hist_c, n_bins, lc, node_g[lc], node_h[lc], mid - s, min_leaf, l2
        )
        if bg > 0.0:
            best_gain[lc] = bg
            best_feat[lc] = bf
            best_bin[lc] = bb
        bg, bf, bb = _scan(
            hist_g, hist_h, hist_c, n_bins, rc, node_g[rc], node_h[rc], e - mid, min_leaf, l2
        )
        if bg > 0.0:
            best_gain[rc] = bg
            best_feat[rc] = bf
            best_bin[rc] = bb

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
                if not np.isfinite(v):
                    v = 0.0
                value[node] = v
            else:
                value[node] = 0.0
            for j in range(start[node], end[node]):
                train_pred[sidx[j]] = value[node]

    return (
        feature[:n_nodes].copy(),
        bin_split[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        n_nodes,
        train_pred,
    )


def grow_tree(
    x_binned,
    n_bins,
    g,
    h,
    min_leaf,
    max_leaves,
    l2,
    lr,
    use_subtraction,
    hist_g,
    hist_h,
    hist_c,
):
    """Compiled counterpart of kernels_numpy.grow_tree; same contract."""
    return _grow(
        x_binned,
        n_bins,
        g,
        h,
        np.int64(min_leaf),
        np.int64(max_leaves),
        np.float64(l2),
        np.float64(lr),
        bool(use_subtraction),
        hist_g,
        hist_h,
        hist_c,
    )
