"""Quantile binning of raw features into small integer codes.

Thresholds sit at midpoints between adjacent distinct values. A feature
with at most max_bins distinct values keeps one bin per value; otherwise
thresholds are placed so bins hold roughly equal sample counts. The code
of a value is the number of thresholds strictly below it, so equal values
always share a bin.
"""
from __future__ import annotations

import numpy as np

MAX_BINS_LIMIT = 255  # codes must fit uint8


def _feature_thresholds(col: np.ndarray, max_bins: int) -> np.ndarray:
    distinct, counts = np.unique(col, return_counts=True)
    m = distinct.shape[0]
    if m <= 1:
        return np.empty(0)
    mid = (distinct[:-1] + distinct[1:]) / 2.0
    if m <= max_bins:
        return mid
    cum = np.cumsum(counts)
    n = col.shape[0]
    out = []
    for k in range(1, max_bins):
        target = k * n / max_bins
        i = int(np.searchsorted(cum, target, side="left"))
        i = min(i, m - 2)
        t = mid[i]
        if not out or t > out[-1]:
            out.append(t)
    return np.array(out)


class BinMapper:
    """Fit per-feature thresholds on training data, then map values to codes."""

    def __init__(self, max_bins: int = 255):
        if not 2 <= max_bins <= MAX_BINS_LIMIT:
            raise ValueError(f"max_bins must lie in [2, {MAX_BINS_LIMIT}]")
        self.max_bins = max_bins
        self.thresholds_: list[np.ndarray] | None = None
        self.n_bins_: np.ndarray | None = None

    def fit(self, x: np.ndarray) -> "BinMapper":
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] == 0:
            raise ValueError("binning requires a nonempty 2-d matrix")
        self.thresholds_ = [_feature_thresholds(x[:, j], self.max_bins) for j in range(x.shape[1])]
        self.n_bins_ = np.array([t.shape[0] + 1 for t in self.thresholds_], dtype=np.int64)
        return self

    def transform(self, x: np.ndarray) -> np.ndarray:
        if self.thresholds_ is None:
            raise ValueError("transform called before fit")
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != len(self.thresholds_):
            raise ValueError("matrix width does not match the fitted feature count")
        binned = np.empty(x.shape, dtype=np.uint8, order="F")
        for j, t in enumerate(self.thresholds_):
            binned[:, j] = np.searchsorted(t, x[:, j], side="left").astype(np.uint8)
        return binned

    def fit_transform(self, x: np.ndarray) -> np.ndarray:
        return self.fit(x).transform(x)
