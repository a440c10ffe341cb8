"""Filter-style feature relevance scores.

All three methods see numeric features through the same 10-bin
equal-frequency discretization used by the trees (values enter as bin
memberships, so their sign and scale never matter). The F statistic
alone works on the raw values.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError, StatsError
from .hgbc.binning import BinMapper

FILTER_METHODS = ("chi_square", "anova_f", "mutual_info")

N_DISCRETIZATION_BINS = 10


def chi_square_stat(table) -> float:
    """Pearson chi-square of a contingency table."""
    table = np.asarray(table, dtype=np.float64)
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / table.sum()
    live = expected > 0
    return float((((table - expected) ** 2)[live] / expected[live]).sum())


def _contingency(codes, y, n_classes):
    width = int(codes.max()) + 1
    table = np.zeros((width, n_classes))
    for b, c in zip(codes, y):
        table[b, c] += 1
    return table


def _chi_square_scores(x, y, n_classes):
    codes = BinMapper(N_DISCRETIZATION_BINS).fit_transform(x)
    return np.array(
        [chi_square_stat(_contingency(codes[:, j], y, n_classes)) for j in range(x.shape[1])]
    )


def _anova_f_scores(x, y, n_classes):
    n, d = x.shape
    grand = x.mean(axis=0)
    between = np.zeros(d)
    within = np.zeros(d)
    for c in range(n_classes):
        block = x[y == c]
        mean_c = block.mean(axis=0)
        between += block.shape[0] * (mean_c - grand) ** 2
        within += ((block - mean_c) ** 2).sum(axis=0)
    between /= n_classes - 1
    within /= n - n_classes
    # a constant column carries no association; rounding in the means can
    # leave dust in both sums, so decide on the raw values
    constant = x.max(axis=0) == x.min(axis=0)
    scores = np.zeros(d)
    for j in range(d):
        if constant[j] or between[j] == 0.0:
            scores[j] = 0.0
        elif within[j] == 0.0:
            scores[j] = np.inf
        else:
            scores[j] = between[j] / within[j]
    return scores


def _mutual_info_scores(x, y, n_classes):
    codes = BinMapper(N_DISCRETIZATION_BINS).fit_transform(x)
    n = x.shape[0]
    scores = np.empty(x.shape[1])
    for j in range(x.shape[1]):
        joint = _contingency(codes[:, j], y, n_classes) / n
        px = joint.sum(axis=1, keepdims=True)
        py = joint.sum(axis=0, keepdims=True)
        live = joint > 0
        scores[j] = float((joint[live] * np.log(joint[live] / (px @ py)[live])).sum())
    return scores


def filter_scores(method: str, dataset) -> np.ndarray:
    """Per-feature relevance scores, higher meaning more class-associated."""
    y = dataset.labels
    classes = np.unique(y)
    if classes.shape[0] < 2:
        raise StatsError("relevance scores need at least two classes")
    y_idx = np.searchsorted(classes, y)
    x = dataset.features
    if method == "chi_square":
        return _chi_square_scores(x, y_idx, classes.shape[0])
    if method == "anova_f":
        return _anova_f_scores(x, y_idx, classes.shape[0])
    if method == "mutual_info":
        return _mutual_info_scores(x, y_idx, classes.shape[0])
    raise ConfigError(f"unknown filter method {method!r}")


def select_top_k(scores, k: int) -> np.ndarray:
    """Indices of the k largest scores, ties resolved to the lower index."""
    scores = np.asarray(scores, dtype=np.float64)
    if not 1 <= k <= scores.shape[0]:
        raise ConfigError(f"k={k} outside 1..{scores.shape[0]}")
    order = np.argsort(-scores, kind="stable")
    return np.sort(order[:k])
