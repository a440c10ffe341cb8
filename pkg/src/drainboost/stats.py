"""Cross-validation scaffolding and paired statistics.

The signed-rank test is exact up to 25 effective pairs: the full
distribution of rank sums over sign assignments is built by dynamic
programming on doubled ranks (integers even under average ranking).
Beyond that a normal approximation with tie correction takes over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, StratificationError

A_WINS, TIE, B_WINS = "a_wins", "tie", "b_wins"


@dataclass
class FoldAssignment:
    k: int
    fold: np.ndarray  # fold index per instance
    seed: int

    def split(self, f: int):
        test = self.fold == f
        return np.flatnonzero(~test), np.flatnonzero(test)


def stratified_kfold(labels, k: int, seed: int) -> FoldAssignment:
    """Deterministic stratified fold assignment.

    Fold sizes differ by at most one, and so do each class's per-fold
    counts: classes hand out their surplus rows starting where the
    previous class stopped, so the extras spread round-robin.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ConfigError("k must be at least 2")
    rng = np.random.default_rng(seed)
    fold = np.empty(labels.shape[0], dtype=np.int64)
    offset = 0
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.shape[0] < k:
            raise StratificationError(
                f"class {cls} has {idx.shape[0]} members, fewer than k={k}"
            )
        rng.shuffle(idx)
        sizes = np.full(k, idx.shape[0] // k)
        extras = idx.shape[0] % k
        sizes[(offset + np.arange(extras)) % k] += 1
        offset = (offset + extras) % k
        stop = np.cumsum(sizes)
        for f in range(k):
            fold[idx[stop[f] - sizes[f] : stop[f]]] = f
    return FoldAssignment(k, fold, seed)


def score(truth, pred) -> tuple[float, float]:
    """(accuracy, macro F-measure), both in percent.

    Per-class F is 2PR/(P+R) with the 0/0 cases defined as 0; the macro
    average runs over every class seen in either vector.
    """
    truth = np.asarray(truth)
    pred = np.asarray(pred)
    if truth.shape != pred.shape or truth.ndim != 1 or truth.shape[0] == 0:
        raise ValueError("need equally many truths and predictions")
    accuracy = 100.0 * np.count_nonzero(truth == pred) / truth.shape[0]
    f_values = []
    for cls in np.unique(np.concatenate([truth, pred])):
        tp = np.count_nonzero((pred == cls) & (truth == cls))
        fp = np.count_nonzero((pred == cls) & (truth != cls))
        fn = np.count_nonzero((pred != cls) & (truth == cls))
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        if precision + recall:
            f_values.append(2.0 * precision * recall / (precision + recall))
        else:
            f_values.append(0.0)
    return float(accuracy), 100.0 * float(np.mean(f_values))


@dataclass
class CvSummary:
    """Per-fold scores in percent with population-std aggregates."""

    accuracy: np.ndarray
    macro_f: np.ndarray

    @property
    def accuracy_mean(self) -> float:
        return float(np.mean(self.accuracy))

    @property
    def accuracy_std(self) -> float:
        return float(np.std(self.accuracy))

    @property
    def macro_f_mean(self) -> float:
        return float(np.mean(self.macro_f))

    @property
    def macro_f_std(self) -> float:
        return float(np.std(self.macro_f))


def summarize_folds(per_fold) -> CvSummary:
    pairs = list(per_fold)
    acc = np.array([a for a, _ in pairs])
    f = np.array([b for _, b in pairs])
    return CvSummary(acc, f)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0])
    sorted_vals = values[order]
    i = 0
    while i < sorted_vals.shape[0]:
        j = i
        while j < sorted_vals.shape[0] and sorted_vals[j] == sorted_vals[i]:
            j += 1
        ranks[order[i:j]] = (i + 1 + j) / 2.0  # mean of ranks i+1 .. j
        i = j
    return ranks


def wilcoxon_signed_rank(a, b, alpha: float = 0.05, exact_limit: int = 25):
    """Two-sided paired signed-rank test: (p, outcome).

    Zero differences are dropped; all-zero means a tie at p = 1. The
    outcome is a_wins or b_wins only when p < alpha, direction taken
    from the larger rank sum.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired samples must be equal-length vectors")
    d = a - b
    d = d[d != 0]
    n = d.shape[0]
    if n == 0:
        return 1.0, TIE
    ranks = _average_ranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w_min = min(w_plus, w_minus)
    if n <= exact_limit:
        # distribution of the rank sum over all 2^n sign assignments
        doubled = np.rint(2.0 * ranks).astype(np.int64)
        counts = np.zeros(int(doubled.sum()) + 1, dtype=np.int64)
        counts[0] = 1
        for r in doubled:
            counts[r:] = counts[r:] + counts[:-r]
        target = int(np.rint(2.0 * w_min))
        p = 2.0 * float(counts[: target + 1].sum()) / float(2**n)
    else:
        mu = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0
        _, tie_sizes = np.unique(np.abs(d), return_counts=True)
        var -= float((tie_sizes.astype(np.float64) ** 3 - tie_sizes).sum()) / 48.0
        # continuity correction: W is integer-valued (half-integer under ties)
        z = (w_min - mu + 0.5) / math.sqrt(var)
        p = 1.0 + math.erf(z / math.sqrt(2.0))
    p = min(p, 1.0)
    if p >= alpha:
        return p, TIE
    return p, A_WINS if w_plus > w_minus else B_WINS


@dataclass
class WtlMatrix:
    names: tuple
    outcome: np.ndarray  # +1 row wins, 0 tie, -1 row loses

    def totals(self) -> dict:
        out = {}
        for i, name in enumerate(self.names):
            row = np.delete(self.outcome[i], i)
            out[name] = (
                int(np.count_nonzero(row == 1)),
                int(np.count_nonzero(row == 0)),
                int(np.count_nonzero(row == -1)),
            )
        return out


def wtl_matrix(fold_scores: dict, alpha: float = 0.05) -> WtlMatrix:
    """Pairwise signed-rank outcomes; fold_scores maps name -> score vector.

    Both directions of every pair are tested independently, so the
    antisymmetry of the result is a checked property, not a construction.
    """
    names = tuple(fold_scores)
    arrays = [np.asarray(fold_scores[name], dtype=np.float64) for name in names]
    if len({arr.shape[0] for arr in arrays}) > 1:
        raise ValueError("fold scores must all cover the same folds")
    n = len(names)
    outcome = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            _, verdict = wilcoxon_signed_rank(arrays[i], arrays[j], alpha)
            outcome[i, j] = 1 if verdict == A_WINS else -1 if verdict == B_WINS else 0
    return WtlMatrix(names, outcome)


def cv_table_csv(summaries: dict) -> str:
    lines = ["algorithm,accuracy_mean,accuracy_std,macro_f_mean,macro_f_std"]
    for name, s in summaries.items():
        lines.append(
            f"{name},{s.accuracy_mean!r},{s.accuracy_std!r},{s.macro_f_mean!r},{s.macro_f_std!r}"
        )
    return "\n".join(lines) + "\n"


def cv_table_text(summaries: dict) -> str:
    width = max(len("algorithm"), *(len(n) for n in summaries))
    head = f"{'algorithm':<{width}}  {'accuracy':>14}  {'macro F':>14}"
    lines = [head, "-" * len(head)]
    for name, s in summaries.items():
        acc = f"{s.accuracy_mean:6.2f} ± {s.accuracy_std:5.2f}"
        f1 = f"{s.macro_f_mean:6.2f} ± {s.macro_f_std:5.2f}"
        lines.append(f"{name:<{width}}  {acc:>14}  {f1:>14}")
    return "\n".join(lines) + "\n"


def wtl_table_csv(matrix: WtlMatrix) -> str:
    symbol = {1: "w", 0: "t", -1: "l"}
    lines = ["algorithm," + ",".join(matrix.names) + ",w/t/l"]
    totals = matrix.totals()
    for i, name in enumerate(matrix.names):
        cells = [
            "-" if i == j else symbol[int(matrix.outcome[i, j])]
            for j in range(len(matrix.names))
        ]
        w, t, l = totals[name]
        lines.append(f"{name}," + ",".join(cells) + f",{w}/{t}/{l}")
    return "\n".join(lines) + "\n"


def wtl_table_text(matrix: WtlMatrix) -> str:
    symbol = {1: "w", 0: "t", -1: "l"}
    width = max(len("algorithm"), *(len(n) for n in matrix.names))
    col = max(5, *(len(n) for n in matrix.names))
    head = f"{'algorithm':<{width}}  " + "  ".join(f"{n:>{col}}" for n in matrix.names)
    head += f"  {'w/t/l':>8}"
    lines = [head, "-" * len(head)]
    totals = matrix.totals()
    for i, name in enumerate(matrix.names):
        cells = [
            "-" if i == j else symbol[int(matrix.outcome[i, j])]
            for j in range(len(matrix.names))
        ]
        w, t, l = totals[name]
        row = f"{name:<{width}}  " + "  ".join(f"{c:>{col}}" for c in cells)
        lines.append(row + f"  {f'{w}/{t}/{l}':>8}")
    return "\n".join(lines) + "\n"
