"""Multi-class boosted trees over binned features.

Training uses softmax cross-entropy with one tree per class per round,
second-order leaf values and a log-prior baseline. Gradients for a round
are all taken from the probability snapshot at the round's start.
Training itself is deterministic; the seed argument is accepted for
interface stability and reserved for stochastic extensions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .backend import get_engine
from .binning import BinMapper

LEARNING_RATE_RANGE = (0.001, 1.0)
MIN_SAMPLES_LEAF_RANGE = (1, 29)
MAX_LEAF_NODES_RANGE = (30, 100)
L2_RANGE = (0.0, 3.0)
MAX_BINS_RANGE = (2, 255)


@dataclass
class HgbcParams:
    """Model hyper-parameters; every field is kept inside its tuning range."""

    learning_rate: float = 0.1
    min_samples_leaf: int = 5
    max_leaf_nodes: int = 31
    l2: float = 0.0
    max_bins: int = 255
    n_trees: int = 100  # boosting rounds, fixed outside the tuned box

    def __post_init__(self):
        checks = (
            ("learning_rate", self.learning_rate, LEARNING_RATE_RANGE),
            ("min_samples_leaf", self.min_samples_leaf, MIN_SAMPLES_LEAF_RANGE),
            ("max_leaf_nodes", self.max_leaf_nodes, MAX_LEAF_NODES_RANGE),
            ("l2", self.l2, L2_RANGE),
            ("max_bins", self.max_bins, MAX_BINS_RANGE),
        )
        for name, val, (lo, hi) in checks:
            if not lo <= val <= hi:
                raise ConfigError(f"{name}={val!r} outside [{lo}, {hi}]")
        for name in ("min_samples_leaf", "max_leaf_nodes", "max_bins", "n_trees"):
            if getattr(self, name) != int(getattr(self, name)):
                raise ConfigError(f"{name} must be an integer")
        if self.n_trees < 1:
            raise ConfigError("n_trees must be positive")


class Tree:
    """One regression tree with float thresholds for raw-feature routing."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.feature < 0))

    def predict(self, x: np.ndarray) -> np.ndarray:
        n = x.shape[0]
        node = np.zeros(n, dtype=np.int64)
        rows = np.arange(n)
        while True:
            feat = self.feature[node]
            at_leaf = feat < 0
            if at_leaf.all():
                break
            col = np.where(at_leaf, 0, feat)
            go_left = x[rows, col] <= self.threshold[node]
            nxt = np.where(go_left, self.left[node], self.right[node])
            node = np.where(at_leaf, node, nxt)
        return self.value[node]


def _softmax(raw: np.ndarray) -> np.ndarray:
    z = raw - raw.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _log_loss(raw: np.ndarray, y_idx: np.ndarray) -> float:
    m = raw.max(axis=1)
    lse = m + np.log(np.sum(np.exp(raw - m[:, None]), axis=1))
    return float(np.mean(lse - raw[np.arange(raw.shape[0]), y_idx]))


class HgbcModel:
    """A fitted classifier: class list, log-prior baseline and tree table."""

    def __init__(self, params: HgbcParams, classes, baseline, trees, n_features: int,
                 train_loss=None):
        self.params = params
        self.classes_ = np.asarray(classes, dtype=np.int64)
        self.baseline_ = np.asarray(baseline, dtype=np.float64)
        self.trees_ = trees  # list of rounds, each a list with one Tree per class
        self.n_features_ = n_features
        self.train_loss_ = train_loss

    @property
    def n_classes(self) -> int:
        return self.classes_.shape[0]

    def _check_matrix(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_features_:
            raise ValueError(f"expected a matrix with {self.n_features_} columns")
        return x

    def decision_scores(self, x: np.ndarray) -> np.ndarray:
        x = self._check_matrix(x)
        raw = np.tile(self.baseline_, (x.shape[0], 1))
        for round_trees in self.trees_:
            for c, tree in enumerate(round_trees):
                raw[:, c] += tree.predict(x)
        return raw

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _softmax(self.decision_scores(x))

    def predict(self, x: np.ndarray) -> np.ndarray:
        proba = self.predict_proba(x)
        # argmax takes the first maximum, so exact ties go to the lowest class.
        return self.classes_[np.argmax(proba, axis=1)]


def fit(
    x: np.ndarray,
    y: np.ndarray,
    params: HgbcParams | None = None,
    seed: int = 0,
    engine: str | None = None,
    use_subtraction: bool = True,
) -> HgbcModel:
    """Fit the boosted-tree classifier.

    engine picks the tree-growth kernels ("numba" or "numpy", default the
    active backend); use_subtraction toggles deriving the larger child
    histogram from parent minus sibling instead of rebuilding it.
    """
    del seed  # training has no stochastic step
    if params is None:
        params = HgbcParams()
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("training requires a nonempty instance matrix")
    if y.shape[0] != x.shape[0]:
        raise ValueError("label count does not match instance count")

    n, d = x.shape
    classes, y_idx = np.unique(y, return_inverse=True)
    n_classes = classes.shape[0]
    priors = np.bincount(y_idx, minlength=n_classes) / n
    baseline = np.log(priors)

    if n_classes == 1:
        return HgbcModel(params, classes, np.zeros(1), [], d,
                         train_loss=[0.0] * params.n_trees)

    mapper = BinMapper(params.max_bins).fit(x)
    xb = mapper.transform(x)
    n_bins = mapper.n_bins_
    width = int(n_bins.max())
    max_nodes = 2 * params.max_leaf_nodes - 1
    hist_g = np.zeros((max_nodes, d, width))
    hist_h = np.zeros((max_nodes, d, width))
    hist_c = np.zeros((max_nodes, d, width), dtype=np.int64)
    kernels = get_engine(engine)

    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y_idx] = 1.0
    raw = np.tile(baseline, (n, 1))

    trees: list[list[Tree]] = []
    train_loss: list[float] = []
    for _ in range(params.n_trees):
        proba = _softmax(raw)
        round_trees: list[Tree] = []
        for c in range(n_classes):
            g = proba[:, c] - onehot[:, c]
            h = proba[:, c] * (1.0 - proba[:, c])
            feature, bin_split, left, right, value, n_nodes, train_pred = kernels.grow_tree(
                xb,
                n_bins,
                g,
                h,
                params.min_samples_leaf,
                params.max_leaf_nodes,
                params.l2,
                params.learning_rate,
                use_subtraction,
                hist_g,
                hist_h,
                hist_c,
            )
            raw[:, c] += train_pred
            threshold = np.full(n_nodes, np.nan)
            for i in range(n_nodes):
                if feature[i] >= 0:
                    threshold[i] = mapper.thresholds_[feature[i]][bin_split[i]]
            round_trees.append(Tree(feature, threshold, left, right, value))
        trees.append(round_trees)
        train_loss.append(_log_loss(raw, y_idx))

    return HgbcModel(params, classes, baseline, trees, d, train_loss=train_loss)
