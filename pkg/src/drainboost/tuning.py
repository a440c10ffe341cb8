"""Joint feature-selection and hyper-parameter search.

A candidate genome is a flat real vector. The first block is one cell
per feature, selected when strictly above 0.5 (an empty selection is
repaired to the single largest cell). The second block holds the five
tuned model parameters in their natural ranges. The fs_only and
tune_only variants carry just one of the blocks and pin the other.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .hgbc import HgbcParams, fit
from .hgbc.model import (
    L2_RANGE,
    LEARNING_RATE_RANGE,
    MAX_BINS_RANGE,
    MAX_LEAF_NODES_RANGE,
    MIN_SAMPLES_LEAF_RANGE,
)
from .optimizers import get_optimizer
from .space import RunConfig, SearchSpace, round_half_away
from .stats import FoldAssignment, stratified_kfold

VARIANTS = ("fs_only", "tune_only", "combined")

PARAM_CELLS = ("learning_rate", "min_samples_leaf", "max_leaf_nodes", "l2", "max_bins")
_PARAM_LOWER = np.array(
    [LEARNING_RATE_RANGE[0], MIN_SAMPLES_LEAF_RANGE[0], MAX_LEAF_NODES_RANGE[0],
     L2_RANGE[0], MAX_BINS_RANGE[0]],
    dtype=np.float64,
)
_PARAM_UPPER = np.array(
    [LEARNING_RATE_RANGE[1], MIN_SAMPLES_LEAF_RANGE[1], MAX_LEAF_NODES_RANGE[1],
     L2_RANGE[1], MAX_BINS_RANGE[1]],
    dtype=np.float64,
)
_PARAM_INTEGER = np.array([False, True, True, False, True])


def genome_space(variant: str, n_features: int = 32) -> SearchSpace:
    """The search box for one variant; mask cells live in [0, 1]."""
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}")
    blocks = []
    if variant in ("fs_only", "combined"):
        blocks.append(
            (np.zeros(n_features), np.ones(n_features), np.zeros(n_features, dtype=bool))
        )
    if variant in ("tune_only", "combined"):
        blocks.append((_PARAM_LOWER, _PARAM_UPPER, _PARAM_INTEGER))
    lower, upper, integer = (np.concatenate(parts) for parts in zip(*blocks))
    return SearchSpace(lower, upper, integer)


def decode_mask(cells) -> np.ndarray:
    """Indices of cells strictly above 0.5; never empty thanks to repair."""
    cells = np.asarray(cells, dtype=np.float64)
    selected = np.flatnonzero(cells > 0.5)
    if selected.size == 0:
        selected = np.array([int(np.argmax(cells))], dtype=np.int64)
    return selected


def decode_params(cells, base: HgbcParams | None = None) -> HgbcParams:
    """Model parameters from the five-cell block; integer cells rounded."""
    cells = np.asarray(cells, dtype=np.float64)
    if base is None:
        base = HgbcParams()
    return HgbcParams(
        learning_rate=float(cells[0]),
        min_samples_leaf=int(round_half_away(cells[1])),
        max_leaf_nodes=int(round_half_away(cells[2])),
        l2=float(cells[3]),
        max_bins=int(round_half_away(cells[4])),
        n_trees=base.n_trees,
    )


class Objective:
    """Pooled inner-CV classification error of a decoded genome.

    The fold assignment is drawn once from the seed, so every candidate
    in a run faces identical folds. Distinct genomes decoding to the same
    (selection, parameters) share one evaluation through the cache.
    """

    def __init__(self, dataset, variant: str, inner_k: int = 5, seed: int = 0,
                 base_params: HgbcParams | None = None, cache: bool = True,
                 folds: FoldAssignment | None = None):
        if variant not in VARIANTS:
            raise ConfigError(f"unknown variant {variant!r}")
        self.dataset = dataset
        self.variant = variant
        self.base_params = base_params if base_params is not None else HgbcParams()
        self.folds = folds if folds is not None else stratified_kfold(
            dataset.labels, inner_k, seed
        )
        self.cache_enabled = cache
        self._cache = {}
        self.n_evaluated = 0

    def decode(self, genome):
        genome = np.asarray(genome, dtype=np.float64)
        d = self.dataset.features.shape[1]
        if self.variant == "fs_only":
            return decode_mask(genome[:d]), self.base_params
        if self.variant == "tune_only":
            return np.arange(d), decode_params(genome, self.base_params)
        return decode_mask(genome[:d]), decode_params(genome[d:], self.base_params)

    def _key(self, selected, params):
        return (tuple(selected.tolist()),
                params.learning_rate, params.min_samples_leaf, params.max_leaf_nodes,
                params.l2, params.max_bins, params.n_trees)

    def _fold_wrong(self, selected, params):
        x = self.dataset.features[:, selected]
        y = self.dataset.labels
        wrong = np.empty(self.folds.k, dtype=np.int64)
        sizes = np.empty(self.folds.k, dtype=np.int64)
        for f in range(self.folds.k):
            train, test = self.folds.split(f)
            model = fit(x[train], y[train], params)
            wrong[f] = int(np.count_nonzero(model.predict(x[test]) != y[test]))
            sizes[f] = test.shape[0]
        return wrong, sizes

    def __call__(self, genome) -> float:
        selected, params = self.decode(genome)
        key = self._key(selected, params)
        if self.cache_enabled and key in self._cache:
            return self._cache[key]
        wrong, _ = self._fold_wrong(selected, params)
        self.n_evaluated += 1
        value = 100.0 * float(wrong.sum()) / self.dataset.features.shape[0]
        if self.cache_enabled:
            self._cache[key] = value
        return value

    def fold_errors(self, genome) -> np.ndarray:
        """Per-fold error percents for one genome, bypassing the cache."""
        selected, params = self.decode(genome)
        wrong, sizes = self._fold_wrong(selected, params)
        return 100.0 * wrong / sizes


def objective(genome, dataset, inner_k: int = 5, seed: int = 0, *,
              variant: str = "combined", base_params: HgbcParams | None = None) -> float:
    """One-off evaluation; optimize() builds a cached Objective instead."""
    return Objective(dataset, variant, inner_k, seed, base_params, cache=False)(genome)


@dataclass
class FsResult:
    variant: str
    optimizer: str
    selected: np.ndarray
    selected_names: tuple
    params: HgbcParams
    objective: float
    fold_errors: np.ndarray
    nfe_used: int


def optimize(variant: str, optimizer_name: str, dataset, config: RunConfig, *,
             inner_k: int = 5, base_params: HgbcParams | None = None,
             cache: bool = True, optimizer_kwargs: dict | None = None) -> FsResult:
    """Search the variant's genome space and decode the winner."""
    space = genome_space(variant, dataset.features.shape[1])
    obj = Objective(dataset, variant, inner_k=inner_k, seed=config.seed,
                    base_params=base_params, cache=cache)
    result = get_optimizer(optimizer_name)(obj, space, config, **(optimizer_kwargs or {}))
    selected, params = obj.decode(result.best.position)
    names = tuple(dataset.feature_names[i] for i in selected)
    return FsResult(
        variant=variant,
        optimizer=optimizer_name,
        selected=selected,
        selected_names=names,
        params=params,
        objective=float(result.best.fitness),
        fold_errors=obj.fold_errors(result.best.position),
        nfe_used=result.nfe_used,
    )


def fs_report_text(result: FsResult) -> str:
    p = result.params
    lines = [
        f"variant {result.variant}",
        f"optimizer {result.optimizer}",
        f"n_selected {result.selected.shape[0]}",
        "selected " + ",".join(result.selected_names),
        f"learning_rate {p.learning_rate!r}",
        f"min_samples_leaf {p.min_samples_leaf}",
        f"max_leaf_nodes {p.max_leaf_nodes}",
        f"l2 {p.l2!r}",
        f"max_bins {p.max_bins}",
        f"n_trees {p.n_trees}",
        f"objective {result.objective!r}",
        "fold_errors " + ",".join(repr(float(v)) for v in result.fold_errors),
        f"nfe_used {result.nfe_used}",
    ]
    return "\n".join(lines) + "\n"
