"""Batch experiment driver tying the pipeline together.

Five subcommands cover the workflow end to end: ``preprocess`` turns a
raw telemetry export into a labeled dataset, ``synth`` writes a
synthetic benchmark, ``run`` evaluates one optimizer-wrapped model under
outer cross-validation, ``compare`` builds the significance matrix over
several run outputs, and ``filter-fs`` scores features with classical
filter statistics.

Configuration resolves in three layers: built-in defaults, then a
``--config`` key=value file, then explicit flags. Every command is
deterministic given its configuration, result files are written
atomically, and no output embeds a path or a timestamp, so repeated runs
produce byte-identical files.

Exit codes: 0 on success, 2 for configuration or input problems, 1 for
anything unexpected. Error lines go to stderr prefixed ``error:``.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import de
from .data import (
    Dataset,
    PairingReport,
    build_dataset,
    compute_ecpm,
    ingest_csv,
    load_dataset,
    report_text,
    synthesize,
    write_dataset,
)
from .data.dataset import dataset_to_text
from .data.schema import LABEL_NAMES
from .de import STRATEGY_PBEST, DeParams
from .errors import ConfigError, DataError
from .fileio import atomic_write_text
from .filters import FILTER_METHODS, filter_scores, select_top_k
from .hgbc import HgbcParams, fit
from .optimizers import OPTIMIZER_NAMES
from .space import RunConfig
from .stats import (
    cv_table_csv,
    cv_table_text,
    score,
    stratified_kfold,
    summarize_folds,
    wtl_matrix,
    wtl_table_csv,
    wtl_table_text,
)
from .tuning import VARIANTS, optimize

_VARIANT_FULL = {"fs": "fs_only", "tune": "tune_only", "combined": "combined"}


@dataclass
class ExperimentConfig:
    """Resolved settings shared by all subcommands."""

    data: str | None = None
    out: str = "results"
    variant: str = "combined"
    optimizer: str = "lshade"
    population_size: int = 50
    max_nfe: int = 800
    inner_k: int = 5
    outer_k: int = 10
    seeds: tuple = (0,)
    n_trees: int = 100
    single_search: bool = False
    alpha: float = 0.05
    synth_n: int = 300
    synth_seed: int = 0
    synth_signal: float = 1.0
    synth_proportions: tuple | None = None
    de_f: float | None = None
    de_cr: float | None = None
    memory_size: int | None = None
    pop_min: int | None = None
    method: str = "chi_square"
    k: int | None = None


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_variant(text: str) -> str:
    if text in _VARIANT_FULL:
        return _VARIANT_FULL[text]
    if text in VARIANTS:
        return text
    raise ValueError(f"unknown variant {text!r} (valid: fs, tune, combined)")


def _parse_seeds(text: str) -> tuple:
    return tuple(int(v) for v in text.replace(",", " ").split())


def _parse_proportions(text: str) -> tuple:
    return tuple(float(v) for v in text.split(","))


_KEY_PARSERS = {
    "data": str,
    "out": str,
    "variant": _parse_variant,
    "optimizer": str,
    "population_size": int,
    "max_nfe": int,
    "inner_k": int,
    "outer_k": int,
    "seeds": _parse_seeds,
    "n_trees": int,
    "single_search": _parse_bool,
    "alpha": float,
    "synth_n": int,
    "synth_seed": int,
    "synth_signal": float,
    "synth_proportions": _parse_proportions,
    "de_f": float,
    "de_cr": float,
    "memory_size": int,
    "pop_min": int,
    "method": str,
    "k": int,
}


def read_config(path: str) -> dict:
    """Parse a flat key=value file; blank lines and # comments are skipped."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key = key.strip()
        if key not in _KEY_PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _KEY_PARSERS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def resolve_config(args) -> ExperimentConfig:
    """Defaults, overridden by the config file, overridden by flags."""
    values = {}
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for attr, key in (
        ("data", "data"),
        ("out", "out"),
        ("optimizer", "optimizer"),
        ("method", "method"),
        ("k", "k"),
        ("n", "synth_n"),
        ("signal", "synth_signal"),
        ("alpha", "alpha"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
    variant = getattr(args, "variant", None)
    if variant is not None:
        values["variant"] = _VARIANT_FULL[variant]
    proportions = getattr(args, "proportions", None)
    if proportions is not None:
        values["synth_proportions"] = _parse_proportions(proportions)
    if getattr(args, "single_search", False):
        values["single_search"] = True
    seeds = getattr(args, "seed", None)
    if seeds:
        values["seeds"] = tuple(seeds)
    cfg = replace(ExperimentConfig(), **values)
    if not cfg.seeds:
        raise ConfigError("seeds must be nonempty")
    if any(s < 0 for s in cfg.seeds):
        raise ConfigError("seeds must be nonnegative")
    if cfg.variant not in VARIANTS:
        raise ConfigError(f"unknown variant {cfg.variant!r} (valid: fs, tune, combined)")
    if cfg.outer_k < 2 or cfg.inner_k < 2:
        raise ConfigError("outer_k and inner_k must be at least 2")
    if not 0.0 < cfg.alpha < 1.0:
        raise ConfigError("alpha must lie in (0, 1)")
    return cfg


def resolve_dataset(cfg: ExperimentConfig) -> Dataset:
    if cfg.data:
        return load_dataset(cfg.data)
    proportions = cfg.synth_proportions
    if proportions is None:
        proportions = (1 / 3, 1 / 3, 1 / 3)
    return synthesize(proportions, cfg.synth_n, cfg.synth_seed,
                      signal=cfg.synth_signal).dataset


def dataset_sha256(dataset: Dataset) -> str:
    return hashlib.sha256(dataset_to_text(dataset).encode("utf-8")).hexdigest()


def optimizer_overrides(cfg: ExperimentConfig) -> dict:
    """Keyword overrides for the selected optimizer's control parameters."""
    if all(v is None for v in (cfg.de_f, cfg.de_cr, cfg.memory_size, cfg.pop_min)):
        return {}
    if cfg.optimizer not in de.VARIANTS:
        raise ConfigError("de_f/de_cr/memory_size/pop_min only apply to the de family")
    kwargs = {}
    if cfg.de_f is not None or cfg.de_cr is not None:
        default = DeParams() if cfg.optimizer == "de" else DeParams(strategy=STRATEGY_PBEST)
        kwargs["params"] = DeParams(
            f=cfg.de_f if cfg.de_f is not None else default.f,
            cr=cfg.de_cr if cfg.de_cr is not None else default.cr,
            strategy=default.strategy,
            pbest_fraction=default.pbest_fraction,
        )
    if cfg.memory_size is not None:
        kwargs["memory_size"] = cfg.memory_size
    if cfg.pop_min is not None:
        kwargs["pop_min"] = cfg.pop_min
    return kwargs


def _ensure_out(cfg: ExperimentConfig) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    return cfg.out


def _fold_seed(seed: int, fold: int) -> int:
    # distinct search seed per outer fold; 1009 > any sane outer_k, so
    # different (seed, fold) pairs never collide
    return seed * 1009 + fold


def _cv_scores(dataset: Dataset, selected, params: HgbcParams, folds) -> list:
    """(accuracy, macro_f) per fold for a fixed feature selection."""
    pairs = []
    for f in range(folds.k):
        train, test = folds.split(f)
        model = fit(dataset.features[train][:, selected], dataset.labels[train], params)
        pred = model.predict(dataset.features[test][:, selected])
        pairs.append(score(dataset.labels[test], pred))
    return pairs


def cmd_preprocess(args) -> int:
    cfg = resolve_config(args)
    rejects: list = []
    records = ingest_csv(args.input, error_sink=rejects)
    report = PairingReport()
    pairs = compute_ecpm(records, report)
    dataset = build_dataset(pairs)
    out = _ensure_out(cfg)
    labeled_path = os.path.join(out, "labeled.csv")
    write_dataset(dataset, labeled_path)
    lines = [report_text(report).rstrip("\n")]
    if rejects:
        lines.append("")
        lines.extend(f"rejected {msg}" for msg in rejects)
    atomic_write_text(os.path.join(out, "skip_report.txt"), "\n".join(lines) + "\n")
    print(f"rows {dataset.n}")
    for name, count in zip(LABEL_NAMES, dataset.class_counts):
        print(f"{name} {count}")
    print(f"wrote {labeled_path}")
    return 0


def cmd_synth(args) -> int:
    cfg = resolve_config(args)
    if getattr(args, "seed", None):
        cfg = replace(cfg, synth_seed=args.seed[0])
    proportions = cfg.synth_proportions
    if proportions is None:
        proportions = (1 / 3, 1 / 3, 1 / 3)
    result = synthesize(proportions, cfg.synth_n, cfg.synth_seed,
                        signal=cfg.synth_signal)
    out = _ensure_out(cfg)
    path = os.path.join(out, "synthetic.csv")
    write_dataset(result.dataset, path)
    for name, count in zip(LABEL_NAMES, result.dataset.class_counts):
        print(f"{name} {count}")
    print(f"informative {','.join(result.informative)}")
    print(f"wrote {path}")
    return 0


def cmd_run(args) -> int:
    cfg = resolve_config(args)
    dataset = resolve_dataset(cfg)
    algorithm = f"{cfg.optimizer}-{cfg.variant}"
    base = HgbcParams(n_trees=cfg.n_trees)
    overrides = optimizer_overrides(cfg)
    rows = []
    for s in cfg.seeds:
        outer = stratified_kfold(dataset.labels, cfg.outer_k, s)
        shared = None
        if cfg.single_search:
            # one search over the full data; the outer CV then only
            # re-scores the found configuration
            shared = optimize(cfg.variant, cfg.optimizer, dataset,
                              RunConfig(cfg.population_size, cfg.max_nfe, s),
                              inner_k=cfg.inner_k, base_params=base,
                              optimizer_kwargs=overrides)
        for f in range(cfg.outer_k):
            train, test = outer.split(f)
            if shared is not None:
                found = shared
            else:
                train_ds = Dataset(dataset.features[train], dataset.labels[train],
                                   dataset.feature_names)
                found = optimize(cfg.variant, cfg.optimizer, train_ds,
                                 RunConfig(cfg.population_size, cfg.max_nfe,
                                           _fold_seed(s, f)),
                                 inner_k=cfg.inner_k, base_params=base,
                                 optimizer_kwargs=overrides)
            model = fit(dataset.features[train][:, found.selected],
                        dataset.labels[train], found.params)
            pred = model.predict(dataset.features[test][:, found.selected])
            acc, macro_f = score(dataset.labels[test], pred)
            rows.append((s, f, acc, macro_f))
    out = _ensure_out(cfg)
    atomic_write_text(
        os.path.join(out, "scores.csv"),
        "seed,fold,accuracy,macro_f\n"
        + "".join(f"{s},{f},{acc!r},{mf!r}\n" for s, f, acc, mf in rows),
    )
    for s in cfg.seeds:
        atomic_write_text(
            os.path.join(out, f"seed_{s}.csv"),
            "fold,accuracy,macro_f\n"
            + "".join(f"{f},{acc!r},{mf!r}\n" for s2, f, acc, mf in rows if s2 == s),
        )
    provenance = [
        f"algorithm={algorithm}",
        f"dataset_sha256={dataset_sha256(dataset)}",
        f"n_rows={dataset.n}",
        f"outer_k={cfg.outer_k}",
        "seeds=" + ",".join(str(v) for v in cfg.seeds),
        f"inner_k={cfg.inner_k}",
        f"population_size={cfg.population_size}",
        f"max_nfe={cfg.max_nfe}",
        f"variant={cfg.variant}",
        f"optimizer={cfg.optimizer}",
        f"single_search={str(cfg.single_search).lower()}",
        f"n_trees={cfg.n_trees}",
    ]
    atomic_write_text(os.path.join(out, "provenance.txt"), "\n".join(provenance) + "\n")
    summary = {algorithm: summarize_folds([(acc, mf) for _, _, acc, mf in rows])}
    atomic_write_text(os.path.join(out, "summary.csv"), cv_table_csv(summary))
    text = cv_table_text(summary)
    atomic_write_text(os.path.join(out, "summary.txt"), text)
    print(text, end="")
    print(f"wrote {out}")
    return 0


def _read_provenance(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"not a run output directory: {exc}") from None
    values = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            values[key] = value
    return values


def _read_fold_accuracies(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"not a run output directory: {exc}") from None
    if not lines or lines[0] != "seed,fold,accuracy,macro_f":
        raise DataError(f"{path}: unexpected score table header")
    values = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 4:
            raise DataError(f"{path}: malformed score row {line!r}")
        try:
            values.append(float(parts[2]))
        except ValueError:
            raise DataError(f"{path}: malformed score row {line!r}") from None
    return np.array(values)


def cmd_compare(args) -> int:
    cfg = resolve_config(args)
    if len(args.runs) < 2:
        raise ConfigError("compare needs at least two run directories")
    folds = {}
    reference = None
    for run_dir in args.runs:
        provenance = _read_provenance(os.path.join(run_dir, "provenance.txt"))
        accuracies = _read_fold_accuracies(os.path.join(run_dir, "scores.csv"))
        if reference is None:
            reference = (run_dir, provenance)
        else:
            for key in ("dataset_sha256", "n_rows", "outer_k", "seeds"):
                if provenance.get(key) != reference[1].get(key):
                    raise ConfigError(
                        f"fold mismatch: {run_dir} and {reference[0]} differ on {key}"
                    )
        name = provenance.get("algorithm") or os.path.basename(os.path.normpath(run_dir))
        stem, suffix = name, 2
        while name in folds:
            name = f"{stem}-{suffix}"
            suffix += 1
        folds[name] = accuracies
    matrix = wtl_matrix(folds, alpha=cfg.alpha)
    out = _ensure_out(cfg)
    atomic_write_text(os.path.join(out, "wtl.csv"), wtl_table_csv(matrix))
    text = wtl_table_text(matrix)
    atomic_write_text(os.path.join(out, "wtl.txt"), text)
    print(text, end="")
    print(f"wrote {out}")
    return 0


def cmd_filter_fs(args) -> int:
    cfg = resolve_config(args)
    dataset = resolve_dataset(cfg)
    scores = filter_scores(cfg.method, dataset)
    out = _ensure_out(cfg)
    order = np.argsort(-scores, kind="stable")
    ranking = ["rank,feature,score"]
    ranking += [f"{r + 1},{dataset.feature_names[j]},{float(scores[j])!r}"
                for r, j in enumerate(order)]
    atomic_write_text(os.path.join(out, "ranking.csv"), "\n".join(ranking) + "\n")
    base = HgbcParams(n_trees=cfg.n_trees)
    folds = stratified_kfold(dataset.labels, cfg.outer_k, cfg.seeds[0])
    if args.sweep:
        rows = ["k,accuracy_mean,accuracy_std,macro_f_mean,macro_f_std"]
        for k in range(1, dataset.features.shape[1] + 1):
            summary = summarize_folds(
                _cv_scores(dataset, select_top_k(scores, k), base, folds))
            rows.append(f"{k},{summary.accuracy_mean!r},{summary.accuracy_std!r},"
                        f"{summary.macro_f_mean!r},{summary.macro_f_std!r}")
        sweep_path = os.path.join(out, "sweep.csv")
        atomic_write_text(sweep_path, "\n".join(rows) + "\n")
        print(f"wrote {sweep_path}")
        return 0
    k = cfg.k if cfg.k is not None else dataset.features.shape[1]
    selected = select_top_k(scores, k)
    pairs = _cv_scores(dataset, selected, base, folds)
    summary = summarize_folds(pairs)
    lines = [
        f"method {cfg.method}",
        f"k {k}",
        f"seed {cfg.seeds[0]}",
        f"outer_k {cfg.outer_k}",
        "selected " + ",".join(dataset.feature_names[j] for j in selected),
        "fold_accuracy " + ",".join(repr(acc) for acc, _ in pairs),
        "fold_macro_f " + ",".join(repr(mf) for _, mf in pairs),
        f"accuracy_mean {summary.accuracy_mean!r}",
        f"accuracy_std {summary.accuracy_std!r}",
        f"macro_f_mean {summary.macro_f_mean!r}",
        f"macro_f_std {summary.macro_f_std!r}",
    ]
    text = "\n".join(lines) + "\n"
    atomic_write_text(os.path.join(out, "selection.txt"), text)
    print(text, end="")
    return 0


class _Parser(argparse.ArgumentParser):
    """Argparse that emits plain machine-readable error lines."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drainboost", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p):
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument("--out", help="output directory (default results)")
        p.add_argument("--seed", type=int, action="append", metavar="N",
                       help="seed, repeatable")
        return p

    p = common(sub.add_parser("preprocess", help="label a raw telemetry csv"))
    p.add_argument("input", help="raw 36-column sample csv")
    p.set_defaults(func=cmd_preprocess)

    p = common(sub.add_parser("synth", help="write a synthetic benchmark dataset"))
    p.add_argument("--n", type=int, help="number of rows")
    p.add_argument("--signal", type=float, help="strength of the informative features")
    p.add_argument("--proportions", metavar="A,B,C", help="class mix summing to 1")
    p.set_defaults(func=cmd_synth)

    p = common(sub.add_parser("run", help="outer-CV evaluation of one configuration"))
    p.add_argument("--data", help="labeled dataset csv (defaults to synthetic)")
    p.add_argument("--optimizer", help=f"one of: {', '.join(OPTIMIZER_NAMES)}")
    p.add_argument("--variant", choices=sorted(_VARIANT_FULL))
    p.add_argument("--single-search", action="store_true",
                   help="search once on the full data instead of per training split")
    p.set_defaults(func=cmd_run)

    p = common(sub.add_parser("compare", help="win/tie/loss matrix over run outputs"))
    p.add_argument("runs", nargs="+", help="run output directories")
    p.add_argument("--alpha", type=float, help="significance level (default 0.05)")
    p.set_defaults(func=cmd_compare)

    p = common(sub.add_parser("filter-fs", help="filter-statistic feature selection"))
    p.add_argument("--data", help="labeled dataset csv (defaults to synthetic)")
    p.add_argument("--method", choices=FILTER_METHODS)
    p.add_argument("--k", type=int, help="number of features to keep")
    p.add_argument("--sweep", action="store_true",
                   help="evaluate every k from 1 to the feature count")
    p.set_defaults(func=cmd_filter_fs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: internal: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
