"""Versioned flat-text model files.

Floats are written in C99 hexadecimal notation so the round trip is
lossless bit for bit; see docs/model_format.md for the exact layout.
"""
from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..fileio import atomic_write_text
from .model import HgbcModel, HgbcParams, Tree

MAGIC = "drainboost-model"
VERSION = 1


def _fhex(v: float) -> str:
    return float(v).hex()


def model_to_text(model: HgbcModel) -> str:
    lines = [f"{MAGIC} {VERSION}"]
    lines.append(f"n_features {model.n_features_}")
    lines.append("classes " + " ".join(str(int(c)) for c in model.classes_))
    lines.append("baseline " + " ".join(_fhex(b) for b in model.baseline_))
    p = model.params
    lines.append(f"learning_rate {_fhex(p.learning_rate)}")
    lines.append(f"min_samples_leaf {p.min_samples_leaf}")
    lines.append(f"max_leaf_nodes {p.max_leaf_nodes}")
    lines.append(f"l2 {_fhex(p.l2)}")
    lines.append(f"max_bins {p.max_bins}")
    lines.append(f"n_trees {p.n_trees}")
    lines.append(f"n_rounds {len(model.trees_)}")
    for r, round_trees in enumerate(model.trees_):
        for c, tree in enumerate(round_trees):
            lines.append(f"tree {r} {c} {tree.n_nodes}")
            for i in range(tree.n_nodes):
                thr = "-" if tree.feature[i] < 0 else _fhex(tree.threshold[i])
                lines.append(
                    f"{i} {tree.feature[i]} {thr} {tree.left[i]} {tree.right[i]} {_fhex(tree.value[i])}"
                )
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_model(model: HgbcModel, path: str) -> None:
    atomic_write_text(path, model_to_text(model))


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise DataError("model file truncated")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def field(self, key: str) -> list[str]:
        line = self.next()
        parts = line.split()
        if not parts or parts[0] != key:
            raise DataError(f"model file line {self.pos}: expected {key!r}")
        return parts[1:]


def model_from_text(text: str) -> HgbcModel:
    r = _Reader(text)
    head = r.next().split()
    if len(head) != 2 or head[0] != MAGIC:
        raise DataError("not a model file: bad magic line")
    if head[1] != str(VERSION):
        raise DataError(f"unsupported model format version {head[1]}")
    try:
        n_features = int(r.field("n_features")[0])
        classes = np.array([int(v) for v in r.field("classes")], dtype=np.int64)
        baseline = np.array([float.fromhex(v) for v in r.field("baseline")])
        params = HgbcParams(
            learning_rate=float.fromhex(r.field("learning_rate")[0]),
            min_samples_leaf=int(r.field("min_samples_leaf")[0]),
            max_leaf_nodes=int(r.field("max_leaf_nodes")[0]),
            l2=float.fromhex(r.field("l2")[0]),
            max_bins=int(r.field("max_bins")[0]),
            n_trees=int(r.field("n_trees")[0]),
        )
        n_rounds = int(r.field("n_rounds")[0])
        trees: list[list[Tree]] = []
        for round_i in range(n_rounds):
            round_trees: list[Tree] = []
            for class_i in range(classes.shape[0]):
                tag = r.field("tree")
                if int(tag[0]) != round_i or int(tag[1]) != class_i:
                    raise DataError(f"model file line {r.pos}: tree out of order")
                n_nodes = int(tag[2])
                feature = np.empty(n_nodes, dtype=np.int64)
                threshold = np.full(n_nodes, np.nan)
                left = np.empty(n_nodes, dtype=np.int64)
                right = np.empty(n_nodes, dtype=np.int64)
                value = np.empty(n_nodes)
                for i in range(n_nodes):
                    parts = r.next().split()
                    if len(parts) != 6 or int(parts[0]) != i:
                        raise DataError(f"model file line {r.pos}: bad node record")
                    feature[i] = int(parts[1])
                    if parts[2] != "-":
                        threshold[i] = float.fromhex(parts[2])
                    left[i] = int(parts[3])
                    right[i] = int(parts[4])
                    value[i] = float.fromhex(parts[5])
                round_trees.append(Tree(feature, threshold, left, right, value))
            trees.append(round_trees)
        if r.next() != "end":
            raise DataError("model file missing end marker")
    except DataError:
        raise
    except (ValueError, IndexError) as exc:
        raise DataError(f"model file line {r.pos}: {exc}") from exc
    return HgbcModel(params, classes, baseline, trees, n_features)


def load_model(path: str) -> HgbcModel:
    with open(path, "r", encoding="ascii") as fh:
        return model_from_text(fh.read())
