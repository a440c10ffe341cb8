"""Labeled instance table and its 33-column on-disk form.

The file keeps the 32 feature columns plus a label name column. Floats
are written with repr, which round-trips exactly, so save and load are
mutually inverse and a rewrite is byte-identical.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, SchemaError
from ..fileio import atomic_write_text
from . import schema


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple = schema.FEATURE_NAMES
    ecpm: np.ndarray | None = None  # drain rates when the source had them

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise DataError("features must be a matrix")
        if self.features.shape[1] != len(self.feature_names):
            raise DataError("feature matrix width does not match feature names")
        if self.labels.shape[0] != self.features.shape[0]:
            raise DataError("label count does not match instance count")
        n_classes = len(schema.LABEL_NAMES)
        if self.labels.size and not (
            self.labels.min() >= 0 and self.labels.max() < n_classes
        ):
            raise DataError("labels must be class codes 0..2")
        if self.ecpm is not None:
            self.ecpm = np.asarray(self.ecpm, dtype=np.float64)
            if self.ecpm.shape[0] != self.features.shape[0]:
                raise DataError("drain-rate count does not match instance count")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(schema.LABEL_NAMES))


def dataset_to_text(dataset: Dataset) -> str:
    lines = [",".join(dataset.feature_names + ("label",))]
    for row, lab in zip(dataset.features, dataset.labels):
        cells = [repr(float(v)) for v in row]
        cells.append(schema.LABEL_NAMES[lab])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_dataset(dataset: Dataset, path: str) -> None:
    atomic_write_text(path, dataset_to_text(dataset))


def dataset_from_text(text: str) -> Dataset:
    lines = text.splitlines()
    if not lines:
        raise SchemaError("empty file: missing header row")
    names = tuple(lines[0].split(","))
    if len(names) < 2 or names[-1] != "label":
        raise SchemaError("header must end with a label column")
    feature_names = names[:-1]
    width = len(feature_names)
    label_codes = {name: i for i, name in enumerate(schema.LABEL_NAMES)}
    features = []
    labels = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != width + 1:
            raise DataError(f"line {lineno}: expected {width + 1} fields, got {len(cells)}")
        try:
            features.append([float(c) for c in cells[:-1]])
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from exc
        if cells[-1] not in label_codes:
            raise DataError(f"line {lineno}: unknown label {cells[-1]!r}")
        labels.append(label_codes[cells[-1]])
    features = np.array(features) if features else np.empty((0, width))
    return Dataset(features, np.array(labels, dtype=np.int64), feature_names)


def load_dataset(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return dataset_from_text(fh.read())
