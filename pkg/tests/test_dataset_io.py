"""Labeled-dataset files: round trips and rejection."""
import numpy as np
import pytest

from drainboost.data import Dataset, load_dataset, synthesize, write_dataset
from drainboost.data.dataset import dataset_from_text, dataset_to_text
from drainboost.errors import DataError, SchemaError


def sample_dataset(seed=0):
    return synthesize((0.4, 0.35, 0.25), 60, seed=seed).dataset


def test_round_trip_is_exact(tmp_path):
    ds = sample_dataset()
    path = str(tmp_path / "data.csv")
    write_dataset(ds, path)
    back = load_dataset(path)
    assert back.feature_names == ds.feature_names
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)
    assert back.ecpm is None  # drain rates are consumed by labeling, not stored


def test_rewrite_is_byte_identical(tmp_path):
    ds = sample_dataset(1)
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_dataset(ds, str(a))
    write_dataset(load_dataset(str(a)), str(b))
    assert a.read_bytes() == b.read_bytes()


def test_file_layout():
    ds = sample_dataset(2)
    text = dataset_to_text(ds)
    lines = text.splitlines()
    header = lines[0].split(",")
    assert len(header) == 33 and header[-1] == "label"
    assert lines[1].split(",")[-1] in ("safe", "warning", "critical")
    assert len(lines) == ds.n + 1


def test_bad_files_are_rejected():
    ds = sample_dataset(3)
    text = dataset_to_text(ds)
    lines = text.splitlines()
    with pytest.raises(SchemaError):
        dataset_from_text("")
    with pytest.raises(SchemaError):
        dataset_from_text(text.replace(",label", ",tag", 1))
    with pytest.raises(DataError, match="line 3"):
        dataset_from_text("\n".join([lines[0], lines[1], "1,2,3"]))
    with pytest.raises(DataError, match="line 2"):
        dataset_from_text("\n".join([lines[0], lines[1].replace("safe", "sure").replace("warning", "sure").replace("critical", "sure")]))
    broken = lines[1].split(",")
    broken[0] = "not-a-number"
    with pytest.raises(DataError, match="line 2"):
        dataset_from_text("\n".join([lines[0], ",".join(broken)]))


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset(np.zeros((3, 5)), np.zeros(3, dtype=int))  # width vs 32 names
    with pytest.raises(DataError):
        Dataset(np.zeros((3, 2)), np.zeros(2, dtype=int), ("a", "b"))
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 2)), np.array([0, 7]), ("a", "b"))
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 2)), np.zeros(2, dtype=int), ("a", "b"), ecpm=np.zeros(3))
    ds = Dataset(np.zeros((3, 2)), np.array([0, 2, 0]), ("a", "b"))
    assert ds.class_counts.tolist() == [2, 0, 1]
