"""Synthetic dataset contract: counts, consistency, recoverable signal."""
import numpy as np
import pytest

from drainboost.data import schema, synthesize
from drainboost.data.generator import INFORMATIVE, class_counts_for
from drainboost.data.pipeline import label
from drainboost.errors import ConfigError
from drainboost.hgbc import HgbcParams, fit


def test_class_counts_largest_remainder():
    assert class_counts_for((1 / 3, 1 / 3, 1 / 3), 100).tolist() == [34, 33, 33]
    assert class_counts_for((0.5, 0.3, 0.2), 7).tolist() == [4, 2, 1]
    assert class_counts_for((1.0, 0.0, 0.0), 50).tolist() == [50, 0, 0]
    for n in (30, 31, 97):
        assert class_counts_for((0.21, 0.44, 0.35), n).sum() == n


def test_all_safe_dataset():
    ds = synthesize((1.0, 0.0, 0.0), 40, seed=0).dataset
    assert ds.labels.tolist() == [0] * 40
    assert ds.class_counts.tolist() == [40, 0, 0]


def test_counts_match_proportions():
    ds = synthesize((0.5, 0.3, 0.2), 300, seed=1).dataset
    assert ds.class_counts.tolist() == [150, 90, 60]


def test_determinism_by_seed():
    a = synthesize((0.4, 0.3, 0.3), 120, seed=7).dataset
    b = synthesize((0.4, 0.3, 0.3), 120, seed=7).dataset
    c = synthesize((0.4, 0.3, 0.3), 120, seed=8).dataset
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.ecpm, b.ecpm)
    assert not np.array_equal(a.features, c.features)


def test_labels_agree_with_drain_rates():
    ds = synthesize((0.34, 0.33, 0.33), 200, seed=3).dataset
    assert ds.ecpm is not None
    for rate, lab in zip(ds.ecpm, ds.labels):
        assert label(rate) == lab


def test_informative_metadata():
    res = synthesize((0.34, 0.33, 0.33), 60, seed=4)
    assert res.informative == INFORMATIVE
    assert len(INFORMATIVE) == 8
    assert set(INFORMATIVE) <= set(schema.FEATURE_NAMES)


def test_enum_features_hold_valid_codes():
    ds = synthesize((0.34, 0.33, 0.33), 150, seed=5).dataset
    for name, table in schema.ENUM_CODES.items():
        if name not in schema.FEATURE_NAMES:
            continue
        col = ds.features[:, schema.FEATURE_NAMES.index(name)]
        assert np.array_equal(col, np.round(col))
        assert col.min() >= 0 and col.max() < len(table)


def test_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        synthesize((0.34, 0.33, 0.33), 29, seed=0)
    with pytest.raises(ConfigError):
        synthesize((0.7, 0.2, 0.2), 50, seed=0)
    with pytest.raises(ConfigError):
        synthesize((0.5, 0.5), 50, seed=0)
    with pytest.raises(ConfigError):
        synthesize((1.2, -0.2, 0.0), 50, seed=0)


def test_signal_lives_in_the_informative_features():
    res = synthesize((0.34, 0.33, 0.33), 300, seed=1)
    ds = res.dataset
    info = [schema.FEATURE_NAMES.index(n) for n in res.informative]
    noise = [i for i in range(32) if i not in info]
    train, test = np.arange(240), np.arange(240, 300)
    params = HgbcParams(n_trees=20)

    m = fit(ds.features[train][:, info], ds.labels[train], params)
    acc_info = (m.predict(ds.features[test][:, info]) == ds.labels[test]).mean()
    m = fit(ds.features[train][:, noise], ds.labels[train], params)
    acc_noise = (m.predict(ds.features[test][:, noise]) == ds.labels[test]).mean()
    assert acc_info >= 0.7
    assert acc_noise <= 0.55  # nothing to learn from, near chance
