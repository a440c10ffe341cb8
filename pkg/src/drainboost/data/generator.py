"""Schema-shaped synthetic datasets with a known informative subset.

Rows are drawn class-first. Eight features then receive class-conditional
distributions, each separating the classes only partially so that no
single one suffices, and the other 24 are class-independent noise. The
ground truth being known makes feature-selection recovery measurable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from . import schema
from .dataset import Dataset

INFORMATIVE = (
    "bat_voltage",
    "bat_temperature",
    "cpu_usage",
    "cpu_uptime",
    "net_wifi_signal",
    "s_memory_used",
    "s_screen_brightness",
    "s_screen_on",
)

# drain-rate bands per class, kept clear of the 0.5/1.5 boundaries
_ECPM_BANDS = ((0.05, 0.45), (0.55, 1.45), (1.55, 2.8))


@dataclass
class SynthResult:
    dataset: Dataset
    informative: tuple


def class_counts_for(proportions, n: int) -> np.ndarray:
    """Largest-remainder rounding of proportions to integer counts."""
    p = np.asarray(proportions, dtype=np.float64)
    if p.shape != (len(schema.LABEL_NAMES),):
        raise ConfigError("class proportions must have one entry per class")
    if p.min() < 0 or abs(p.sum() - 1.0) > 1e-9:
        raise ConfigError("class proportions must be nonnegative and sum to 1")
    counts = np.floor(p * n).astype(np.int64)
    remainder = p * n - counts
    # ties go to the lower class index for a deterministic result
    order = np.argsort(-remainder, kind="stable")
    counts[order[: n - counts.sum()]] += 1
    return counts


def _signal_features(rng, y, signal):
    """Class-conditional draws; y is the class code vector."""
    n = y.shape[0]
    shift = y * signal
    cols = {}
    cols["bat_voltage"] = 4.05 - 0.12 * shift + 0.10 * rng.normal(size=n)
    cols["bat_temperature"] = 25.0 + 5.0 * shift + 4.0 * rng.normal(size=n)
    cols["cpu_usage"] = np.clip(20.0 + 28.0 * shift + 22.0 * rng.normal(size=n), 0.0, 100.0)
    cols["cpu_uptime"] = np.clip(
        30e3 + 40e3 * shift + 35e3 * rng.normal(size=n), 0.0, None
    )
    cols["net_wifi_signal"] = -60.0 - 9.0 * shift + 8.0 * rng.normal(size=n)
    cols["s_memory_used"] = np.clip(
        1400.0 + 700.0 * shift + 600.0 * rng.normal(size=n), 0.0, None
    )
    cols["s_screen_brightness"] = np.clip(
        70.0 + 75.0 * shift + 60.0 * rng.normal(size=n), 0.0, 255.0
    )
    cols["s_screen_on"] = (rng.random(n) < 0.25 + 0.30 * shift).astype(np.float64)
    return cols


def _noise_features(rng, n):
    def codes(name):
        return rng.integers(0, len(schema.ENUM_CODES[name]), size=n).astype(np.float64)

    cols = {}
    cols["bat_charger"] = np.zeros(n)  # discharging rows report no charger
    cols["bat_health"] = codes("bat_health")
    cols["cpu_sleep_time"] = np.clip(60e3 + 50e3 * rng.normal(size=n), 0.0, None)
    cols["net_type"] = codes("net_type")
    cols["net_mobile_type"] = codes("net_mobile_type")
    cols["net_mobile_data_status"] = codes("net_mobile_data_status")
    cols["net_mobile_data_activity"] = codes("net_mobile_data_activity")
    cols["net_roaming"] = (rng.random(n) < 0.05).astype(np.float64)
    cols["net_wifi_status"] = codes("net_wifi_status")
    cols["net_wifi_speed"] = rng.choice([6.0, 24.0, 54.0, 150.0, 433.0], size=n)
    cols["s_battery_state"] = np.full(n, float(schema.BATTERY_STATE_CODES["discharging"]))
    cols["s_battery_level"] = rng.uniform(5.0, 100.0, size=n)
    cols["s_memory_free"] = np.clip(1200.0 + 700.0 * rng.normal(size=n), 0.0, None)
    cols["s_network_status"] = (rng.random(n) < 0.9).astype(np.float64)
    for name in ("set_bluetooth", "set_location", "set_power_saver",
                 "set_flashlight", "set_nfc", "set_developer"):
        cols[name] = (rng.random(n) < 0.3).astype(np.float64)
    cols["st_free"] = rng.uniform(2e3, 60e3, size=n)
    cols["st_total"] = rng.choice([16e3, 32e3, 64e3, 128e3], size=n)
    cols["st_memory_active"] = np.clip(900.0 + 500.0 * rng.normal(size=n), 0.0, None)
    cols["st_memory_inactive"] = np.clip(600.0 + 400.0 * rng.normal(size=n), 0.0, None)
    return cols


def synthesize(proportions, n: int, seed: int, signal: float = 1.0) -> SynthResult:
    """Draw n labeled rows with the given class mix, reproducibly by seed."""
    if n < 30:
        raise ConfigError("need at least 30 rows for a usable dataset")
    counts = class_counts_for(proportions, n)
    rng = np.random.default_rng(seed)
    y = np.repeat(np.arange(len(counts)), counts)

    cols = {}
    cols.update(_signal_features(rng, y, signal))
    cols.update(_noise_features(rng, n))
    features = np.column_stack([cols[name] for name in schema.FEATURE_NAMES])

    ecpm = np.empty(n)
    for c, (lo, hi) in enumerate(_ECPM_BANDS):
        mask = y == c
        ecpm[mask] = rng.uniform(lo, hi, size=int(mask.sum()))

    perm = rng.permutation(n)
    dataset = Dataset(features[perm], y[perm], schema.FEATURE_NAMES, ecpm[perm])
    return SynthResult(dataset, INFORMATIVE)
