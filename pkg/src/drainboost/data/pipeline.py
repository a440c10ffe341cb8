"""Raw sample ingestion, drain-rate pairing and labeling.

The drain rate of a pair of consecutive discharging snapshots is the
level drop divided by the elapsed time, scaled to percent per minute.
Pairing walks the raw per-device stream: a charging snapshot in between
invalidates the pair, a snapshot with missing fields merely disappears.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import SchemaError
from . import schema
from .dataset import Dataset

log = logging.getLogger(__name__)

N_FEATURES = len(schema.FEATURE_NAMES)
_CHARGING = schema.BATTERY_STATE_CODES["charging"]


@dataclass
class SampleRecord:
    device_id: str
    timestamp: float
    battery_state: int  # code from the schema table, -1 when the cell was empty
    battery_level: float
    features: np.ndarray  # 32 floats in schema order, nan marks a missing cell

    def is_charging(self) -> bool:
        return self.battery_state == _CHARGING

    def has_missing(self) -> bool:
        return (
            self.device_id == ""
            or not np.isfinite(self.timestamp)
            or self.battery_state < 0
            or np.isnan(self.battery_level)
            or bool(np.isnan(self.features).any())
        )


def _parse_cell(name: str, cell: str) -> float:
    cell = cell.strip()
    if cell == "":
        return float("nan")
    table = schema.ENUM_CODES.get(name)
    if table is not None:
        if cell not in table:
            raise ValueError(f"{name}: unknown value {cell!r}")
        return float(table[cell])
    try:
        return float(cell)
    except ValueError:
        raise ValueError(f"{name}: could not parse {cell!r}") from None


def ingest_csv(path: str, error_sink: list | None = None) -> list[SampleRecord]:
    """Read a raw sample table into typed records, in file order.

    A wrong header is fatal. Anything wrong with an individual row only
    rejects that row: the message, carrying the line number, is appended
    to error_sink when one is given and logged as a warning otherwise.
    Empty cells are not errors, they become missing values.
    """

    def report(msg):
        if error_sink is not None:
            error_sink.append(msg)
        else:
            log.warning("%s", msg)

    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file: missing header row") from None
        if tuple(h.strip() for h in header) != schema.COLUMNS:
            raise SchemaError(
                f"header does not match the {len(schema.COLUMNS)}-column sample schema"
            )
        for row in reader:
            line = reader.line_num
            if len(row) != len(schema.COLUMNS):
                report(f"line {line}: expected {len(schema.COLUMNS)} fields, got {len(row)}")
                continue
            try:
                timestamp = _parse_cell("timestamp", row[1])
                state = _parse_cell("battery_state", row[2])
                level = _parse_cell("battery_level", row[3])
                features = np.array(
                    [_parse_cell(n, c) for n, c in zip(schema.FEATURE_NAMES, row[4:])]
                )
            except ValueError as exc:
                report(f"line {line}: {exc}")
                continue
            if np.isinf(timestamp):
                report(f"line {line}: timestamp must be finite")
                continue
            if not np.isnan(level) and not 0.0 <= level <= 100.0:
                report(f"line {line}: battery_level {level} outside [0, 100]")
                continue
            records.append(
                SampleRecord(
                    device_id=row[0].strip(),
                    timestamp=timestamp,
                    battery_state=-1 if np.isnan(state) else int(state),
                    battery_level=level,
                    features=features,
                )
            )
    return records


def eliminate(records: list[SampleRecord]) -> list[SampleRecord]:
    """Drop charging records and records with any missing field, keep order."""
    return [r for r in records if not r.is_charging() and not r.has_missing()]


@dataclass
class PairingReport:
    charging_eliminated: int = 0
    missing_eliminated: int = 0
    nonpositive_dt_skipped: int = 0
    level_rise_skipped: int = 0
    pairs_emitted: int = 0


def compute_ecpm(records, report: PairingReport | None = None):
    """Turn per-device snapshot streams into (record, drain rate) pairs.

    records must be grouped by device and time-ascending, and still raw:
    the charging snapshots are what tells us a pair is invalid. The
    earlier record of each pair carries the features, its state being the
    one whose consumption the pair measures. Pairs with a non-positive
    time step or a rising level are silently skipped and counted.
    """
    if report is None:
        report = PairingReport()
    pairs = []
    prev = None
    prev_device = None
    for rec in records:
        if rec.device_id != prev_device:
            prev = None
            prev_device = rec.device_id
        if rec.is_charging():
            report.charging_eliminated += 1
            prev = None  # the chain is broken, never pair across a charge
            continue
        if rec.has_missing():
            report.missing_eliminated += 1
            continue
        if prev is not None:
            dt = rec.timestamp - prev.timestamp
            drop = prev.battery_level - rec.battery_level
            if dt <= 0:
                report.nonpositive_dt_skipped += 1
            elif drop < 0:
                report.level_rise_skipped += 1
            else:
                pairs.append((prev, drop / dt * 60.0))
                report.pairs_emitted += 1
        prev = rec
    return pairs


def label(ecpm: float, low: float = schema.SAFE_BELOW, high: float = schema.CRITICAL_ABOVE) -> int:
    """Class code for one drain rate; both boundary values fall to warning."""
    if ecpm < 0:
        raise ValueError(f"negative drain rate {ecpm}")
    if ecpm < low:
        return 0
    if ecpm > high:
        return 2
    return 1


def build_dataset(pairs, low: float = schema.SAFE_BELOW, high: float = schema.CRITICAL_ABOVE) -> Dataset:
    """Label computed pairs and stack them into a dataset."""
    if pairs:
        features = np.array([rec.features for rec, _ in pairs])
        ecpm = np.array([v for _, v in pairs])
    else:
        features = np.empty((0, N_FEATURES))
        ecpm = np.empty(0)
    labels = np.array([label(v, low, high) for v in ecpm], dtype=np.int64)
    return Dataset(features, labels, schema.FEATURE_NAMES, ecpm)


def report_text(report: PairingReport) -> str:
    rows = [
        ("charging records eliminated", report.charging_eliminated),
        ("missing-value records eliminated", report.missing_eliminated),
        ("pairs skipped, non-positive time step", report.nonpositive_dt_skipped),
        ("pairs skipped, level rise", report.level_rise_skipped),
        ("pairs emitted", report.pairs_emitted),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {count}" for name, count in rows) + "\n"
