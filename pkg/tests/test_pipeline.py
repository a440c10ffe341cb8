"""Ingestion, pairing and labeling against hand-built sample streams."""
import logging

import numpy as np
import pytest

from drainboost.data import (
    PairingReport,
    SampleRecord,
    build_dataset,
    compute_ecpm,
    eliminate,
    ingest_csv,
    label,
    report_text,
    schema,
)
from drainboost.errors import SchemaError

HEADER = ",".join(schema.COLUMNS)

DEFAULTS = {name: "0" for name in schema.COLUMNS}
DEFAULTS.update(
    device_id="dev1",
    timestamp="0",
    battery_state="discharging",
    battery_level="80",
    bat_charger="none",
    bat_health="good",
    bat_voltage="3.9",
    net_type="wifi",
    net_mobile_type="lte",
    net_mobile_data_status="connected",
    net_mobile_data_activity="none",
    net_roaming="off",
    net_wifi_status="enabled",
    s_battery_state="discharging",
    s_network_status="connected",
    s_screen_on="on",
    set_bluetooth="off",
    set_location="off",
    set_power_saver="off",
    set_flashlight="off",
    set_nfc="off",
    set_developer="off",
)


def csv_row(**over):
    cells = dict(DEFAULTS, **over)
    return ",".join(cells[name] for name in schema.COLUMNS)


def write_csv(tmp_path, rows, header=HEADER):
    path = tmp_path / "samples.csv"
    path.write_text("\n".join([header] + rows) + "\n")
    return str(path)


def record(device="dev1", ts=0.0, state="discharging", level=80.0, missing=False):
    features = np.zeros(len(schema.FEATURE_NAMES))
    if missing:
        features[5] = np.nan
    return SampleRecord(device, ts, schema.BATTERY_STATE_CODES[state], level, features)


def test_ingest_three_rows_literally(tmp_path):
    rows = [
        csv_row(timestamp="10", battery_level="90", bat_charger="usb"),
        csv_row(timestamp="70", battery_level="89.5", cpu_usage="12.5"),
        csv_row(device_id="dev2", battery_state="charging", s_screen_on="off"),
    ]
    recs = ingest_csv(write_csv(tmp_path, rows))
    assert len(recs) == 3
    a, b, c = recs
    assert (a.device_id, a.timestamp, a.battery_level) == ("dev1", 10.0, 90.0)
    assert a.battery_state == schema.BATTERY_STATE_CODES["discharging"]
    assert a.features[schema.FEATURE_NAMES.index("bat_charger")] == 2.0
    assert a.features[schema.FEATURE_NAMES.index("bat_voltage")] == 3.9
    assert b.features[schema.FEATURE_NAMES.index("cpu_usage")] == 12.5
    assert c.device_id == "dev2" and c.is_charging()
    assert c.features[schema.FEATURE_NAMES.index("s_screen_on")] == 0.0


def test_ingest_empty_data_section(tmp_path):
    assert ingest_csv(write_csv(tmp_path, [])) == []


def test_ingest_header_mismatch_is_fatal(tmp_path):
    bad = HEADER.replace("device_id", "device")
    with pytest.raises(SchemaError):
        ingest_csv(write_csv(tmp_path, [csv_row()], header=bad))
    with pytest.raises(SchemaError):
        ingest_csv(write_csv(tmp_path, [], header="a,b,c"))


def test_ingest_rejects_bad_rows_with_line_numbers(tmp_path):
    rows = [
        csv_row(),
        csv_row(battery_level="abc"),
        csv_row(bat_health="amazing"),
        "too,short",
        csv_row(battery_level="150"),
        csv_row(timestamp="inf"),
        csv_row(device_id="dev2"),
    ]
    errors = []
    recs = ingest_csv(write_csv(tmp_path, rows), errors)
    assert [r.device_id for r in recs] == ["dev1", "dev2"]
    assert len(errors) == 5
    for lineno, err in zip((3, 4, 5, 6, 7), errors):
        assert f"line {lineno}:" in err


def test_ingest_logs_when_no_sink_is_given(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        recs = ingest_csv(write_csv(tmp_path, [csv_row(battery_level="abc")]))
    assert recs == []
    assert any("line 2" in m for m in caplog.messages)


def test_empty_cells_mean_missing_not_error(tmp_path):
    rows = [csv_row(cpu_usage=""), csv_row(battery_state="")]
    errors = []
    recs = ingest_csv(write_csv(tmp_path, rows), errors)
    assert errors == []
    assert len(recs) == 2
    assert recs[0].has_missing() and np.isnan(recs[0].features[4])
    assert recs[1].battery_state == -1 and recs[1].has_missing()


def test_eliminate_mixed_fixture():
    recs = [
        record(ts=0),
        record(ts=1, state="charging"),
        record(ts=2, missing=True),
        record(ts=3),
        record(ts=4, state="charging"),
    ]
    kept = eliminate(recs)
    assert [r.timestamp for r in kept] == [0, 3]
    assert eliminate([record(state="charging")] * 4) == []
    assert eliminate([]) == []


def test_ecpm_basic_pair():
    recs = [record(ts=0, level=80), record(ts=240, level=78)]
    pairs = compute_ecpm(recs)
    assert len(pairs) == 1
    first, ecpm = pairs[0]
    assert ecpm == 0.5
    assert first is recs[0]  # the earlier state carries the features


def test_ecpm_equal_levels_give_zero():
    pairs = compute_ecpm([record(ts=0, level=50), record(ts=60, level=50)])
    assert pairs[0][1] == 0.0


def test_ecpm_charging_between_kills_the_pair():
    recs = [
        record(ts=0, level=80),
        record(ts=100, level=79, state="charging"),
        record(ts=200, level=90),
    ]
    report = PairingReport()
    assert compute_ecpm(recs, report) == []
    assert report.charging_eliminated == 1
    assert report.pairs_emitted == 0


def test_ecpm_missing_between_does_not_break_the_chain():
    recs = [
        record(ts=0, level=80),
        record(ts=100, level=79, missing=True),
        record(ts=240, level=78),
    ]
    report = PairingReport()
    pairs = compute_ecpm(recs, report)
    assert len(pairs) == 1
    assert pairs[0][1] == 0.5
    assert report.missing_eliminated == 1


def test_ecpm_skips_are_counted():
    recs = [
        record(ts=0, level=80),
        record(ts=0, level=79),    # no time elapsed
        record(ts=60, level=85),   # level went up without charging
        record(ts=120, level=84),
    ]
    report = PairingReport()
    pairs = compute_ecpm(recs, report)
    assert report.nonpositive_dt_skipped == 1
    assert report.level_rise_skipped == 1
    assert [round(p[1], 6) for p in pairs] == [1.0]


def test_ecpm_never_pairs_across_devices():
    recs = [record(device="a", ts=0, level=80), record(device="b", ts=60, level=70)]
    assert compute_ecpm(recs) == []


def test_ecpm_pair_count_bound():
    # at most one pair per consecutive positions within a device
    rng = np.random.default_rng(11)
    for _ in range(20):
        recs = []
        for device in ("a", "b", "c"):
            n = int(rng.integers(1, 9))
            ts = np.cumsum(rng.integers(1, 100, size=n)).astype(float)
            for t in ts:
                state = "charging" if rng.random() < 0.3 else "discharging"
                recs.append(record(device=device, ts=t, state=state,
                                   level=float(rng.integers(0, 101)),
                                   missing=bool(rng.random() < 0.2)))
        report = PairingReport()
        pairs = compute_ecpm(recs, report)
        per_device = {d: sum(1 for r in recs if r.device_id == d) for d in "abc"}
        assert len(pairs) <= sum(max(0, c - 1) for c in per_device.values())
        assert all(v >= 0 for _, v in pairs)
        assert report.pairs_emitted == len(pairs)


def test_label_thresholds():
    assert label(0.3) == 0
    assert label(0.0) == 0
    assert label(1.0) == 1
    assert label(1.6) == 2
    # both boundaries land in the middle class
    assert label(0.5) == 1
    assert label(1.5) == 1
    with pytest.raises(ValueError):
        label(-0.1)
    assert label(0.3, low=0.2) == 1
    assert label(1.2, high=1.1) == 2


def test_build_dataset_and_report_text():
    recs = [record(ts=0, level=80), record(ts=60, level=79.9),
            record(ts=120, level=78.8), record(ts=150, level=78.0)]
    report = PairingReport()
    ds = build_dataset(compute_ecpm(recs, report))
    assert ds.n == 3
    # drops of 0.1, 1.1 and 1.6 percent per minute
    assert ds.labels.tolist() == [0, 1, 2]
    assert ds.ecpm is not None and ds.ecpm.shape == (3,)
    text = report_text(report)
    assert "pairs emitted" in text and "3" in text

    empty = build_dataset([])
    assert empty.n == 0 and empty.features.shape == (0, 32)
