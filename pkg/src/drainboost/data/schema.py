"""Sample-table layout and the frozen enum code tables.

A raw sample file is comma-separated UTF-8 with a header row of the 36
columns below: four bookkeeping columns, then 32 device-state features.
Enum-valued cells hold the names from the code tables and are decoded to
their ordinal codes at ingestion. The tables are part of the file format;
extending them is fine, reordering existing codes is not.
"""

META_COLUMNS = ("device_id", "timestamp", "battery_state", "battery_level")

FEATURE_NAMES = (
    # battery details
    "bat_charger",
    "bat_health",
    "bat_voltage",
    "bat_temperature",
    # cpu states
    "cpu_usage",
    "cpu_uptime",
    "cpu_sleep_time",
    # network details
    "net_type",
    "net_mobile_type",
    "net_mobile_data_status",
    "net_mobile_data_activity",
    "net_roaming",
    "net_wifi_status",
    "net_wifi_signal",
    "net_wifi_speed",
    # sample snapshot
    "s_battery_state",
    "s_battery_level",
    "s_memory_free",
    "s_memory_used",
    "s_network_status",
    "s_screen_brightness",
    "s_screen_on",
    # settings toggles
    "set_bluetooth",
    "set_location",
    "set_power_saver",
    "set_flashlight",
    "set_nfc",
    "set_developer",
    # storage
    "st_free",
    "st_total",
    "st_memory_active",
    "st_memory_inactive",
)

COLUMNS = META_COLUMNS + FEATURE_NAMES

BATTERY_STATE_CODES = {"charging": 0, "discharging": 1}

_ONOFF = {"off": 0, "on": 1}

ENUM_CODES = {
    "battery_state": BATTERY_STATE_CODES,
    "bat_charger": {"none": 0, "ac": 1, "usb": 2, "wireless": 3},
    "bat_health": {
        "unknown": 0,
        "good": 1,
        "overheat": 2,
        "dead": 3,
        "over_voltage": 4,
        "failure": 5,
        "cold": 6,
    },
    "net_type": {"unknown": 0, "wifi": 1, "mobile": 2, "ethernet": 3},
    "net_mobile_type": {"none": 0, "gprs": 1, "edge": 2, "umts": 3, "hspa": 4, "lte": 5},
    "net_mobile_data_status": {
        "disconnected": 0,
        "connecting": 1,
        "connected": 2,
        "suspended": 3,
    },
    "net_mobile_data_activity": {"none": 0, "in": 1, "out": 2, "inout": 3},
    "net_roaming": _ONOFF,
    "net_wifi_status": {
        "disabled": 0,
        "disabling": 1,
        "enabled": 2,
        "enabling": 3,
        "unknown": 4,
    },
    "s_battery_state": BATTERY_STATE_CODES,
    "s_network_status": {"disconnected": 0, "connected": 1},
    "s_screen_on": _ONOFF,
    "set_bluetooth": _ONOFF,
    "set_location": _ONOFF,
    "set_power_saver": _ONOFF,
    "set_flashlight": _ONOFF,
    "set_nfc": _ONOFF,
    "set_developer": _ONOFF,
}

LABEL_NAMES = ("safe", "warning", "critical")

# drain-rate class boundaries, percent per minute; both endpoints label warning
SAFE_BELOW = 0.5
CRITICAL_ABOVE = 1.5
