"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid user-supplied configuration (bad option value, insufficient budget)."""


class DataError(Exception):
    """Invalid or inconsistent input data."""


class SchemaError(DataError):
    """Input file does not match the documented column schema."""


class StratificationError(DataError):
    """A class has too few members for the requested stratified split."""


class StatsError(DataError):
    """A statistic is undefined for the given data (e.g. single-class input)."""
