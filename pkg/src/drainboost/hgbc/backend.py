"""Engine selection for tree growth.

The compiled engine is used whenever numba imports cleanly; setting the
environment variable DRAINBOOST_NUMBA=0 forces the pure-numpy fallback.
Both engines are importable regardless, so equivalence tests and the
kernel benchmark can drive them side by side in one process.
"""
from __future__ import annotations

import os

from ..errors import ConfigError

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

ENV_FLAG = "DRAINBOOST_NUMBA"
USE_NUMBA = HAS_NUMBA and os.environ.get(ENV_FLAG, "1") != "0"


def active_engine_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def get_engine(name: str | None = None):
    """Return the kernels module for an engine name (default: active one)."""
    if name is None:
        name = active_engine_name()
    if name == "numpy":
        from . import kernels_numpy

        return kernels_numpy
    if name == "numba":
        if not HAS_NUMBA:
            raise ConfigError("numba engine requested but numba is not installed")
        from . import kernels_numba

        return kernels_numba
    raise ConfigError(f"unknown engine: {name!r}")
