"""Name-based dispatch over every optimizer in the package."""
from __future__ import annotations

from functools import partial

from . import baselines, de
from .errors import ConfigError

OPTIMIZER_NAMES = ("de", "jade", "shade", "lshade", "rs", "ga", "pso")


def get_optimizer(name: str):
    """Return a runner callable (objective, space, config) -> RunResult."""
    if name in de.VARIANTS:
        return partial(de.run, name)
    if name == "rs":
        return baselines.run_random_search
    if name == "ga":
        return baselines.run_ga
    if name == "pso":
        return baselines.run_pso
    raise ConfigError(
        f"unknown optimizer: {name!r} (valid: {', '.join(OPTIMIZER_NAMES)})"
    )
