"""Standard continuous benchmark functions for exercising the optimizers.

All three have a global minimum of 0: sphere and rastrigin at the origin,
rosenbrock at (1, ..., 1).
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError


def sphere(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(x * x))


def rastrigin(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


_BENCHMARKS = {"sphere": sphere, "rastrigin": rastrigin, "rosenbrock": rosenbrock}

# Conventional box bounds per function, applied symmetrically in every dimension.
BOUNDS = {"sphere": 100.0, "rastrigin": 5.12, "rosenbrock": 30.0}


def benchmark(name: str):
    """Look up a benchmark function by name."""
    try:
        return _BENCHMARKS[name]
    except KeyError:
        raise ConfigError(f"unknown benchmark function: {name!r}") from None
