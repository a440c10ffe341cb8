"""Search-space definitions shared by all optimizers.

A search space is a box with per-dimension bounds and an integer mask.
Integer dimensions are kept integral by rounding half away from zero after
every continuous operator, so positions stored in a population are always
feasible as-is.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass
class SearchSpace:
    """Box constraints with an integer mask.

    Parameters
    ----------
    lower, upper : array-like of float
        Per-dimension bounds, lower[d] <= upper[d].
    integer_mask : array-like of bool, optional
        True for dimensions constrained to integers. Defaults to all-False.
    """

    lower: np.ndarray
    upper: np.ndarray
    integer_mask: np.ndarray | None = None

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=np.float64)
        self.upper = np.asarray(self.upper, dtype=np.float64)
        if self.lower.ndim != 1 or self.upper.ndim != 1:
            raise ValueError("bounds must be one-dimensional")
        if self.lower.shape != self.upper.shape:
            raise ValueError("lower and upper must have equal length")
        if self.integer_mask is None:
            self.integer_mask = np.zeros(self.lower.shape, dtype=bool)
        else:
            self.integer_mask = np.asarray(self.integer_mask, dtype=bool)
            if self.integer_mask.shape != self.lower.shape:
                raise ValueError("integer_mask length does not match bounds")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        # Integer dimensions need integral endpoints so clamp-then-round
        # cannot leave the box.
        for d in np.nonzero(self.integer_mask)[0]:
            if self.lower[d] != np.floor(self.lower[d]) or self.upper[d] != np.floor(self.upper[d]):
                raise ValueError(f"integer dimension {d} has non-integral bounds")

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def sample_uniform(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n positions uniformly inside the box, clamped (rounds integer dims)."""
        pos = rng.uniform(self.lower, self.upper, size=(n, self.dim))
        return clamp(pos, self)


@dataclass
class Candidate:
    """A position with its fitness; fitness is None until evaluated."""

    position: np.ndarray
    fitness: float | None = None


@dataclass
class RunConfig:
    """Shared optimizer run settings."""

    population_size: int = 50
    max_nfe: int = 800
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4:
            raise ConfigError("population_size must be at least 4")
        if self.max_nfe < self.population_size:
            raise ConfigError(
                "insufficient evaluation budget: max_nfe must cover one full population"
            )


@dataclass
class RunResult:
    """Outcome of one optimizer run.

    best_history holds the best fitness seen so far, recorded once per
    generation (non-increasing). nfe_history and pop_history record, per
    generation, the evaluation count consumed so far and the population
    size entering the next generation.
    """

    best: Candidate
    best_history: list[float]
    nfe_used: int
    nfe_history: list[int] = field(default_factory=list)
    pop_history: list[int] = field(default_factory=list)
    trace: list | None = None


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round to the nearest integer, halves away from zero (2.5 -> 3, -2.5 -> -3)."""
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def clamp(position: np.ndarray, space: SearchSpace) -> np.ndarray:
    """Clamp a position (or stack of positions) into the box.

    Out-of-range coordinates saturate at the bound; integer-masked
    coordinates are rounded half away from zero after clamping. Idempotent.
    """
    position = np.asarray(position, dtype=np.float64)
    if position.shape[-1] != space.dim:
        raise ValueError(
            f"position has {position.shape[-1]} coordinates, space has {space.dim}"
        )
    out = np.clip(position, space.lower, space.upper)
    if space.integer_mask.any():
        mask = space.integer_mask
        out = out.copy()
        out[..., mask] = round_half_away(out[..., mask])
    return out
