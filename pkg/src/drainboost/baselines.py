"""Non-DE reference optimizers: random search, a generational GA and global-best PSO.

All three minimize, share RunConfig and RunResult with the DE family, and
respect the evaluation budget exactly (a final short generation evaluates
only as many candidates as the budget allows).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .space import Candidate, RunConfig, RunResult, SearchSpace, clamp


def run_random_search(objective, space: SearchSpace, config: RunConfig) -> RunResult:
    """Evaluate max_nfe independent uniform samples and keep the best.

    The history records the running best after every sample.
    """
    rng = np.random.default_rng(config.seed)
    samples = space.sample_uniform(rng, config.max_nfe)
    best_fit = np.inf
    best_pos = samples[0]
    best_history = []
    for pos in samples:
        f = float(objective(pos))
        if f < best_fit:
            best_fit = f
            best_pos = pos
        best_history.append(best_fit)
    n = config.max_nfe
    return RunResult(
        best=Candidate(position=best_pos.copy(), fitness=best_fit),
        best_history=best_history,
        nfe_used=n,
        nfe_history=list(range(1, n + 1)),
        pop_history=[1] * n,
    )


@dataclass
class GaParams:
    """Generational real-coded GA settings."""

    crossover_prob: float = 0.95
    mutation_prob: float = 0.05
    tournament_size: int = 2
    sigma_scale: float = 0.1  # mutation std as a fraction of each dimension's range


def run_ga(
    objective, space: SearchSpace, config: RunConfig, params: GaParams | None = None
) -> RunResult:
    """Generational GA: tournament selection, blend crossover, Gaussian mutation.

    Children are produced in pairs, so the population size must be even.
    One elite (the best parent) survives each generation by replacing the
    worst child when it would otherwise be lost.
    """
    if params is None:
        params = GaParams()
    if config.population_size % 2 != 0:
        raise ConfigError("GA population size must be even")

    rng = np.random.default_rng(config.seed)
    n_pop = config.population_size
    d = space.dim
    sigma = params.sigma_scale * (space.upper - space.lower)

    pop = space.sample_uniform(rng, n_pop)
    fit = np.array([float(objective(p)) for p in pop])
    nfe = n_pop

    best_history = [float(fit.min())]
    nfe_history = [nfe]
    pop_history = [n_pop]

    def tournament() -> int:
        entrants = rng.integers(0, n_pop, size=params.tournament_size)
        return int(entrants[np.argmin(fit[entrants])])

    while nfe < config.max_nfe:
        children = np.empty_like(pop)
        for j in range(n_pop // 2):
            p1 = pop[tournament()]
            p2 = pop[tournament()]
            if rng.random() < params.crossover_prob:
                alpha = rng.random(d)
                c1 = alpha * p1 + (1.0 - alpha) * p2
                c2 = (1.0 - alpha) * p1 + alpha * p2
            else:
                c1, c2 = p1.copy(), p2.copy()
            children[2 * j] = c1
            children[2 * j + 1] = c2
        mutate = rng.random((n_pop, d)) < params.mutation_prob
        noise = rng.normal(0.0, 1.0, size=(n_pop, d)) * sigma
        children = clamp(np.where(mutate, children + noise, children), space)

        m = min(n_pop, config.max_nfe - nfe)
        child_fit = np.array([float(objective(c)) for c in children[:m]])
        nfe += m

        elite_idx = int(np.argmin(fit))
        elite_pos, elite_fit = pop[elite_idx].copy(), float(fit[elite_idx])
        pop[:m] = children[:m]
        fit[:m] = child_fit
        if elite_fit < fit.min():
            worst = int(np.argmax(fit))
            pop[worst] = elite_pos
            fit[worst] = elite_fit

        best_history.append(float(fit.min()))
        nfe_history.append(nfe)
        pop_history.append(n_pop)

    best_idx = int(np.argmin(fit))
    return RunResult(
        best=Candidate(position=pop[best_idx].copy(), fitness=float(fit[best_idx])),
        best_history=best_history,
        nfe_used=nfe,
        nfe_history=nfe_history,
        pop_history=pop_history,
    )


@dataclass
class PsoParams:
    """Global-best PSO settings with linearly decaying inertia."""

    c1: float = 2.05
    c2: float = 2.05
    w_max: float = 0.9
    w_min: float = 0.4


def run_pso(
    objective, space: SearchSpace, config: RunConfig, params: PsoParams | None = None
) -> RunResult:
    """Global-best PSO with inertia decaying linearly over the budget.

    Velocities start at zero and are clamped to plus/minus each dimension's
    range; positions are clamped back into the box after every move.
    """
    if params is None:
        params = PsoParams()
    rng = np.random.default_rng(config.seed)
    n_pop = config.population_size
    d = space.dim
    v_range = space.upper - space.lower

    pos = space.sample_uniform(rng, n_pop)
    vel = np.zeros((n_pop, d))
    fit = np.array([float(objective(p)) for p in pos])
    nfe = n_pop

    pbest = pos.copy()
    pbest_fit = fit.copy()
    g_idx = int(np.argmin(fit))
    gbest = pos[g_idx].copy()
    gbest_fit = float(fit[g_idx])

    best_history = [gbest_fit]
    nfe_history = [nfe]
    pop_history = [n_pop]

    while nfe < config.max_nfe:
        w = params.w_max - (params.w_max - params.w_min) * (nfe / config.max_nfe)
        r1 = rng.random((n_pop, d))
        r2 = rng.random((n_pop, d))
        vel = w * vel + params.c1 * r1 * (pbest - pos) + params.c2 * r2 * (gbest - pos)
        vel = np.clip(vel, -v_range, v_range)
        pos = clamp(pos + vel, space)

        m = min(n_pop, config.max_nfe - nfe)
        new_fit = np.array([float(objective(p)) for p in pos[:m]])
        nfe += m
        fit[:m] = new_fit

        better = new_fit < pbest_fit[:m]
        pbest[:m][better] = pos[:m][better]
        pbest_fit[:m][better] = new_fit[better]
        g_idx = int(np.argmin(pbest_fit))
        if pbest_fit[g_idx] < gbest_fit:
            gbest = pbest[g_idx].copy()
            gbest_fit = float(pbest_fit[g_idx])

        best_history.append(gbest_fit)
        nfe_history.append(nfe)
        pop_history.append(n_pop)

    return RunResult(
        best=Candidate(position=gbest.copy(), fitness=gbest_fit),
        best_history=best_history,
        nfe_used=nfe,
        nfe_history=nfe_history,
        pop_history=pop_history,
    )
