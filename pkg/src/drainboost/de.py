"""Differential evolution family: static DE, JADE, SHADE and L-SHADE.

All four variants share one generation loop. The adaptive members draw
per-individual control parameters (crossover rate from a normal, scale
factor from a Cauchy) around memorized means that are updated from the
parameters of successful trials; L-SHADE additionally shrinks the
population linearly over the evaluation budget.

Minimization throughout. A trial replaces its parent when its fitness is
less than or equal; the parent position enters the archive and the trial's
control parameters enter the success log only on strict improvement.

Reproducibility: each run consumes a single seeded generator in a fixed
order per generation: memory indices, crossover rates, scale factors
(joint resampling of non-positive draws), pbest fractions, pbest indices
(joint collision resampling), difference indices, crossover uniforms,
crossover forced coordinates, then archive evictions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .space import Candidate, RunConfig, RunResult, SearchSpace, clamp, round_half_away

STRATEGY_RAND = "current_to_rand_1_bin"
STRATEGY_PBEST = "current_to_pbest_1_bin"

VARIANTS = ("de", "jade", "shade", "lshade")


@dataclass
class DeParams:
    """Static control parameters and mutation strategy.

    f and cr only apply to the non-adaptive variant; pbest_fraction is the
    fixed greediness used by JADE and by the pbest strategy under static DE.
    """

    f: float = 0.8
    cr: float = 0.9
    strategy: str = STRATEGY_RAND
    pbest_fraction: float = 0.1

    def __post_init__(self):
        if self.strategy not in (STRATEGY_RAND, STRATEGY_PBEST):
            raise ConfigError(f"unknown mutation strategy: {self.strategy!r}")
        if not 0.0 < self.f <= 1.0:
            raise ConfigError("f must lie in (0, 1]")
        if not 0.0 <= self.cr <= 1.0:
            raise ConfigError("cr must lie in [0, 1]")


def lehmer_mean(values: np.ndarray, weights: np.ndarray | None = None) -> float:
    """Weighted Lehmer mean sum(w v^2) / sum(w v); unweighted when weights is None."""
    values = np.asarray(values, dtype=np.float64)
    if weights is None:
        weights = np.ones_like(values)
    weights = np.asarray(weights, dtype=np.float64)
    return float(np.sum(weights * values * values) / np.sum(weights * values))


class HistoryMemory:
    """Circular success-history memory of crossover-rate and scale-factor means.

    All entries start at 0.5. The write index advances only when an update
    actually happens (nonempty success log).
    """

    def __init__(self, size: int = 50):
        if size < 1:
            raise ConfigError("memory size must be positive")
        self.size = size
        self.m_cr = np.full(size, 0.5)
        self.m_f = np.full(size, 0.5)
        self.k = 0

    def update(self, s_cr: np.ndarray, s_f: np.ndarray, improvements: np.ndarray) -> None:
        """Write weighted means of a generation's successful parameters.

        Weights are the fitness improvements normalized to sum 1; the
        crossover-rate entry takes the weighted arithmetic mean, the
        scale-factor entry the weighted Lehmer mean. Empty log: no-op.
        """
        s_cr = np.asarray(s_cr, dtype=np.float64)
        s_f = np.asarray(s_f, dtype=np.float64)
        improvements = np.asarray(improvements, dtype=np.float64)
        if s_cr.shape != s_f.shape or s_cr.shape != improvements.shape:
            raise ValueError("success log arrays must have equal length")
        if s_cr.size == 0:
            return
        w = improvements / np.sum(improvements)
        self.m_cr[self.k] = float(np.sum(w * s_cr))
        self.m_f[self.k] = lehmer_mean(s_f, w)
        self.k = (self.k + 1) % self.size


class Archive:
    """Bounded pool of replaced parent positions with uniform-random eviction."""

    def __init__(self):
        self.members: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.members)

    def add(self, position: np.ndarray) -> None:
        self.members.append(np.array(position, dtype=np.float64))

    def trim(self, capacity: int, rng: np.random.Generator) -> None:
        while len(self.members) > capacity:
            self.members.pop(int(rng.integers(0, len(self.members))))

    def as_array(self) -> np.ndarray:
        return np.stack(self.members)


def sample_pbest_fraction(rng: np.random.Generator, pop_size: int) -> float:
    """Draw the per-individual greediness uniformly from [2/pop_size, 0.2].

    When 2/pop_size exceeds 0.2 the interval collapses and 0.2 is returned
    (one draw is still consumed).
    """
    lo = min(2.0 / pop_size, 0.2)
    return float(rng.uniform(lo, 0.2))


def pbest_pool_size(p: float, pop_size: int) -> int:
    """Number of top-ranked members eligible as pbest: max(2, round(p * pop_size))."""
    return int(min(max(2.0, round_half_away(p * pop_size)), pop_size))


def sample_control_params(memory: HistoryMemory, rng: np.random.Generator) -> tuple[float, float]:
    """Draw one (cr, f) pair around a uniformly chosen memory entry.

    cr is normal with scale 0.1, clipped to [0, 1]. f is Cauchy with scale
    0.1, redrawn while non-positive, then truncated to 1.
    """
    r = int(rng.integers(0, memory.size))
    cr = float(np.clip(rng.normal(memory.m_cr[r], 0.1), 0.0, 1.0))
    f = memory.m_f[r] + 0.1 * rng.standard_cauchy()
    while f <= 0.0:
        f = memory.m_f[r] + 0.1 * rng.standard_cauchy()
    return cr, float(min(f, 1.0))


def mutate_current_to_pbest(x_i, x_pbest, x_r1, x_r2, f_i, space: SearchSpace | None = None):
    """x_i + f (x_pbest - x_i) + f (x_r1 - x_r2), clamped when a space is given.

    Broadcasts over leading axes, so whole generations mutate in one call.
    """
    v = x_i + f_i * (x_pbest - x_i) + f_i * (x_r1 - x_r2)
    return clamp(v, space) if space is not None else v


def mutate_current_to_rand(x_i, x_r1, x_r2, x_r3, f_i, space: SearchSpace | None = None):
    """x_i + f (x_r1 - x_i) + f (x_r2 - x_r3), clamped when a space is given."""
    v = x_i + f_i * (x_r1 - x_i) + f_i * (x_r2 - x_r3)
    return clamp(v, space) if space is not None else v


def binomial_crossover(x, v, cr, rng: np.random.Generator):
    """Mix mutant coordinates into the parent with probability cr.

    One coordinate per row (the forced index, drawn after the uniforms) is
    always taken from the mutant. Accepts single vectors or row stacks; cr
    may be scalar or per-row.
    """
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
        v = v[None, :]
    n, d = x.shape
    cr_col = np.broadcast_to(np.asarray(cr, dtype=np.float64), (n,))[:, None]
    take = rng.random((n, d)) < cr_col
    forced = rng.integers(0, d, size=n)
    take[np.arange(n), forced] = True
    u = np.where(take, v, x)
    return u[0] if single else u


def lpsr_population(nfe: int, config: RunConfig, pop_min: int = 4) -> int:
    """Linear population-size schedule from the initial size down to pop_min.

    round[(pop_min - initial) / max_nfe * nfe + initial], halves away from zero.
    """
    size = (pop_min - config.population_size) / config.max_nfe * nfe + config.population_size
    return int(round_half_away(size))


@dataclass
class GenerationTrace:
    """Per-generation audit record of the adaptive state."""

    s_cr: np.ndarray
    s_f: np.ndarray
    improvements: np.ndarray
    m_cr: np.ndarray
    m_f: np.ndarray
    pop_size: int
    nfe: int


def _sample_cauchy_batch(centers: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Cauchy(center, 0.1) per entry; non-positive draws are jointly redrawn."""
    f = centers + 0.1 * rng.standard_cauchy(centers.shape[0])
    bad = f <= 0.0
    while bad.any():
        f[bad] = centers[bad] + 0.1 * rng.standard_cauchy(int(bad.sum()))
        bad = f <= 0.0
    return np.minimum(f, 1.0)


def run(
    variant: str,
    objective,
    space: SearchSpace,
    config: RunConfig,
    *,
    params: DeParams | None = None,
    memory_size: int = 50,
    pop_min: int = 4,
    trace: bool = False,
) -> RunResult:
    """Run one DE-family optimization within the evaluation budget.

    variant selects the adaptation scheme: "de" uses the static f/cr from
    params, "jade" adapts scalar means with learning rate 0.1, "shade"
    adds the success-history memory, "lshade" adds linear population-size
    reduction on top. objective maps a position to a float and must be a
    pure function of it.
    """
    if variant not in VARIANTS:
        raise ConfigError(f"unknown optimizer variant: {variant!r}")
    if params is None:
        params = DeParams() if variant == "de" else DeParams(strategy=STRATEGY_PBEST)

    rng = np.random.default_rng(config.seed)
    pop = space.sample_uniform(rng, config.population_size)
    fit = np.array([float(objective(p)) for p in pop])
    nfe = config.population_size

    memory = HistoryMemory(memory_size) if variant in ("shade", "lshade") else None
    mu_cr, mu_f = 0.5, 0.5  # jade scalar means, learning rate below
    jade_c = 0.1
    archive = Archive() if variant != "de" else None

    best_history = [float(fit.min())]
    nfe_history = [nfe]
    pop_history = [pop.shape[0]]
    traces: list[GenerationTrace] = []

    while nfe < config.max_nfe:
        np_cur = pop.shape[0]
        m = min(np_cur, config.max_nfe - nfe)
        idx = np.arange(m)
        order = np.argsort(fit, kind="stable")

        if variant in ("shade", "lshade"):
            r_mem = rng.integers(0, memory.size, size=m)
            cr_i = np.clip(rng.normal(memory.m_cr[r_mem], 0.1), 0.0, 1.0)
            f_i = _sample_cauchy_batch(memory.m_f[r_mem], rng)
            p_lo = min(2.0 / np_cur, 0.2)
            p_i = rng.uniform(p_lo, 0.2, size=m)
        elif variant == "jade":
            cr_i = np.clip(rng.normal(mu_cr, 0.1, size=m), 0.0, 1.0)
            f_i = _sample_cauchy_batch(np.full(m, mu_f), rng)
            p_i = np.full(m, params.pbest_fraction)
        else:
            cr_i = np.full(m, params.cr)
            f_i = np.full(m, params.f)
            p_i = np.full(m, params.pbest_fraction)

        n_comb = np_cur + (len(archive) if archive is not None else 0)
        if archive is not None and len(archive):
            comb = np.vstack([pop, archive.as_array()])
        else:
            comb = pop

        if params.strategy == STRATEGY_PBEST:
            pool = np.array([pbest_pool_size(p, np_cur) for p in p_i], dtype=np.int64)
            pb = order[rng.integers(0, pool)]
            bad = pb == idx
            while bad.any():
                pb[bad] = order[rng.integers(0, pool[bad])]
                bad = pb == idx
            r1 = rng.integers(0, np_cur, size=m)
            bad = (r1 == idx) | (r1 == pb)
            while bad.any():
                r1[bad] = rng.integers(0, np_cur, size=int(bad.sum()))
                bad = (r1 == idx) | (r1 == pb)
            r2 = rng.integers(0, n_comb, size=m)
            bad = (r2 == idx) | (r2 == pb) | (r2 == r1)
            while bad.any():
                r2[bad] = rng.integers(0, n_comb, size=int(bad.sum()))
                bad = (r2 == idx) | (r2 == pb) | (r2 == r1)
            mutant = mutate_current_to_pbest(
                pop[:m], pop[pb], pop[r1], comb[r2], f_i[:, None], space
            )
        else:
            r1 = rng.integers(0, np_cur, size=m)
            bad = r1 == idx
            while bad.any():
                r1[bad] = rng.integers(0, np_cur, size=int(bad.sum()))
                bad = r1 == idx
            r2 = rng.integers(0, np_cur, size=m)
            bad = (r2 == idx) | (r2 == r1)
            while bad.any():
                r2[bad] = rng.integers(0, np_cur, size=int(bad.sum()))
                bad = (r2 == idx) | (r2 == r1)
            r3 = rng.integers(0, n_comb, size=m)
            bad = (r3 == idx) | (r3 == r1) | (r3 == r2)
            while bad.any():
                r3[bad] = rng.integers(0, n_comb, size=int(bad.sum()))
                bad = (r3 == idx) | (r3 == r1) | (r3 == r2)
            mutant = mutate_current_to_rand(
                pop[:m], pop[r1], pop[r2], comb[r3], f_i[:, None], space
            )

        trial = binomial_crossover(pop[:m], mutant, cr_i, rng)
        trial_fit = np.array([float(objective(t)) for t in trial])
        nfe += m

        improved = trial_fit < fit[:m]
        accepted = trial_fit <= fit[:m]
        if archive is not None:
            for i in np.nonzero(improved)[0]:
                archive.add(pop[i])
        s_cr = cr_i[improved]
        s_f = f_i[improved]
        gains = fit[:m][improved] - trial_fit[improved]
        pop[:m][accepted] = trial[accepted]
        fit[:m][accepted] = trial_fit[accepted]

        if variant in ("shade", "lshade"):
            memory.update(s_cr, s_f, gains)
        elif variant == "jade" and s_f.size:
            mu_cr = (1.0 - jade_c) * mu_cr + jade_c * float(np.mean(s_cr))
            mu_f = (1.0 - jade_c) * mu_f + jade_c * lehmer_mean(s_f)

        if variant == "lshade":
            new_size = lpsr_population(nfe, config, pop_min)
            if new_size < pop.shape[0]:
                keep = np.sort(np.argsort(fit, kind="stable")[:new_size])
                pop = pop[keep]
                fit = fit[keep]
        if archive is not None:
            archive.trim(pop.shape[0], rng)

        best_history.append(float(fit.min()))
        nfe_history.append(nfe)
        pop_history.append(pop.shape[0])
        if trace and variant in ("shade", "lshade"):
            traces.append(
                GenerationTrace(
                    s_cr=s_cr.copy(),
                    s_f=s_f.copy(),
                    improvements=gains.copy(),
                    m_cr=memory.m_cr.copy(),
                    m_f=memory.m_f.copy(),
                    pop_size=pop.shape[0],
                    nfe=nfe,
                )
            )

    best_idx = int(np.argmin(fit))
    result = RunResult(
        best=Candidate(position=pop[best_idx].copy(), fitness=float(fit[best_idx])),
        best_history=best_history,
        nfe_used=nfe,
        nfe_history=nfe_history,
        pop_history=pop_history,
    )
    if trace:
        result.trace = traces
    return result
