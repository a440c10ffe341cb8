import numpy as np
import pytest

from drainboost.de import (
    Archive,
    DeParams,
    HistoryMemory,
    binomial_crossover,
    lehmer_mean,
    lpsr_population,
    mutate_current_to_pbest,
    mutate_current_to_rand,
    pbest_pool_size,
    sample_control_params,
    sample_pbest_fraction,
)
from drainboost.errors import ConfigError
from drainboost.space import RunConfig, SearchSpace


class ScriptedRng:
    """Feeds fixed uniform draws and forced crossover indices to an operator."""

    def __init__(self, uniforms, forced):
        self.uniforms = np.asarray(uniforms, dtype=np.float64)
        self.forced = np.asarray(forced, dtype=np.int64)

    def random(self, shape):
        return self.uniforms.reshape(shape)

    def integers(self, low, high, size=None):
        return self.forced[:size] if size is not None else self.forced[0]


def test_mutation_current_to_pbest_arithmetic():
    v = mutate_current_to_pbest(
        np.array([0.0, 0.0]),
        np.array([1.0, 1.0]),
        np.array([2.0, 0.0]),
        np.array([0.0, 2.0]),
        0.5,
    )
    assert v.tolist() == [1.5, -0.5]


def test_mutation_clamps_when_space_given():
    space = SearchSpace(lower=[0.0, 0.0], upper=[1.0, 1.0])
    v = mutate_current_to_pbest(
        np.array([0.0, 0.0]),
        np.array([1.0, 1.0]),
        np.array([2.0, 0.0]),
        np.array([0.0, 2.0]),
        0.5,
        space,
    )
    assert v.tolist() == [1.0, 0.0]


def test_mutation_zero_f_keeps_parent():
    x = np.array([3.0, -2.0])
    v = mutate_current_to_pbest(x, np.array([9.0, 9.0]), np.array([1.0, 1.0]), np.array([2.0, 2.0]), 0.0)
    assert np.array_equal(v, x)
    v = mutate_current_to_rand(x, np.array([9.0, 9.0]), np.array([1.0, 1.0]), np.array([2.0, 2.0]), 0.0)
    assert np.array_equal(v, x)


def test_mutation_broadcasts_rows():
    x = np.zeros((3, 2))
    pb = np.ones((3, 2))
    r1 = np.full((3, 2), 2.0)
    r2 = np.zeros((3, 2))
    f = np.array([[0.5], [1.0], [0.0]])
    v = mutate_current_to_pbest(x, pb, r1, r2, f)
    assert v.shape == (3, 2)
    assert v[0].tolist() == [1.5, 1.5]
    assert v[2].tolist() == [0.0, 0.0]


def test_crossover_rule_and_forced_coordinate():
    x = np.array([10.0, 20.0, 30.0])
    v = np.array([1.0, 2.0, 3.0])
    # draw < cr takes the mutant; the forced coordinate takes it regardless.
    rng = ScriptedRng([0.2, 0.95, 0.6], [1])
    u = binomial_crossover(x, v, 0.5, rng)
    assert u.tolist() == [1.0, 2.0, 30.0]


def test_crossover_zero_cr_still_takes_one_mutant_coordinate():
    x = np.zeros(4)
    v = np.ones(4)
    rng = ScriptedRng([0.3, 0.4, 0.5, 0.6], [2])
    u = binomial_crossover(x, v, 0.0, rng)
    assert u.tolist() == [0.0, 0.0, 1.0, 0.0]


def test_crossover_full_cr_copies_mutant():
    x = np.zeros(4)
    v = np.arange(1.0, 5.0)
    rng = np.random.default_rng(0)
    u = binomial_crossover(x, v, 1.0, rng)
    assert np.array_equal(u, v)


def test_crossover_batched_rows_match_scalar_semantics():
    x = np.array([[10.0, 20.0], [30.0, 40.0]])
    v = np.array([[1.0, 2.0], [3.0, 4.0]])
    rng = ScriptedRng([0.9, 0.8, 0.1, 0.7], [0, 0])
    u = binomial_crossover(x, v, np.array([0.5, 0.5]), rng)
    assert u[0].tolist() == [1.0, 20.0]
    assert u[1].tolist() == [3.0, 40.0]


def test_lehmer_mean_values():
    assert lehmer_mean(np.array([0.2, 0.8])) == pytest.approx(0.68)
    assert lehmer_mean(np.array([0.5])) == pytest.approx(0.5)
    # Weighted form, hand-computed.
    got = lehmer_mean(np.array([0.2, 0.8]), np.array([0.75, 0.25]))
    assert got == pytest.approx(0.19 / 0.35)


def test_history_memory_update_weighted_means():
    mem = HistoryMemory(4)
    assert np.all(mem.m_cr == 0.5) and np.all(mem.m_f == 0.5)
    mem.update(np.array([0.5, 1.0]), np.array([0.2, 0.8]), np.array([1.0, 1.0]))
    assert mem.m_cr[0] == pytest.approx(0.75)
    assert mem.m_f[0] == pytest.approx(0.68)
    assert mem.k == 1
    mem.update(np.array([0.5, 1.0]), np.array([0.2, 0.8]), np.array([3.0, 1.0]))
    assert mem.m_cr[1] == pytest.approx(0.625)
    assert mem.m_f[1] == pytest.approx(0.19 / 0.35)
    assert mem.k == 2


def test_history_memory_empty_log_is_noop():
    mem = HistoryMemory(3)
    mem.update(np.array([]), np.array([]), np.array([]))
    assert mem.k == 0
    assert np.all(mem.m_cr == 0.5) and np.all(mem.m_f == 0.5)


def test_history_memory_index_wraps():
    mem = HistoryMemory(2)
    for _ in range(3):
        mem.update(np.array([0.4]), np.array([0.4]), np.array([1.0]))
    assert mem.k == 1


def test_sample_control_params_ranges():
    mem = HistoryMemory(8)
    mem.m_f[:] = 0.05  # low center forces the resampling loop to trigger
    rng = np.random.default_rng(11)
    for _ in range(300):
        cr, f = sample_control_params(mem, rng)
        assert 0.0 <= cr <= 1.0
        assert 0.0 < f <= 1.0


def test_sample_pbest_fraction_interval():
    rng = np.random.default_rng(5)
    vals = [sample_pbest_fraction(rng, 50) for _ in range(200)]
    assert all(2.0 / 50 <= p <= 0.2 for p in vals)
    # Interval collapses when 2/pop exceeds 0.2.
    assert sample_pbest_fraction(rng, 5) == 0.2


def test_pbest_pool_size():
    assert pbest_pool_size(0.04, 50) == 2
    assert pbest_pool_size(0.2, 50) == 10
    assert pbest_pool_size(0.05, 50) == 3  # round(2.5) away from zero
    assert pbest_pool_size(0.01, 50) == 2  # floor of two
    assert pbest_pool_size(0.2, 4) == 2


def test_lpsr_schedule():
    config = RunConfig(population_size=50, max_nfe=800, seed=0)
    assert lpsr_population(0, config) == 50
    assert lpsr_population(400, config) == 27
    assert lpsr_population(800, config) == 4
    # Monotone non-increasing across the whole budget.
    sizes = [lpsr_population(n, config) for n in range(0, 801)]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))


def test_archive_eviction_and_capacity():
    arch = Archive()
    rng = np.random.default_rng(2)
    for i in range(10):
        arch.add(np.array([float(i)]))
    arch.trim(6, rng)
    assert len(arch) == 6
    # Survivors are a subset of what went in.
    vals = sorted(m[0] for m in arch.members)
    assert set(vals) <= set(float(i) for i in range(10))
    arch.trim(6, rng)
    assert len(arch) == 6


def test_de_params_validation():
    with pytest.raises(ConfigError):
        DeParams(strategy="best_1_bin")
    with pytest.raises(ConfigError):
        DeParams(f=0.0)
    with pytest.raises(ConfigError):
        DeParams(cr=1.5)
