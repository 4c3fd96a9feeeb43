"""Boundary-case moments, offspring law, derivative martingale, limit-law probe."""

import math

import numpy as np
import pytest

from continuum_cascade.errors import ConfigurationError
from continuum_cascade.martingale import (
    DEFAULT_V_MAX,
    NormalizedOffspringLaw,
    derivative_weight,
    equivalence_check,
    prune_barrier,
    sample_normalized_offspring,
    simulate_Dn,
    verify_boundary_conditions,
)
from continuum_cascade.recursion import RecursionConfig, run_recursion


def test_boundary_moment_residuals():
    report = verify_boundary_conditions()
    assert report.m1_residual < 1e-10
    assert report.m2_residual < 1e-10
    assert abs(report.m4_value - math.e) < 1e-10


def test_second_moment_equals_e_by_antiderivative():
    # -(y^2 + 2y + 2) e^-y evaluated at -1 gives -e; the upper limit vanishes
    lower = -((-1.0) ** 2 + 2 * (-1.0) + 2.0) * math.exp(1.0)
    assert math.isclose(-lower, math.e, rel_tol=1e-15)


def test_offspring_empty_at_degenerate_support():
    rng = np.random.default_rng(0)
    for _ in range(100):
        assert sample_normalized_offspring(0.0, rng, v_max=-1.0).size == 0


def test_offspring_support_and_translation():
    rng = np.random.default_rng(1)
    for parent in (-2.0, 0.0, 3.5):
        for _ in range(200):
            kids = sample_normalized_offspring(parent, rng, v_max=5.0)
            if kids.size:
                assert np.all(kids >= parent - 1.0)
                assert np.all(kids <= parent + 5.0)


def test_offspring_mean_count():
    rng = np.random.default_rng(2)
    draws = 20000
    counts = [sample_normalized_offspring(0.0, rng).size for _ in range(draws)]
    mean = np.mean(counts)
    target = (DEFAULT_V_MAX + 1.0) / math.e
    assert math.isclose(target, 7.7255, abs_tol=1e-3)
    assert abs(mean - target) <= 3.0 * math.sqrt(target / draws)


def test_offspring_law_dataclass():
    law = NormalizedOffspringLaw(v_max=20.0)
    assert math.isclose(law.mean_offspring, 21.0 / math.e, rel_tol=1e-12)
    assert law.truncation_bound < 1e-7  # e^-20 * 22
    with pytest.raises(ConfigurationError):
        NormalizedOffspringLaw(v_max=-2.0)


def test_D0_is_zero():
    traj = simulate_Dn(0, np.random.default_rng(3))
    assert traj.values[0] == 0.0
    assert traj.generation_sizes[0] == 1


def test_hand_built_generation_weight():
    positions = np.array([-0.5, 1.0])
    expected = -0.5 * math.exp(0.5) + 1.0 * math.exp(-1.0)
    assert math.isclose(derivative_weight(positions), expected, rel_tol=1e-15)
    assert math.isclose(expected, -0.456481, abs_tol=1e-6)
    assert derivative_weight(np.empty(0)) == 0.0


def test_streaming_and_posthoc_sums_agree_exactly():
    traj = simulate_Dn(4, np.random.default_rng(4), keep_positions=True)
    for gen, pos in enumerate(traj.positions):
        assert derivative_weight(pos) == traj.values[gen]
        assert len(pos) == traj.generation_sizes[gen]


def test_martingale_has_zero_mean():
    # E[D_n] = D_0 = 0; checked on the exact process at small n
    trials = 3000
    d1 = np.empty(trials)
    d2 = np.empty(trials)
    for i in range(trials):
        traj = simulate_Dn(2, np.random.default_rng((5, i)))
        d1[i], d2[i] = traj.values[1], traj.values[2]
    for sample in (d1, d2):
        sem = sample.std() / math.sqrt(trials)
        assert abs(sample.mean()) <= 3.0 * sem


def test_survival_fraction_matches_galton_watson():
    # extinction probability of Poisson(21/e) offspring: q = exp(-m (1 - q))
    m = (DEFAULT_V_MAX + 1.0) / math.e
    q = 0.5
    for _ in range(200):
        q = math.exp(-m * (1.0 - q))
    trials = 2000
    dead = sum(
        not simulate_Dn(3, np.random.default_rng((6, i))).survived
        for i in range(trials)
    )
    assert abs(dead / trials - q) <= 3.0 * math.sqrt(q * (1 - q) / trials) + 1e-3


def test_displacement_cutoff_insensitivity():
    # doubling v_max leaves the D_3 law unchanged within Monte Carlo error
    # (the neglected intensity mass is e^-20 (20+2) < 1e-7)
    trials = 1200
    d20 = np.array([
        simulate_Dn(3, np.random.default_rng((9, 0, i)), v_max=20.0).values[3]
        for i in range(trials)
    ])
    d40 = np.array([
        simulate_Dn(3, np.random.default_rng((9, 1, i)), v_max=40.0).values[3]
        for i in range(trials)
    ])
    sem = math.sqrt(d20.var() / trials + d40.var() / trials)
    assert abs(d20.mean() - d40.mean()) <= 3.0 * sem
    assert math.exp(-20.0) * 22.0 < 1e-7


def test_truncation_flag_fires_with_small_cap():
    traj = simulate_Dn(6, np.random.default_rng(7), particle_cap=50)
    assert traj.truncated
    assert not traj.survived
    assert traj.values[-1] == 0.0


def test_pruned_run_is_bounded_and_positive_on_survival():
    rng = np.random.default_rng(8)
    traj = simulate_Dn(40, rng, prune_window=6.0)
    barrier = prune_barrier(40, 6.0)
    assert barrier > 6.0
    assert np.max(traj.generation_sizes) < 50000
    if traj.survived:
        assert np.median(traj.values[10:]) > 0.0


def test_extinct_trajectory_stays_zero():
    # prune everything below the root: population dies immediately
    traj = simulate_Dn(5, np.random.default_rng(9), v_max=-0.999999)
    assert not traj.survived
    assert np.all(traj.values[1:] == 0.0)
    assert np.all(traj.generation_sizes[1:] == 0)


def test_equivalence_check_preconditions(d001_n200_probe_run):
    coarse = run_recursion(
        RecursionConfig(delta=0.01, x_max=80.0, n_max=200),
        snapshot_generations=(99, 199),
    )
    with pytest.raises(ConfigurationError):
        equivalence_check(coarse, [0.0])
    short = run_recursion(
        RecursionConfig(delta=0.001, x_max=80.0, n_max=199),
        snapshot_generations=(99, 150),
    )
    with pytest.raises(ConfigurationError):
        equivalence_check(short, [0.0])


def test_limit_law_probe_values(d001_n200_probe_run):
    probe = equivalence_check(d001_n200_probe_run, [-1.0, 0.0, 1.0, 3.0])
    assert probe.values.shape == (4, 3)
    # monotone in the offset x (P is non-increasing in its argument):
    # large negative offsets approach 1, large positive approach 0
    col_means = probe.values.mean(axis=1)
    assert np.all(np.diff(col_means) < 0.0)
    assert col_means[0] > 0.85
    assert col_means[-1] < 0.15
    # Cauchy-style spread across generations is small at x = 0
    i0 = list(probe.x_grid).index(0.0)
    assert probe.spread[i0] < 0.05
    assert 0.0 < probe.values[i0].min() and probe.values[i0].max() < 1.0
