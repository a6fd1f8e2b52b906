import math

import numpy as np
import pytest

from multinet.netcore import AdjacencyMatrix
from multinet.synth import (
    NoiseSpec, PlantedClusterSpec, corrupt, planted_graph, planted_partition,
    run_clustering_experiment,
)


def small_spec(**overrides):
    base = dict(num_vertices=60, num_clusters=3,
                intra_mean=5.0, intra_std=0.1, inter_mean=4.4, inter_std=0.1,
                seed=0)
    base.update(overrides)
    return PlantedClusterSpec(**base)


# ---------------------------------------------------------------- generation


def test_planted_partition_blocks_are_contiguous():
    truth = planted_partition(PlantedClusterSpec(num_vertices=9, num_clusters=3))
    assert truth.assignment == (0, 0, 0, 1, 1, 1, 2, 2, 2)


def test_planted_spec_divisibility():
    with pytest.raises(ValueError, match="divide"):
        PlantedClusterSpec(num_vertices=10, num_clusters=3)


def test_planted_spec_negative_std_rejected():
    with pytest.raises(ValueError, match="nonnegative"):
        PlantedClusterSpec(num_vertices=10, num_clusters=2, intra_std=-0.1)


def test_planted_graph_zero_std_is_block_constant():
    spec = PlantedClusterSpec(num_vertices=6, num_clusters=2,
                              intra_mean=5.0, intra_std=0.0,
                              inter_mean=4.7, inter_std=0.0)
    g, truth = planted_graph(spec)
    labels = np.array(truth.assignment)
    same = labels[:, None] == labels[None, :]
    off = ~np.eye(6, dtype=bool)
    assert np.all(g.entries[same & off] == 5.0)
    assert np.all(g.entries[~same] == 4.7)


def test_planted_graph_intra_mean_concentrates():
    spec = small_spec(num_vertices=120, intra_std=0.5, inter_std=0.5)
    g, truth = planted_graph(spec, rng=np.random.default_rng(77))
    labels = np.array(truth.assignment)
    iu = np.triu_indices(120, k=1)
    same = labels[iu[0]] == labels[iu[1]]
    intra = g.entries[iu][same]
    se = 0.5 / math.sqrt(intra.size)
    assert abs(float(intra.mean()) - 5.0) < 3.0 * se


def test_planted_graph_seeded_determinism():
    spec = small_spec(seed=9)
    g1, _ = planted_graph(spec)
    g2, _ = planted_graph(spec)
    assert np.array_equal(g1.entries, g2.entries)
    g3, _ = planted_graph(small_spec(seed=10))
    assert not np.array_equal(g1.entries, g3.entries)


# ---------------------------------------------------------------- corruption


def test_corrupt_zero_sigma_returns_same_object():
    g, _ = planted_graph(small_spec())
    assert corrupt(g, 0.0, 1) is g


def test_corrupt_rejects_binary_layers():
    a = AdjacencyMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), kind="binary")
    with pytest.raises(ValueError, match="weighted"):
        corrupt(a, 1.0, 0)


def test_corrupt_rejects_negative_sigma():
    g, _ = planted_graph(small_spec())
    with pytest.raises(ValueError, match="nonnegative"):
        corrupt(g, -1.0, 0)


def test_corrupt_perturbation_is_half_normal_in_magnitude():
    g, _ = planted_graph(small_spec(num_vertices=120))
    sigma = 0.8
    noisy = corrupt(g, sigma, 5)
    iu = np.triu_indices(120, k=1)
    deltas = np.abs(noisy.entries - g.entries)[iu]
    expected = sigma * math.sqrt(2.0 / math.pi)
    se = sigma / math.sqrt(deltas.size)
    assert abs(float(deltas.mean()) - expected) < 4.0 * se
    assert np.allclose(noisy.entries, noisy.entries.T)


def test_corrupt_twice_doubles_variance():
    g, _ = planted_graph(small_spec(num_vertices=150))
    sigma = 0.6
    twice = corrupt(corrupt(g, sigma, 11), sigma, 12)
    iu = np.triu_indices(150, k=1)
    sq = (twice.entries - g.entries)[iu] ** 2
    target = 2.0 * sigma ** 2
    se = target * math.sqrt(2.0 / sq.size)
    assert abs(float(sq.mean()) - target) < 4.0 * se


def test_corrupt_generator_seed_matches_int_seed():
    g, _ = planted_graph(small_spec())
    a = corrupt(g, 0.5, 42)
    b = corrupt(g, 0.5, np.random.default_rng(42))
    assert np.array_equal(a.entries, b.entries)


# ---------------------------------------------------------------- experiment


def run_small(betas, trials=4, sigma1=0.4, sigma2=0.4, **spec_overrides):
    return run_clustering_experiment(
        small_spec(**spec_overrides), NoiseSpec(sigma1=sigma1, sigma2=sigma2, seed=1),
        betas, trials=trials,
    )


def test_experiment_rows_shape_and_order():
    betas = [0.0, 0.5, 1.0]
    rows = run_small(betas, trials=2)
    assert [r[1] for r in rows] == betas
    assert all(r[0] == 0.4 for r in rows)
    for _, _, mean, se in rows:
        assert -0.5 <= mean <= 1.0
        assert se >= 0.0


def test_experiment_deterministic():
    betas = [0.2, 0.8]
    assert run_small(betas) == run_small(betas)


def test_experiment_symmetric_noise_gives_symmetric_curve():
    # paired betas have identical sampling distributions when sigma1 == sigma2
    betas = [0.2, 0.35, 0.65, 0.8]
    rows = run_small(betas, trials=6, sigma1=0.8, sigma2=0.8)
    by_beta = {r[1]: r for r in rows}
    for b in (0.2, 0.35):
        _, _, m1, s1 = by_beta[b]
        _, _, m2, s2 = by_beta[round(1.0 - b, 10)]
        assert abs(m1 - m2) < 2.0 * (s1 + s2) + 1e-9


def test_experiment_single_trial_zero_se():
    rows = run_small([0.5], trials=1)
    assert rows[0][3] == 0.0


def test_experiment_low_noise_recovers_at_midpoint():
    rows = run_small([0.5], trials=3, sigma1=0.05, sigma2=0.05)
    assert rows[0][2] > 0.99


def test_experiment_validation():
    with pytest.raises(ValueError, match="trials"):
        run_small([0.5], trials=0)
    with pytest.raises(ValueError, match="at least one beta"):
        run_small([])
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        run_small([1.5])


def test_experiment_independent_bases_changes_results():
    spec = small_spec()
    noise = NoiseSpec(sigma1=1.0, sigma2=1.0, seed=1)
    betas = [0.3, 0.5, 0.7]
    shared = run_clustering_experiment(spec, noise, betas, trials=3)
    indep = run_clustering_experiment(spec, noise, betas, trials=3,
                                      independent_bases=True)
    assert shared != indep
