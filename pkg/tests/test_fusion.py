import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from multinet.fusion import (
    GaussianLayerModel, MixtureParams, fuse_binary, fuse_linear,
    log_mixture_objective, map_estimate_gaussian, mixture_objective,
)
from multinet.netcore import AdjacencyMatrix, BINARY

from conftest import random_binary, random_weighted

UNIT = MixtureParams(gamma1=1.0, gamma2=1.0)


def segment_grid_oracle(w1, w2, model, params, num=10001):
    """Dense beta grid over the segment; independent of the optimizer."""
    betas = np.linspace(0.0, 1.0, num)
    values = [
        log_mixture_objective(b * w1 + (1.0 - b) * w2, w1, w2, model, params)
        for b in betas
    ]
    best = int(np.argmax(values))
    return betas[best], values[best]


def test_mixture_params_validation():
    with pytest.raises(ValueError, match="both"):
        MixtureParams(gamma1=0.0, gamma2=0.0)
    with pytest.raises(ValueError, match="nonnegative"):
        MixtureParams(gamma1=-1.0, gamma2=1.0)
    with pytest.raises(ValueError, match="alpha"):
        MixtureParams(gamma1=1.0, gamma2=1.0, alpha=1.5)


def test_from_alpha_maps_weights():
    p = MixtureParams.from_alpha(0.3)
    assert p.gamma1 == 0.3
    assert p.gamma2 == 0.7
    assert p.xi == 0.3


def test_fuse_linear_affine_arithmetic():
    w1 = AdjacencyMatrix(np.array([[0.0, 2.0], [2.0, 0.0]]))
    w2 = AdjacencyMatrix(np.array([[0.0, 4.0], [4.0, 0.0]]))
    fused = fuse_linear(w1, w2, 0.25)
    assert fused.entries[0, 1] == 3.5


def test_fuse_linear_endpoints_return_inputs():
    w1 = random_weighted(5, seed=1)
    w2 = random_weighted(5, seed=2)
    assert fuse_linear(w1, w2, 1.0) is w1
    assert fuse_linear(w1, w2, 0.0) is w2


def test_fuse_linear_rejects_out_of_range_beta():
    w = random_weighted(3, seed=3)
    with pytest.raises(ValueError, match="beta"):
        fuse_linear(w, w, 1.2)


@given(st.floats(min_value=0.0, max_value=1.0), st.integers(0, 1000))
def test_fuse_linear_swap_symmetry(beta, seed):
    w1 = random_weighted(4, seed=seed).entries
    w2 = random_weighted(4, seed=seed + 5000).entries
    left = fuse_linear(w1, w2, beta)
    right = fuse_linear(w2, w1, 1.0 - beta)
    assert np.allclose(left, right, atol=1e-12)


def test_mixture_objective_at_shared_mode():
    # w == w1 == w2 puts both densities at their peak: 2 * (2*pi)^(-n/2)
    w = random_weighted(3, seed=4)  # n = 3
    model = GaussianLayerModel(1.0, 1.0)
    value = mixture_objective(w.entries, w.entries, w.entries, model, UNIT)
    assert value == pytest.approx(2.0 * (2.0 * math.pi) ** -1.5, rel=1e-12)


def test_mixture_objective_scalar_hand_value():
    model = GaussianLayerModel(1.0, 1.0)
    value = mixture_objective(np.array([0.0]), np.array([1.0]), np.array([-1.0]),
                              model, UNIT)
    expected = 2.0 * (2.0 * math.pi) ** -0.5 * math.exp(-0.5)
    assert value == pytest.approx(expected, rel=1e-12)
    assert value == pytest.approx(0.48394, abs=1e-5)


def test_mixture_objective_degenerate_weight():
    model = GaussianLayerModel(1.0, 2.0)
    params = MixtureParams(gamma1=0.0, gamma2=3.0)
    w = np.array([0.3, -0.2])
    w2 = np.array([1.0, 0.5])
    value = mixture_objective(w, np.array([9.0, 9.0]), w2, model, params)
    sq = float(np.sum((w - w2) ** 2))
    expected = 3.0 * (2.0 * math.pi * 4.0) ** -1.0 * math.exp(-sq / 8.0)
    assert value == pytest.approx(expected, rel=1e-12)


def test_map_estimate_symmetric_scalar_case():
    # means 2 apart with sigma = sqrt(2): separation below 2*sigma, so the
    # segment objective is unimodal and the midpoint wins
    model = GaussianLayerModel(math.sqrt(2.0), math.sqrt(2.0))
    w1, w2 = np.array([10.0]), np.array([8.0])
    w_hat, beta_hat = map_estimate_gaussian(w1, w2, model, UNIT)
    beta_star, log_star = segment_grid_oracle(w1, w2, model, UNIT)
    assert abs(beta_hat - 0.5) < 1e-4
    assert abs(beta_hat - beta_star) < 1e-4
    attained = log_mixture_objective(w_hat, w1, w2, model, UNIT)
    assert attained >= log_star - 1e-9
    assert w_hat[0] == pytest.approx(9.0, abs=1e-3)


def test_map_estimate_equal_inputs_convention():
    w = random_weighted(4, seed=5)
    model = GaussianLayerModel(1.0, 1.0)
    w_hat, beta_hat = map_estimate_gaussian(w, w, model, UNIT)
    assert beta_hat == 0.5
    assert np.array_equal(w_hat.entries, w.entries)


def test_map_estimate_single_model_limit():
    model = GaussianLayerModel(1.0, 1.0)
    params = MixtureParams(gamma1=1.0, gamma2=0.0)
    w1, w2 = np.array([3.0, 1.0]), np.array([-2.0, 0.5])
    w_hat, beta_hat = map_estimate_gaussian(w1, w2, model, params)
    assert beta_hat == 1.0
    assert np.array_equal(w_hat, w1)


def test_map_estimate_symmetric_parameters_give_half():
    # separation well under 2*sigma keeps the symmetric objective unimodal
    w1 = random_weighted(5, seed=6)
    delta = random_weighted(5, seed=7).entries.copy()
    delta *= 0.3 / np.linalg.norm(delta[np.triu_indices(5, k=1)])
    w2 = AdjacencyMatrix(w1.entries + delta)
    model = GaussianLayerModel(1.3, 1.3)
    _, beta_hat = map_estimate_gaussian(w1, w2, model, UNIT)
    assert abs(beta_hat - 0.5) < 1e-6


def test_map_estimate_far_means_symmetric_is_bimodal():
    # beyond 2*sigma the symmetric objective peaks near both endpoints; the
    # optimizer must still attain the segment maximum
    w1 = np.array([10.0, 8.0])
    w2 = np.array([8.0, 10.0])
    model = GaussianLayerModel(0.5, 0.5)
    w_hat, beta_hat = map_estimate_gaussian(w1, w2, model, UNIT)
    assert min(beta_hat, 1.0 - beta_hat) < 0.1
    _, log_star = segment_grid_oracle(w1, w2, model, UNIT)
    assert log_mixture_objective(w_hat, w1, w2, model, UNIT) >= log_star - 1e-9


def test_map_estimate_rejects_bad_tol():
    w = random_weighted(3, seed=8)
    with pytest.raises(ValueError, match="tol"):
        map_estimate_gaussian(w, w, GaussianLayerModel(1.0, 1.0), UNIT, tol=0.0)


def test_map_estimate_rotation_invariance():
    rng = np.random.default_rng(42)
    w1 = rng.normal(size=6)
    w2 = rng.normal(size=6)
    model = GaussianLayerModel(0.8, 1.7)
    params = MixtureParams(gamma1=2.0, gamma2=0.7)
    _, beta_plain = map_estimate_gaussian(w1, w2, model, params)
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    _, beta_rotated = map_estimate_gaussian(q @ w1, q @ w2, model, params)
    # each search localizes the optimum to tol; allow both errors to stack
    assert abs(beta_plain - beta_rotated) <= 2e-6


def test_map_estimate_objective_matches_segment_oracle():
    rng = np.random.default_rng(11)
    for trial in range(10):
        n = int(rng.integers(1, 7))
        w1 = rng.normal(scale=3.0, size=n)
        w2 = rng.normal(scale=3.0, size=n)
        model = GaussianLayerModel(*rng.uniform(0.5, 3.0, size=2))
        params = MixtureParams(*rng.uniform(0.1, 10.0, size=2))
        w_hat, beta_hat = map_estimate_gaussian(w1, w2, model, params)
        _, log_star = segment_grid_oracle(w1, w2, model, params, num=2001)
        attained = log_mixture_objective(w_hat, w1, w2, model, params)
        assert attained >= log_star - 1e-8


def test_projection_monotonicity():
    # objective at the projection onto the w1-w2 line never falls below the
    # objective at the original point
    rng = np.random.default_rng(21)
    model = GaussianLayerModel(1.1, 0.9)
    params = MixtureParams(gamma1=0.6, gamma2=1.8)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        w1 = rng.normal(scale=2.0, size=n)
        w2 = rng.normal(scale=2.0, size=n)
        if np.allclose(w1, w2):
            continue
        w = rng.normal(scale=4.0, size=n)
        direction = w2 - w1
        t = float(np.dot(w - w1, direction) / np.dot(direction, direction))
        projected = w1 + t * direction
        assert (
            log_mixture_objective(projected, w1, w2, model, params)
            >= log_mixture_objective(w, w1, w2, model, params) - 1e-12
        )


def test_fuse_binary_agreement_preserved():
    w1 = random_binary(30, seed=9)
    w2 = random_binary(30, seed=10)
    agree = w1.entries == w2.entries
    for alpha, seed in ((0.0, 1), (0.3, 2), (1.0, 3)):
        fused = fuse_binary(w1, w2, alpha, seed)
        assert np.array_equal(fused.entries[agree], w1.entries[agree])


def test_fuse_binary_deterministic_endpoints():
    w1 = random_binary(20, seed=11)
    w2 = random_binary(20, seed=12)
    assert fuse_binary(w1, w2, 1.0, seed=99) == w1
    assert fuse_binary(w1, w2, 0.0, seed=99) == w2
    assert fuse_binary(w1, w1, 0.37, seed=5) == w1


def test_fuse_binary_seed_reproducible():
    w1 = random_binary(40, seed=13)
    w2 = random_binary(40, seed=14)
    assert fuse_binary(w1, w2, 0.5, seed=7) == fuse_binary(w1, w2, 0.5, seed=7)
    # different seeds almost surely differ on a large disagreement set
    assert fuse_binary(w1, w2, 0.5, seed=7) != fuse_binary(w1, w2, 0.5, seed=8)


def test_fuse_binary_disagreement_fraction_binomial():
    w1 = random_binary(100, seed=15)
    w2 = random_binary(100, seed=16)
    iu = np.triu_indices(100, k=1)
    disagree = w1.entries[iu] != w2.entries[iu]
    count = int(disagree.sum())
    fused = fuse_binary(w1, w2, 0.5, seed=17)
    toward_w1 = int((fused.entries[iu][disagree] == w1.entries[iu][disagree]).sum())
    fraction = toward_w1 / count
    bound = 3.0 * 0.5 / math.sqrt(count)
    assert abs(fraction - 0.5) <= bound


def test_fuse_binary_rejects_weighted_input():
    w = random_weighted(5, seed=18)
    b = random_binary(5, seed=19)
    with pytest.raises(ValueError, match="binary"):
        fuse_binary(w, b, 0.5, seed=0)
