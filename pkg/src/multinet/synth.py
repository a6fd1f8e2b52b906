"""Planted-partition synthesis and the Monte-Carlo fusion-clustering experiment.

A base weighted graph with equal-size planted blocks is corrupted twice to
form two noisy layers; layers are fused across a beta grid, clustered, and
scored by ARI against the planted partition, averaged over seeded trials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._seeds import substream
from .clustering import SpectralConfig, adjusted_rand_index, spectral_cluster
from .fusion import fuse_linear
from .netcore import AdjacencyMatrix, Partition, WEIGHTED


@dataclass(frozen=True)
class PlantedClusterSpec:
    num_vertices: int = 500
    num_clusters: int = 10
    intra_mean: float = 5.0
    intra_std: float = 0.5
    inter_mean: float = 4.7
    inter_std: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.num_clusters < 1 or self.num_vertices < 1:
            raise ValueError("need positive vertex and cluster counts")
        if self.num_vertices % self.num_clusters != 0:
            raise ValueError(
                f"num_clusters {self.num_clusters} must divide "
                f"num_vertices {self.num_vertices}"
            )
        if self.intra_std < 0 or self.inter_std < 0:
            raise ValueError("std values must be nonnegative")


@dataclass(frozen=True)
class NoiseSpec:
    sigma1: float
    sigma2: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma1 < 0 or self.sigma2 < 0:
            raise ValueError("noise scales must be nonnegative")


def planted_partition(spec: PlantedClusterSpec) -> Partition:
    size = spec.num_vertices // spec.num_clusters
    return Partition(
        assignment=tuple(v // size for v in range(spec.num_vertices)),
        num_classes=spec.num_clusters,
    )


def planted_graph(spec: PlantedClusterSpec, rng: np.random.Generator | None = None):
    """Weighted graph with equal-size planted blocks and its ground truth.

    Every unordered pair draws an independent normal weight, intra-block
    versus inter-block by planted co-membership, mirrored for symmetry.
    """
    truth = planted_partition(spec)
    p = spec.num_vertices
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    iu = np.triu_indices(p, k=1)
    labels = np.asarray(truth.assignment)
    same_block = labels[iu[0]] == labels[iu[1]]
    means = np.where(same_block, spec.intra_mean, spec.inter_mean)
    stds = np.where(same_block, spec.intra_std, spec.inter_std)
    weights = means + stds * rng.standard_normal(iu[0].size)
    entries = np.zeros((p, p))
    entries[iu] = weights
    entries += entries.T
    return AdjacencyMatrix(entries, kind=WEIGHTED), truth


def corrupt(a: AdjacencyMatrix, sigma: float, seed) -> AdjacencyMatrix:
    """Add one N(0, sigma^2) draw per unordered pair, mirrored; sigma=0 is identity."""
    if a.kind != WEIGHTED:
        raise ValueError("corrupt expects a weighted adjacency")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0.0:
        return a
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = a.num_vertices
    iu = np.triu_indices(p, k=1)
    noise = np.zeros((p, p))
    noise[iu] = sigma * rng.standard_normal(iu[0].size)
    noise += noise.T
    return AdjacencyMatrix(a.entries + noise, kind=WEIGHTED)


def _experiment_trial(spec: PlantedClusterSpec, noise: NoiseSpec, betas,
                      trial: int, independent_bases: bool) -> np.ndarray:
    base_rng = substream(spec.seed, "base", trial)
    base1, truth = planted_graph(spec, rng=base_rng)
    if independent_bases:
        base2, _ = planted_graph(spec, rng=substream(spec.seed, "base2", trial))
    else:
        base2 = base1
    w1 = corrupt(base1, noise.sigma1, substream(noise.seed, "noise1", trial))
    w2 = corrupt(base2, noise.sigma2, substream(noise.seed, "noise2", trial))
    scores = np.empty(len(betas))
    for bi, beta in enumerate(betas):
        fused = fuse_linear(w1, w2, float(beta))
        kseed = int(substream(noise.seed, "kmeans", trial, bi).integers(2**62))
        cfg = SpectralConfig(num_clusters=spec.num_clusters, seed=kseed)
        labels = spectral_cluster(fused, cfg)
        scores[bi] = adjusted_rand_index(labels, truth)
    return scores


def run_clustering_experiment(spec: PlantedClusterSpec, noise: NoiseSpec,
                              betas, trials: int,
                              independent_bases: bool = False) -> list:
    """Mean ARI per beta over seeded Monte-Carlo trials.

    Returns rows (sigma2, beta, mean_ari, se_ari). Fully determined by
    spec.seed and noise.seed; per-trial streams are keyed by
    (seed, purpose, trial) so any cell is reproducible in isolation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    betas = [float(b) for b in betas]
    if not betas:
        raise ValueError("need at least one beta")
    if any(not (0.0 <= b <= 1.0) for b in betas):
        raise ValueError("betas must lie in [0, 1]")
    all_scores = np.empty((trials, len(betas)))
    for trial in range(trials):
        all_scores[trial] = _experiment_trial(spec, noise, betas, trial,
                                              independent_bases)
    mean = all_scores.mean(axis=0)
    if trials > 1:
        se = all_scores.std(axis=0, ddof=1) / np.sqrt(trials)
    else:
        se = np.zeros(len(betas))
    return [
        (noise.sigma2, beta, float(m), float(s))
        for beta, m, s in zip(betas, mean, se)
    ]
