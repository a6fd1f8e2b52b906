"""Spectral clustering on the unnormalized Laplacian, plus ARI scoring.

The Laplacian is L = D - A with D the diagonal of row sums. Noisy fused
weights may be negative; no clipping is applied and the k algebraically
smallest eigenvalues are used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .netcore import AdjacencyMatrix, Partition


@dataclass(frozen=True)
class SpectralConfig:
    num_clusters: int
    kmeans_restarts: int = 10
    kmeans_max_iters: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.num_clusters < 2:
            raise ValueError("num_clusters must be >= 2")
        if self.kmeans_restarts < 1:
            raise ValueError("kmeans_restarts must be >= 1")
        if self.kmeans_max_iters < 1:
            raise ValueError("kmeans_max_iters must be >= 1")


def laplacian(a: AdjacencyMatrix) -> np.ndarray:
    """Unnormalized graph Laplacian L = D - A; rows sum to zero."""
    entries = a.entries
    return np.diag(entries.sum(axis=1)) - entries


def _pairwise_sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    sq = (x * x).sum(axis=1)[:, None] + (centers * centers).sum(axis=1)[None, :]
    d2 = sq - 2.0 * (x @ centers.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def _farthest_point_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    p = x.shape[0]
    chosen = [int(rng.integers(p))]
    min_d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(k - 1):
        nxt = int(np.argmax(min_d2))
        chosen.append(nxt)
        min_d2 = np.minimum(min_d2, ((x - x[nxt]) ** 2).sum(axis=1))
    return x[chosen].copy()


def _kmeans_once(x: np.ndarray, k: int, rng: np.random.Generator, max_iters: int):
    centers = _farthest_point_init(x, k, rng)
    labels = np.full(x.shape[0], -1)
    for _ in range(max_iters):
        d2 = _pairwise_sq_dists(x, centers)
        new_labels = d2.argmin(axis=1)
        # keep empty clusters alive: seed each with the point farthest from
        # its current center, so k centers always survive
        for c in range(k):
            if not (new_labels == c).any():
                far = int(np.argmax(d2[np.arange(len(new_labels)), new_labels]))
                new_labels[far] = c
                d2[far, :] = 0.0
        if (new_labels == labels).all():
            break
        labels = new_labels
        for c in range(k):
            centers[c] = x[labels == c].mean(axis=0)
    inertia = float(_pairwise_sq_dists(x, centers)[np.arange(x.shape[0]), labels].sum())
    return labels, inertia


def _kmeans(x: np.ndarray, k: int, seed: int, restarts: int, max_iters: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    best_labels, best_inertia = None, np.inf
    for _ in range(restarts):
        labels, inertia = _kmeans_once(x, k, rng, max_iters)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels


def spectral_cluster(a: AdjacencyMatrix, cfg: SpectralConfig) -> Partition:
    """Cluster vertices via the k bottom eigenvectors of the Laplacian.

    Deterministic given cfg.seed: k-means runs cfg.kmeans_restarts times
    with farthest-point initialization and keeps the best-inertia labeling.
    """
    p = a.num_vertices
    k = cfg.num_clusters
    if k > p:
        raise ValueError(f"num_clusters {k} exceeds vertex count {p}")
    lap = laplacian(a)
    try:
        _, vecs = scipy.linalg.eigh(lap, subset_by_index=(0, k - 1))
    except scipy.linalg.LinAlgError as exc:
        raise ValueError(f"eigensolver failed on {p}x{p} Laplacian: {exc}") from exc
    labels = _kmeans(vecs, k, cfg.seed, cfg.kmeans_restarts, cfg.kmeans_max_iters)
    return Partition(assignment=tuple(int(l) for l in labels), num_classes=k)


def _comb2(x: int) -> int:
    return x * (x - 1) // 2


def adjusted_rand_index(a: Partition, b: Partition) -> float:
    """Hubert-Arabie ARI from the label contingency table.

    Computed in exact integer arithmetic with a single final division, so
    hand-derivable fixtures match to float precision.
    """
    if len(a) != len(b):
        raise ValueError(f"partition length mismatch: {len(a)} vs {len(b)}")
    p = len(a)
    if p < 2:
        raise ValueError("ARI needs at least 2 elements")
    contingency = np.zeros((a.num_classes, b.num_classes), dtype=np.int64)
    for la, lb in zip(a.assignment, b.assignment):
        contingency[la, lb] += 1
    sum_comb = int(sum(_comb2(int(n)) for n in contingency.ravel()))
    comb_a = int(sum(_comb2(int(n)) for n in contingency.sum(axis=1)))
    comb_b = int(sum(_comb2(int(n)) for n in contingency.sum(axis=0)))
    total = _comb2(p)
    numerator = 2 * total * sum_comb - 2 * comb_a * comb_b
    denominator = total * (comb_a + comb_b) - 2 * comb_a * comb_b
    if denominator == 0:
        return 1.0 if numerator == 0 else 0.0
    return numerator / denominator
