"""Centrality measures and the alpha-mixing centrality sweep.

Betweenness uses Brandes' exact accumulation over unweighted shortest
paths. The sweep fuses a two-layer binary dynamic network at each alpha,
averaging interior cells over seeded fusion draws.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ._seeds import substream
from .fusion import fuse_binary
from .netcore import AdjacencyMatrix, BINARY, DynamicNetwork, Partition

MEASURES = ("betweenness", "degree")


def degree_centrality(a: AdjacencyMatrix) -> np.ndarray:
    """Per-vertex degree divided by p - 1."""
    if a.kind != BINARY:
        raise ValueError("degree_centrality needs a binary adjacency")
    p = a.num_vertices
    if p < 2:
        raise ValueError("degree centrality needs p >= 2")
    return a.entries.sum(axis=1) / (p - 1)


def betweenness_centrality(a: AdjacencyMatrix, normalized: bool = False) -> np.ndarray:
    """Exact betweenness over unweighted shortest paths.

    Raw scores sum, per vertex, the fraction of shortest s-t paths through
    it over unordered pairs (s, t) excluding the vertex; disconnected pairs
    contribute nothing. normalized divides by (p-1)(p-2)/2.
    """
    if a.kind != BINARY:
        raise ValueError("betweenness_centrality needs a binary adjacency")
    p = a.num_vertices
    if normalized and p < 3:
        raise ValueError("normalized betweenness needs p >= 3")
    neighbors = [np.flatnonzero(a.entries[v]).tolist() for v in range(p)]
    bc = np.zeros(p)
    for s in range(p):
        # single-source shortest paths: BFS order, path counts, predecessors
        order = []
        preds = [[] for _ in range(p)]
        sigma = np.zeros(p)
        sigma[s] = 1.0
        dist = np.full(p, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in neighbors[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # dependency accumulation in reverse BFS order
        delta = np.zeros(p)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    bc /= 2.0  # each unordered pair was counted from both endpoints
    if normalized:
        bc /= (p - 1) * (p - 2) / 2.0
    return bc


@dataclass(frozen=True, eq=False)
class CentralityReport:
    """Centrality summary for one (window, alpha) cell."""

    measure: str
    per_vertex: np.ndarray
    per_class: np.ndarray
    per_class_se: np.ndarray
    time: str
    alpha: float

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ValueError(f"measure must be one of {MEASURES}")
        for name in ("per_vertex", "per_class", "per_class_se"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if np.any(arr < 0) or np.isnan(arr).any():
                raise ValueError(f"{name} must be nonnegative")
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.per_class.shape != self.per_class_se.shape:
            raise ValueError("per_class and per_class_se must align")


def _class_means(values: np.ndarray, c: Partition) -> np.ndarray:
    labels = np.asarray(c.assignment)
    sums = np.bincount(labels, weights=values, minlength=c.num_classes)
    sizes = np.bincount(labels, minlength=c.num_classes)
    return sums / sizes


def _measure_fn(measure: str):
    if measure == "betweenness":
        return betweenness_centrality
    if measure == "degree":
        return degree_centrality
    raise ValueError(f"measure must be one of {MEASURES}")


def centrality_alpha_sweep(net: DynamicNetwork, c: Partition, alphas,
                           measure: str = "betweenness", seed: int = 0,
                           draws: int = 25) -> list:
    """Per-(window, alpha) centrality of the fused network.

    Endpoint alphas are deterministic (the fused network is a pure layer);
    interior alphas average per-vertex and per-class values over seeded
    fusion draws and report per-class standard errors.
    """
    fn = _measure_fn(measure)
    if draws < 1:
        raise ValueError("draws must be >= 1")
    first = net.snapshots[0]
    if first.num_layers < 2:
        raise ValueError("sweep needs a two-layer network")
    if len(c) != first.num_vertices:
        raise ValueError("partition does not cover the vertex set")
    alphas = [float(x) for x in alphas]
    if any(not (0.0 <= x <= 1.0) for x in alphas):
        raise ValueError("alphas must lie in [0, 1]")
    if np.any(np.bincount(np.asarray(c.assignment), minlength=c.num_classes) == 0):
        raise ValueError("every class needs at least one member")

    reports = []
    for wi, (graph, stamp) in enumerate(zip(net.snapshots, net.timestamps)):
        layer1, layer2 = graph.layers[0], graph.layers[1]
        for ai, alpha in enumerate(alphas):
            if alpha in (0.0, 1.0):
                fused = layer1 if alpha == 1.0 else layer2
                per_vertex = fn(fused)
                per_class = _class_means(per_vertex, c)
                se = np.zeros_like(per_class)
            else:
                vertex_rows = np.empty((draws, first.num_vertices))
                class_rows = np.empty((draws, c.num_classes))
                for d in range(draws):
                    rng = substream(seed, "fuse", wi, ai, d)
                    fused = fuse_binary(layer1, layer2, alpha, rng)
                    vertex_rows[d] = fn(fused)
                    class_rows[d] = _class_means(vertex_rows[d], c)
                per_vertex = vertex_rows.mean(axis=0)
                per_class = class_rows.mean(axis=0)
                if draws > 1:
                    se = class_rows.std(axis=0, ddof=1) / np.sqrt(draws)
                else:
                    se = np.zeros_like(per_class)
            reports.append(CentralityReport(
                measure=measure, per_vertex=per_vertex, per_class=per_class,
                per_class_se=se, time=stamp, alpha=alpha,
            ))
    return reports
