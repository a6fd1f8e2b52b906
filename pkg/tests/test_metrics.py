from collections import deque

import numpy as np
import pytest
import scipy.stats

from multinet.metrics import (
    CentralityReport, betweenness_centrality, centrality_alpha_sweep,
    degree_centrality,
)
from multinet.netcore import AdjacencyMatrix, DynamicNetwork, MultiLayerGraph, Partition


def binary(entries):
    return AdjacencyMatrix(np.asarray(entries, dtype=float), kind="binary")


def graph_from_edges(p, edges):
    a = np.zeros((p, p))
    for i, j in edges:
        a[i, j] = a[j, i] = 1.0
    return binary(a)


def star(p, center=0):
    return graph_from_edges(p, [(center, j) for j in range(p) if j != center])


def _bfs(entries, s):
    p = entries.shape[0]
    dist = np.full(p, -1)
    sigma = np.zeros(p)
    preds = [[] for _ in range(p)]
    dist[s] = 0
    sigma[s] = 1.0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in np.flatnonzero(entries[v]):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(int(w))
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return dist, sigma, preds


def enumerated_betweenness(entries):
    """Oracle: explicitly list every shortest path and count interiors."""
    p = entries.shape[0]
    bc = np.zeros(p)
    for s in range(p):
        dist, _, preds = _bfs(entries, s)
        for t in range(s + 1, p):
            if dist[t] < 0:
                continue
            paths = []
            stack = [(t, (t,))]
            while stack:
                v, path = stack.pop()
                if v == s:
                    paths.append(path)
                    continue
                for u in preds[v]:
                    stack.append((u, path + (u,)))
            share = 1.0 / len(paths)
            for path in paths:
                for v in path[1:-1]:
                    bc[v] += share
    return bc


def sigma_product_betweenness(entries):
    """Oracle: sigma_st(v) = sigma_sv * sigma_vt when v sits on a geodesic."""
    p = entries.shape[0]
    dist = np.empty((p, p), dtype=int)
    sigma = np.empty((p, p))
    for s in range(p):
        dist[s], sigma[s], _ = _bfs(entries, s)
    bc = np.zeros(p)
    for s in range(p):
        for t in range(s + 1, p):
            if dist[s, t] < 0:
                continue
            for v in range(p):
                if v == s or v == t:
                    continue
                if (dist[s, v] >= 0 and dist[v, t] >= 0
                        and dist[s, v] + dist[v, t] == dist[s, t]):
                    bc[v] += sigma[s, v] * sigma[v, t] / sigma[s, t]
    return bc


# ---------------------------------------------------------------- degree


def test_degree_star():
    deg = degree_centrality(star(5))
    assert deg.tolist() == [1.0, 0.25, 0.25, 0.25, 0.25]


def test_degree_complete_and_empty():
    assert np.all(degree_centrality(graph_from_edges(
        4, [(i, j) for i in range(4) for j in range(i + 1, 4)])) == 1.0)
    assert np.all(degree_centrality(binary(np.zeros((4, 4)))) == 0.0)


def test_degree_sum_identity():
    rng = np.random.default_rng(3)
    p = 15
    a = (rng.random((p, p)) < 0.3).astype(float)
    a = np.triu(a, 1)
    a += a.T
    g = binary(a)
    edges = a.sum() / 2.0
    assert degree_centrality(g).sum() == pytest.approx(2.0 * edges / (p - 1))


def test_degree_validation():
    with pytest.raises(ValueError, match="binary"):
        degree_centrality(AdjacencyMatrix(np.array([[0.0, 0.5], [0.5, 0.0]])))
    with pytest.raises(ValueError, match="p >= 2"):
        degree_centrality(binary(np.zeros((1, 1))))


# ---------------------------------------------------------------- betweenness


def test_betweenness_path_middle():
    bc = betweenness_centrality(graph_from_edges(3, [(0, 1), (1, 2)]))
    assert bc.tolist() == [0.0, 1.0, 0.0]


def test_betweenness_star_center():
    bc = betweenness_centrality(star(5))
    assert bc.tolist() == [6.0, 0.0, 0.0, 0.0, 0.0]


def test_betweenness_cycle_shares_pairs():
    bc = betweenness_centrality(graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert np.allclose(bc, 0.5)


def test_betweenness_complete_zero():
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    assert np.all(betweenness_centrality(graph_from_edges(5, edges)) == 0.0)


def test_betweenness_disconnected_components():
    g = graph_from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    bc = betweenness_centrality(g)
    assert bc.tolist() == [0.0, 1.0, 0.0, 0.0, 1.0, 0.0]


def test_betweenness_normalized_star():
    bc = betweenness_centrality(star(5), normalized=True)
    assert bc[0] == 1.0


def test_betweenness_matches_enumeration_oracle():
    rng = np.random.default_rng(18)
    for _ in range(4):
        p = 12
        a = (rng.random((p, p)) < 0.25).astype(float)
        a = np.triu(a, 1)
        a += a.T
        got = betweenness_centrality(binary(a))
        want = enumerated_betweenness(a)
        assert np.allclose(got, want, atol=1e-10)


def test_betweenness_matches_sigma_product_oracle():
    rng = np.random.default_rng(27)
    for density in (0.1, 0.2, 0.4):
        p = 30
        a = (rng.random((p, p)) < density).astype(float)
        a = np.triu(a, 1)
        a += a.T
        got = betweenness_centrality(binary(a))
        want = sigma_product_betweenness(a)
        assert np.allclose(got, want, atol=1e-9)


def test_betweenness_permutation_invariance():
    rng = np.random.default_rng(5)
    p = 20
    a = (rng.random((p, p)) < 0.2).astype(float)
    a = np.triu(a, 1)
    a += a.T
    perm = rng.permutation(p)
    base = betweenness_centrality(binary(a))
    permuted = betweenness_centrality(binary(a[np.ix_(perm, perm)]))
    assert np.allclose(base[perm], permuted, atol=1e-10)


def test_betweenness_validation():
    with pytest.raises(ValueError, match="binary"):
        betweenness_centrality(AdjacencyMatrix(np.array([[0.0, 0.5], [0.5, 0.0]])))
    with pytest.raises(ValueError, match="p >= 3"):
        betweenness_centrality(binary(np.zeros((2, 2))), normalized=True)


# ---------------------------------------------------------------- sweep


def two_star_network(p=12, weeks=2):
    snaps = tuple(
        MultiLayerGraph((star(p, center=0), star(p, center=p // 2)))
        for _ in range(weeks)
    )
    return DynamicNetwork(snaps, tuple(f"{t:04d}" for t in range(weeks)))


def two_class_partition(p=12):
    half = p // 2
    return Partition(tuple([0] * half + [1] * half), num_classes=2)


def test_sweep_endpoints_are_pure_layers():
    net = two_star_network()
    c = two_class_partition()
    reports = centrality_alpha_sweep(net, c, [0.0, 1.0], measure="betweenness")
    by_key = {(r.time, r.alpha): r for r in reports}
    want1 = betweenness_centrality(net.snapshots[0].layers[0])
    want2 = betweenness_centrality(net.snapshots[0].layers[1])
    assert np.array_equal(by_key[("0000", 1.0)].per_vertex, want1)
    assert np.array_equal(by_key[("0000", 0.0)].per_vertex, want2)
    assert np.all(by_key[("0000", 0.0)].per_class_se == 0.0)


def test_sweep_endpoints_independent_of_seed():
    net = two_star_network()
    c = two_class_partition()
    r1 = centrality_alpha_sweep(net, c, [0.0, 1.0], seed=1)
    r2 = centrality_alpha_sweep(net, c, [0.0, 1.0], seed=2)
    for a, b in zip(r1, r2):
        assert np.array_equal(a.per_vertex, b.per_vertex)


def test_sweep_deterministic_per_seed():
    net = two_star_network()
    c = two_class_partition()
    r1 = centrality_alpha_sweep(net, c, [0.5], seed=7, draws=5)
    r2 = centrality_alpha_sweep(net, c, [0.5], seed=7, draws=5)
    assert np.array_equal(r1[0].per_vertex, r2[0].per_vertex)
    r3 = centrality_alpha_sweep(net, c, [0.5], seed=8, draws=5)
    assert not np.array_equal(r1[0].per_vertex, r3[0].per_vertex)


def test_sweep_class_degree_monotone_in_alpha():
    # layer 1 is a star on a class-0 hub: class-0 degree grows with alpha
    net = two_star_network(weeks=1)
    c = two_class_partition()
    alphas = [0.0, 0.25, 0.5, 0.75, 1.0]
    reports = centrality_alpha_sweep(net, c, alphas, measure="degree",
                                     seed=0, draws=200)
    means = [r.per_class[0] for r in reports]
    rho = scipy.stats.spearmanr(alphas, means).statistic
    assert rho > 0.9


def test_sweep_interior_se_positive():
    net = two_star_network(weeks=1)
    c = two_class_partition()
    reports = centrality_alpha_sweep(net, c, [0.5], measure="degree",
                                     seed=3, draws=25)
    assert float(reports[0].per_class_se.max()) > 0.0


def test_sweep_validation():
    net = two_star_network()
    c = two_class_partition()
    with pytest.raises(ValueError, match="draws"):
        centrality_alpha_sweep(net, c, [0.5], draws=0)
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        centrality_alpha_sweep(net, c, [1.5])
    with pytest.raises(ValueError, match="measure"):
        centrality_alpha_sweep(net, c, [0.5], measure="pagerank")
    with pytest.raises(ValueError, match="cover"):
        centrality_alpha_sweep(net, Partition((0, 1), num_classes=2), [0.5])
    single = DynamicNetwork(
        (MultiLayerGraph((star(4),)),), ("0000",))
    with pytest.raises(ValueError, match="two-layer"):
        centrality_alpha_sweep(single, Partition((0, 0, 1, 1), num_classes=2), [0.5])


def test_report_rejects_negative_values():
    with pytest.raises(ValueError, match="nonnegative"):
        CentralityReport(measure="degree", per_vertex=np.array([-0.1]),
                         per_class=np.array([0.0]), per_class_se=np.array([0.0]),
                         time="0000", alpha=0.5)
