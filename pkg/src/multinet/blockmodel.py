"""Stochastic block model estimation and EKF tracking of its dynamics.

Class memberships are known a priori. Per-snapshot MLEs of the Bernoulli
parameter matrix are mapped through a logit transform and tracked by an
extended Kalman filter with random-walk state dynamics (F = I).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .netcore import AdjacencyMatrix, BINARY, DynamicNetwork, Partition


@dataclass(frozen=True, eq=False)
class BernoulliMatrix:
    """K x K symmetric matrix of class-pair edge probabilities."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
            raise ValueError(f"theta must be square, got shape {theta.shape}")
        if not np.array_equal(theta, theta.T):
            raise ValueError("theta must be symmetric")
        if np.any((theta < 0.0) | (theta > 1.0)) or np.isnan(theta).any():
            raise ValueError("theta entries must lie in [0, 1]")
        theta = np.ascontiguousarray(theta)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def num_classes(self) -> int:
        return self.theta.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BernoulliMatrix):
            return NotImplemented
        return np.array_equal(self.theta, other.theta)


@dataclass(frozen=True, eq=False)
class BlockCounts:
    """Ordered-pair edge counts m and possible-pair counts n per class pair."""

    m: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        n = np.asarray(self.n, dtype=float)
        if m.shape != n.shape or m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("m and n must be square matrices of equal shape")
        if not (np.array_equal(m, m.T) and np.array_equal(n, n.T)):
            raise ValueError("m and n must be symmetric")
        if np.any(m < 0) or np.any(m > n):
            raise ValueError("need 0 <= m_ij <= n_ij")
        for arr, name in ((m, "m"), (n, "n")):
            a = np.ascontiguousarray(arr)
            a.setflags(write=False)
            object.__setattr__(self, name, a)


@dataclass(frozen=True)
class EKFConfig:
    """Noise scales for the random-walk EKF.

    observation_noise_var None selects the per-step binomial default
    r_ij = max(theta_hat*(1-theta_hat)/n_ij, 1e-4). linearized_innovation
    swaps the standard innovation y - h(psi) for the linearized y - H psi.
    """

    process_noise_var: float = 0.01
    observation_noise_var: float | None = None
    initial_covariance_var: float = 1.0
    clamp_epsilon: float = 1e-4
    linearized_innovation: bool = False

    def __post_init__(self):
        if self.process_noise_var < 0.0:
            raise ValueError("process_noise_var must be >= 0")
        if self.observation_noise_var is not None and self.observation_noise_var <= 0.0:
            raise ValueError("observation_noise_var must be positive")
        if self.initial_covariance_var <= 0.0:
            raise ValueError("initial_covariance_var must be positive")
        if not (0.0 < self.clamp_epsilon < 0.5):
            raise ValueError("clamp_epsilon must lie in (0, 0.5)")


@dataclass(frozen=True, eq=False)
class LogitState:
    """EKF state: vectorized logit-Theta and its covariance."""

    psi: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        if psi.ndim != 1:
            raise ValueError("psi must be a vector")
        d = psi.size
        if cov.shape != (d, d):
            raise ValueError(f"covariance shape {cov.shape} does not match psi size {d}")
        if not np.allclose(cov, cov.T, atol=1e-10, rtol=0.0):
            raise ValueError("covariance must be symmetric")
        min_eig = float(np.linalg.eigvalsh(cov).min()) if d else 0.0
        if min_eig < -1e-9:
            raise ValueError(f"covariance not PSD: min eigenvalue {min_eig:.3e}")
        for arr, name in ((psi, "psi"), (cov, "covariance")):
            a = np.ascontiguousarray(arr)
            a.setflags(write=False)
            object.__setattr__(self, name, a)


def _pair_indices(k: int):
    return np.triu_indices(k, k=0)


def pack_symmetric(matrix: np.ndarray) -> np.ndarray:
    """Upper triangle (diagonal included) of a symmetric K x K matrix."""
    matrix = np.asarray(matrix, dtype=float)
    return matrix[_pair_indices(matrix.shape[0])]


def unpack_symmetric(vec: np.ndarray) -> np.ndarray:
    """Inverse of pack_symmetric."""
    vec = np.asarray(vec, dtype=float)
    k = int(round((math.sqrt(8.0 * vec.size + 1.0) - 1.0) / 2.0))
    if k * (k + 1) // 2 != vec.size:
        raise ValueError(f"vector length {vec.size} is not triangular")
    out = np.zeros((k, k))
    iu = _pair_indices(k)
    out[iu] = vec
    out = out + out.T - np.diag(np.diagonal(out))
    return out


def block_counts(a: AdjacencyMatrix, c: Partition) -> BlockCounts:
    """Edge and pair counts per class pair, over ordered vertex pairs x != y."""
    if a.kind != BINARY:
        raise ValueError("block_counts needs a binary adjacency")
    p = a.num_vertices
    if len(c) != p:
        raise ValueError(f"partition covers {len(c)} vertices, graph has {p}")
    sizes = np.bincount(np.array(c.assignment), minlength=c.num_classes)
    if np.any(sizes < 2):
        small = int(np.argmin(sizes))
        raise ValueError(
            f"class {small} has {int(sizes[small])} members; diagonal blocks need >= 2"
        )
    z = np.zeros((p, c.num_classes))
    z[np.arange(p), c.assignment] = 1.0
    m = z.T @ a.entries @ z
    n = np.outer(sizes, sizes) - np.diag(sizes)
    return BlockCounts(m=m, n=n.astype(float))


def sbm_mle(counts: BlockCounts) -> BernoulliMatrix:
    """Entrywise MLE theta_ij = m_ij / n_ij."""
    if np.any(counts.n <= 0):
        raise ValueError("sbm_mle requires all pair counts n_ij > 0")
    return BernoulliMatrix(counts.m / counts.n)


def logit(theta: BernoulliMatrix, clamp_epsilon: float = 1e-4) -> np.ndarray:
    """Vectorized logit of theta with entries clamped to [eps, 1-eps]."""
    if not (0.0 < clamp_epsilon < 0.5):
        raise ValueError("clamp_epsilon must lie in (0, 0.5)")
    clamped = np.clip(pack_symmetric(theta.theta), clamp_epsilon, 1.0 - clamp_epsilon)
    return np.log(clamped) - np.log1p(-clamped)


def inverse_logit(psi: np.ndarray) -> BernoulliMatrix:
    """Entrywise logistic map back to a Bernoulli parameter matrix."""
    psi = np.asarray(psi, dtype=float)
    if not np.isfinite(psi).all():
        raise ValueError("psi must be finite")
    return BernoulliMatrix(unpack_symmetric(_sigmoid(psi)))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def ekf_step(state: LogitState, observation: BernoulliMatrix, cfg: EKFConfig,
             r_diag: np.ndarray | None = None) -> LogitState:
    """One predict-update cycle of the random-walk EKF.

    r_diag optionally supplies a per-entry observation noise diagonal; when
    absent the scalar cfg.observation_noise_var is required.
    """
    d = state.psi.size
    y = pack_symmetric(observation.theta)
    if y.size != d:
        raise ValueError(f"observation size {y.size} does not match state size {d}")
    if r_diag is None:
        if cfg.observation_noise_var is None:
            raise ValueError("need r_diag or a scalar observation_noise_var")
        r = np.full(d, cfg.observation_noise_var)
    else:
        r = np.asarray(r_diag, dtype=float)
        if r.shape != (d,) or np.any(r <= 0):
            raise ValueError("r_diag must be a positive vector matching the state")

    # predict (F = I): mean unchanged, covariance inflated by Q
    p_pred = state.covariance + cfg.process_noise_var * np.eye(d)
    h = _sigmoid(state.psi)
    hd = h * (1.0 - h)

    if cfg.linearized_innovation:
        innovation = y - hd * state.psi
    else:
        innovation = y - h

    s = hd[:, None] * p_pred * hd[None, :] + np.diag(r)
    gain = np.linalg.solve(s, (hd[:, None] * p_pred)).T
    psi_new = state.psi + gain @ innovation
    p_new = (np.eye(d) - gain * hd[None, :]) @ p_pred
    p_new = 0.5 * (p_new + p_new.T)
    return LogitState(psi=psi_new, covariance=p_new)


def _binomial_r(theta_hat: np.ndarray, n_pairs: np.ndarray, floor: float = 1e-4) -> np.ndarray:
    var = theta_hat * (1.0 - theta_hat) / n_pairs
    return np.maximum(var, floor)


def dsbm_track(net: DynamicNetwork, layer_index: int, c: Partition,
               cfg: EKFConfig = EKFConfig()) -> list:
    """Filtered Bernoulli matrices for one layer of a dynamic network.

    The state initializes at the first snapshot's clamped MLE with
    covariance initial_covariance_var * I; later snapshots feed the EKF.
    """
    if not (0 <= layer_index < net.snapshots[0].num_layers):
        raise ValueError(f"layer_index {layer_index} out of range")
    out = []
    state = None
    for graph in net.snapshots:
        counts = block_counts(graph.layers[layer_index], c)
        y = sbm_mle(counts)
        if state is None:
            psi0 = logit(y, cfg.clamp_epsilon)
            d = psi0.size
            state = LogitState(psi=psi0,
                               covariance=cfg.initial_covariance_var * np.eye(d))
        else:
            r_diag = None
            if cfg.observation_noise_var is None:
                r_diag = _binomial_r(pack_symmetric(y.theta), pack_symmetric(counts.n))
            state = ekf_step(state, y, cfg, r_diag=r_diag)
        out.append(inverse_logit(state.psi))
    return out
