"""MAP fusion of two noisy layers under a two-Gaussian mixture model.

Each observed layer is modeled as an isotropic Gaussian around the unknown
common network. The posterior objective is a weighted mixture of the two
layer likelihoods; its maximizer always lies on the line segment between
the layer matrices, so MAP estimation reduces to a 1-D search in beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .netcore import AdjacencyMatrix, BINARY, WEIGHTED

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GaussianLayerModel:
    """Per-layer isotropic Gaussian noise scales (standard deviations)."""

    sigma1: float
    sigma2: float

    def __post_init__(self):
        if not (self.sigma1 > 0.0 and self.sigma2 > 0.0):
            raise ValueError("noise scales must be positive")


@dataclass(frozen=True)
class MixtureParams:
    """Mixture weights for the two layer likelihoods.

    gamma1/gamma2 weight the layers directly. alpha, xi and beta are
    optional bookkeeping fields for pipelines that track the reliability
    coin, the selector probability, or a fixed fusion coefficient.
    """

    gamma1: float
    gamma2: float
    alpha: float | None = None
    xi: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.gamma1 < 0.0 or self.gamma2 < 0.0:
            raise ValueError("mixture weights must be nonnegative")
        if self.gamma1 == 0.0 and self.gamma2 == 0.0:
            raise ValueError("mixture weights must not both be zero")
        for name in ("alpha", "xi", "beta"):
            value = getattr(self, name)
            if value is not None and not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @classmethod
    def from_alpha(cls, alpha: float) -> "MixtureParams":
        """Reliability-coin parameterization: gamma1 = alpha, gamma2 = 1 - alpha."""
        if not (0.0 <= alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        return cls(gamma1=alpha, gamma2=1.0 - alpha, alpha=alpha, xi=alpha)


def _flatten(w) -> np.ndarray:
    """Free coordinates of an input: 1-D as-is, 2-D via strict upper triangle."""
    if isinstance(w, AdjacencyMatrix):
        w = w.entries
    arr = np.asarray(w, dtype=float)
    if arr.ndim == 1:
        return arr
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        iu = np.triu_indices(arr.shape[0], k=1)
        return arr[iu]
    raise ValueError(f"expected vector or square matrix, got shape {arr.shape}")


def _log_gaussian(w: np.ndarray, mean: np.ndarray, sigma: float) -> float:
    n = w.size
    sq = float(np.dot(w - mean, w - mean))
    return -0.5 * n * math.log(2.0 * math.pi * sigma * sigma) - sq / (2.0 * sigma * sigma)


def log_mixture_objective(w, w1, w2, model: GaussianLayerModel, params: MixtureParams) -> float:
    """Log of gamma1*N(w; w1, sigma1^2 I) + gamma2*N(w; w2, sigma2^2 I)."""
    wf, w1f, w2f = _flatten(w), _flatten(w1), _flatten(w2)
    if wf.shape != w1f.shape or w1f.shape != w2f.shape:
        raise ValueError("w, w1, w2 must have matching shapes")
    terms = []
    if params.gamma1 > 0.0:
        terms.append(math.log(params.gamma1) + _log_gaussian(wf, w1f, model.sigma1))
    if params.gamma2 > 0.0:
        terms.append(math.log(params.gamma2) + _log_gaussian(wf, w2f, model.sigma2))
    hi = max(terms)
    return hi + math.log(sum(math.exp(t - hi) for t in terms))


def mixture_objective(w, w1, w2, model: GaussianLayerModel, params: MixtureParams) -> float:
    """Mixture posterior objective; may underflow to 0.0 for distant w."""
    return math.exp(log_mixture_objective(w, w1, w2, model, params))


def _segment_log_objective(beta, dist_sq: float, n: int, model, params) -> np.ndarray:
    """log objective at w = beta*w1 + (1-beta)*w2, vectorized over beta."""
    beta = np.asarray(beta, dtype=float)
    s1sq = model.sigma1 * model.sigma1
    s2sq = model.sigma2 * model.sigma2
    with np.errstate(divide="ignore"):
        a = np.log(params.gamma1) - 0.5 * n * math.log(2.0 * math.pi * s1sq) \
            - (1.0 - beta) ** 2 * dist_sq / (2.0 * s1sq)
        b = np.log(params.gamma2) - 0.5 * n * math.log(2.0 * math.pi * s2sq) \
            - beta ** 2 * dist_sq / (2.0 * s2sq)
    return np.logaddexp(a, b)


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def map_estimate_gaussian(w1, w2, model: GaussianLayerModel, params: MixtureParams,
                          tol: float = 1e-6):
    """MAP estimate of the common network from two observed layers.

    Returns (w_hat, beta_hat) with w_hat = beta_hat*w1 + (1-beta_hat)*w2.
    The objective restricted to that segment is evaluated in closed form,
    scanned on a 1000-point grid, then refined by golden-section search.
    Equal inputs return beta_hat = 0.5 by convention.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    unwrap = isinstance(w1, AdjacencyMatrix)
    m1 = w1.entries if unwrap else np.asarray(w1, dtype=float)
    m2 = w2.entries if isinstance(w2, AdjacencyMatrix) else np.asarray(w2, dtype=float)
    if m1.shape != m2.shape:
        raise ValueError(f"shape mismatch: {m1.shape} vs {m2.shape}")
    f1, f2 = _flatten(m1), _flatten(m2)
    dist_sq = float(np.dot(f1 - f2, f1 - f2))
    n = f1.size

    if dist_sq == 0.0:
        beta_hat = 0.5
    else:
        grid = np.linspace(0.0, 1.0, 1000)
        values = _segment_log_objective(grid, dist_sq, n, model, params)
        best = int(np.argmax(values))
        step = grid[1] - grid[0]
        lo = max(0.0, grid[best] - step)
        hi = min(1.0, grid[best] + step)
        beta_hat = _golden_max(
            lambda b: _segment_log_objective(b, dist_sq, n, model, params),
            lo, hi, tol,
        )
        # snap to an endpoint when the refined optimum sits within tol of it
        if beta_hat < tol and values[0] >= _segment_log_objective(beta_hat, dist_sq, n, model, params):
            beta_hat = 0.0
        elif beta_hat > 1.0 - tol and values[-1] >= _segment_log_objective(beta_hat, dist_sq, n, model, params):
            beta_hat = 1.0

    fused = beta_hat * m1 + (1.0 - beta_hat) * m2
    if unwrap:
        return AdjacencyMatrix(fused, kind=WEIGHTED), beta_hat
    return fused, beta_hat


def fuse_linear(w1, w2, beta: float):
    """Convex combination beta*w1 + (1-beta)*w2; endpoints return the input."""
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if isinstance(w1, AdjacencyMatrix) and isinstance(w2, AdjacencyMatrix):
        if w1.num_vertices != w2.num_vertices:
            raise ValueError("layer size mismatch")
        if beta == 1.0:
            return w1
        if beta == 0.0:
            return w2
        return AdjacencyMatrix(beta * w1.entries + (1.0 - beta) * w2.entries,
                               kind=WEIGHTED)
    m1 = np.asarray(w1, dtype=float)
    m2 = np.asarray(w2, dtype=float)
    if m1.shape != m2.shape:
        raise ValueError(f"shape mismatch: {m1.shape} vs {m2.shape}")
    if beta == 1.0:
        return m1.copy()
    if beta == 0.0:
        return m2.copy()
    return beta * m1 + (1.0 - beta) * m2


def fuse_binary(w1: AdjacencyMatrix, w2: AdjacencyMatrix, alpha: float,
                seed) -> AdjacencyMatrix:
    """Probabilistic fusion of two binary layers.

    Agreeing entries are copied. Each disagreeing vertex pair takes layer 1's
    entry with probability alpha, layer 2's otherwise, using one independent
    draw per unordered pair from the given seed. No global RNG state is read.
    """
    for w in (w1, w2):
        if not isinstance(w, AdjacencyMatrix) or w.kind != BINARY:
            raise ValueError("fuse_binary needs binary AdjacencyMatrix inputs")
    if w1.num_vertices != w2.num_vertices:
        raise ValueError("layer size mismatch")
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = w1.num_vertices
    iu = np.triu_indices(p, k=1)
    v1 = w1.entries[iu]
    v2 = w2.entries[iu]
    disagree = v1 != v2
    out = v1.copy()
    take_w1 = rng.random(int(disagree.sum())) < alpha
    out[disagree] = np.where(take_w1, v1[disagree], v2[disagree])
    entries = np.zeros((p, p))
    entries[iu] = out
    entries += entries.T
    return AdjacencyMatrix(entries, kind=BINARY)
