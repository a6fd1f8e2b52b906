"""Multi-objective ranking: dominance, weak Pareto fronts, scalarization.

Minimization convention throughout. Posterior densities enter as negated
values at the boundary, so maximizing likelihoods becomes minimizing
objectives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ObjectiveVector:
    """Length-m objective values, m >= 2, smaller is better."""

    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) < 2:
            raise ValueError("objective vectors need at least 2 coordinates")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("objective values must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ParetoPoint:
    """A candidate solution together with its objective vector."""

    candidate: object
    objectives: ObjectiveVector


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """True iff a is no worse than b everywhere and strictly better somewhere."""
    if len(a) != len(b):
        raise ValueError(f"objective length mismatch: {len(a)} vs {len(b)}")
    le_all = all(x <= y for x, y in zip(a.values, b.values))
    lt_any = any(x < y for x, y in zip(a.values, b.values))
    return le_all and lt_any


def _front_mask_generic(obj: np.ndarray) -> np.ndarray:
    n = obj.shape[0]
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        le = (obj <= obj[i]).all(axis=1)
        lt = (obj < obj[i]).any(axis=1)
        if (le & lt).any():
            mask[i] = False
    return mask


def _front_mask_2d(obj: np.ndarray) -> np.ndarray:
    # skyline pass: sort by f1 then f2; a point survives iff it carries its
    # f1-group's minimal f2 and no strictly-smaller-f1 point has f2 <= it
    n = obj.shape[0]
    order = np.lexsort((obj[:, 1], obj[:, 0]))
    mask = np.zeros(n, dtype=bool)
    prefix_min_f2 = math.inf
    i = 0
    while i < n:
        j = i
        while j < n and obj[order[j], 0] == obj[order[i], 0]:
            j += 1
        group = order[i:j]
        group_min = obj[group, 1].min()
        if group_min < prefix_min_f2:
            for idx in group:
                if obj[idx, 1] == group_min:
                    mask[idx] = True
        prefix_min_f2 = min(prefix_min_f2, group_min)
        i = j
    return mask


def pareto_front(points: list) -> list:
    """Weakly non-dominated subset, input order preserved.

    Points with identical objective vectors never dominate each other, so
    duplicates on the front are all retained.
    """
    if not points:
        raise ValueError("pareto_front needs a nonempty point list")
    m = len(points[0].objectives)
    if any(len(pt.objectives) != m for pt in points):
        raise ValueError("all points must share the objective length")
    obj = np.array([pt.objectives.values for pt in points])
    mask = _front_mask_2d(obj) if m == 2 else _front_mask_generic(obj)
    return [pt for pt, keep in zip(points, mask) if keep]


def scalarization_sweep(candidates: list, weights: list) -> list:
    """For each gamma, the index minimizing gamma*f1 + (1-gamma)*f2.

    Ties go to the lower candidate index.
    """
    if not candidates:
        raise ValueError("scalarization_sweep needs candidates")
    obj = np.array([pt.objectives.values for pt in candidates])
    if obj.shape[1] != 2:
        raise ValueError("scalarization_sweep is defined for 2 objectives")
    out = []
    for gamma in weights:
        g = float(gamma)
        if not (0.0 <= g <= 1.0):
            raise ValueError(f"gamma must lie in [0, 1], got {g}")
        combined = g * obj[:, 0] + (1.0 - g) * obj[:, 1]
        out.append((g, int(np.argmin(combined))))
    return out


TWO_GAUSSIAN_MEAN_1 = (10.0, 8.0)
TWO_GAUSSIAN_MEAN_2 = (8.0, 10.0)
TWO_GAUSSIAN_VARIANCE = 2.0


def _neg_pdf(xy: np.ndarray, mean, variance: float) -> np.ndarray:
    diff = xy - np.asarray(mean)
    sq = (diff * diff).sum(axis=-1)
    return -np.exp(-sq / (2.0 * variance)) / (2.0 * math.pi * variance)


def two_gaussian_candidates(num: int = 201, lo: float = 6.0, hi: float = 12.0) -> list:
    """Grid candidates for the bivariate two-Gaussian demo instance.

    Candidates are (x1, x2) points; objectives are the negated densities of
    N([10,8], 2I) and N([8,10], 2I).
    """
    if num < 2:
        raise ValueError(f"grid needs at least 2 points per axis, got {num}")
    if not (lo < hi):
        raise ValueError(f"degenerate grid bounds [{lo}, {hi}]")
    axis = np.linspace(lo, hi, num)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    xy = np.column_stack([x1.ravel(), x2.ravel()])
    f1 = _neg_pdf(xy, TWO_GAUSSIAN_MEAN_1, TWO_GAUSSIAN_VARIANCE)
    f2 = _neg_pdf(xy, TWO_GAUSSIAN_MEAN_2, TWO_GAUSSIAN_VARIANCE)
    return [
        ParetoPoint(candidate=(float(x), float(y)),
                    objectives=ObjectiveVector((float(a), float(b))))
        for (x, y), a, b in zip(xy, f1, f2)
    ]


def two_gaussian_front(num: int = 201, lo: float = 6.0, hi: float = 12.0) -> list:
    """Weak Pareto front of the two-Gaussian demo grid."""
    return pareto_front(two_gaussian_candidates(num=num, lo=lo, hi=hi))
