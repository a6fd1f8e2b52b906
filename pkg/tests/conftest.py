import numpy as np
import pytest
from hypothesis import settings

from multinet.netcore import AdjacencyMatrix, BINARY, WEIGHTED

settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")


def random_weighted(p: int, seed: int, scale: float = 1.0) -> AdjacencyMatrix:
    rng = np.random.default_rng(seed)
    entries = np.zeros((p, p))
    iu = np.triu_indices(p, k=1)
    entries[iu] = scale * rng.standard_normal(iu[0].size)
    entries += entries.T
    return AdjacencyMatrix(entries, kind=WEIGHTED)


def random_binary(p: int, seed: int, density: float = 0.5) -> AdjacencyMatrix:
    rng = np.random.default_rng(seed)
    entries = np.zeros((p, p))
    iu = np.triu_indices(p, k=1)
    entries[iu] = (rng.random(iu[0].size) < density).astype(float)
    entries += entries.T
    return AdjacencyMatrix(entries, kind=BINARY)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
