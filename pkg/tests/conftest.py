import numpy as np
import pytest

from worcs.demand import Demand, power_law_demand, uniform_demand
from worcs.metric import MetricDataset, Subset


def random_dataset(n: int, dim: int, seed: int, metric: str = "euclidean") -> MetricDataset:
    rng = np.random.default_rng(seed)
    feats = rng.uniform(-1.0, 1.0, size=(n, dim))
    return MetricDataset.from_features([f"p{i}" for i in range(n)], feats, metric=metric)


def random_demand(n: int, seed: int) -> Demand:
    """Full-support demand: uniform, power-law, or ragged random by seed."""
    rng = np.random.default_rng(seed)
    kind = rng.integers(3)
    if kind == 0:
        return uniform_demand(n)
    if kind == 1:
        return power_law_demand(n, float(rng.uniform(0.2, 1.5)), int(rng.integers(2**31)))
    w = rng.uniform(0.05, 1.0, size=n)
    return Demand(w / w.sum())


def line_dataset(n: int) -> MetricDataset:
    from worcs.datasets import line
    return line(n)


@pytest.fixture
def small_line():
    return line_dataset(4)


@pytest.fixture
def tri_line():
    """1-D points at 0, 1, 10."""
    feats = np.array([[0.0], [1.0], [10.0]])
    return MetricDataset.from_features(["a", "b", "c"], feats)


def full(ds: MetricDataset) -> Subset:
    return Subset.full(ds.n)
