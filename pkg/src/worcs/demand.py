"""Demand distributions over dataset points: mass, entropy, generators."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metric import MetricDataset, Subset

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Demand:
    """Probability distribution over the points of one dataset."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("demand weights must be a nonempty vector")
        if np.any(w < 0):
            raise ValueError("demand weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > _SUM_TOL:
            raise ValueError(f"demand weights sum to {w.sum()}, expected 1")
        object.__setattr__(self, "weights", w)
        w.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.weights.size)

    @property
    def support(self) -> Subset:
        return Subset(np.flatnonzero(self.weights > 0))

    def mass(self, subset: Subset) -> float:
        return float(self.weights[subset.members].sum())

    def entropy(self) -> float:
        return entropy(self)


def uniform_demand(n: int) -> Demand:
    return Demand(np.full(n, 1.0 / n))


def entropy(demand: Demand) -> float:
    """Shannon entropy in bits; zero-mass points contribute nothing."""
    w = demand.weights[demand.weights > 0]
    return float(-(w * np.log2(w)).sum())


def power_law_demand(n: int, exponent: float, seed: int = 0) -> Demand:
    """Rank-based power law: ranks 1..n are assigned to points by a seeded
    random permutation and point mass is proportional to rank**(-exponent).
    Exponent 0 gives the uniform distribution."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    rng = np.random.default_rng(seed)
    ranks = np.empty(n, dtype=np.int64)
    ranks[rng.permutation(n)] = np.arange(1, n + 1)
    raw = ranks.astype(np.float64) ** (-exponent)
    return Demand(raw / raw.sum())


def demand_to_json(dataset: MetricDataset, demand: Demand) -> str:
    rows = [{"id": dataset.ids[i], "mass": float(m)} for i, m in enumerate(demand.weights)]
    return json.dumps(rows, indent=2)


def demand_from_json(dataset: MetricDataset, text: str) -> Demand:
    rows = json.loads(text)
    by_id = dataset.id_to_index()
    weights = np.zeros(dataset.n)
    for row in rows:
        weights[by_id[row["id"]]] = float(row["mass"])
    return Demand(weights)


def save_demand(path: str | Path, dataset: MetricDataset, demand: Demand) -> None:
    Path(path).write_text(demand_to_json(dataset, demand))


def load_demand(path: str | Path, dataset: MetricDataset) -> Demand:
    return demand_from_json(dataset, Path(path).read_text())
