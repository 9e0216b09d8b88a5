"""Metric datasets and the geometric primitives built on them.

A :class:`MetricDataset` is an immutable collection of identified points
with a symmetric, nonnegative distance. Everything downstream (oracles,
search strategies, benchmarks) reads distances exclusively through this
layer, so the full-matrix / on-demand caching policy lives here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

# Above this size the n x n distance matrix is not materialized eagerly.
FULL_MATRIX_THRESHOLD = 5000

_METRICS = ("euclidean", "manhattan", "cosine-distance")


def _pairwise_rows(features: np.ndarray, metric: str, i: int) -> np.ndarray:
    x = features[i]
    if metric == "euclidean":
        return np.sqrt(((features - x) ** 2).sum(axis=1))
    if metric == "manhattan":
        return np.abs(features - x).sum(axis=1)
    if metric == "cosine-distance":
        norms = np.linalg.norm(features, axis=1) * np.linalg.norm(x)
        norms = np.where(norms == 0, 1.0, norms)
        sim = (features @ x) / norms
        return 1.0 - np.clip(sim, -1.0, 1.0)
    raise ValueError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class Subset:
    """Sorted, duplicate-free index set into a MetricDataset."""

    members: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.members, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("subset members must be one-dimensional")
        arr = np.unique(arr)  # sorts and deduplicates
        object.__setattr__(self, "members", arr)
        arr.setflags(write=False)

    @classmethod
    def of(cls, members: Iterable[int]) -> "Subset":
        return cls(np.fromiter(members, dtype=np.int64))

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def empty(cls) -> "Subset":
        return cls(np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.members.size)

    def __iter__(self):
        return iter(self.members.tolist())

    def __contains__(self, idx: int) -> bool:
        pos = np.searchsorted(self.members, idx)
        return pos < self.members.size and self.members[pos] == idx

    def __eq__(self, other) -> bool:
        return isinstance(other, Subset) and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash(self.members.tobytes())

    def intersect(self, other: "Subset") -> "Subset":
        return Subset(np.intersect1d(self.members, other.members, assume_unique=True))

    def difference(self, other: "Subset") -> "Subset":
        return Subset(np.setdiff1d(self.members, other.members, assume_unique=True))

    def union(self, other: "Subset") -> "Subset":
        return Subset(np.union1d(self.members, other.members))


class MetricDataset:
    """Point set with stable string ids and a cached metric.

    Construct via :meth:`from_features` (named metric over feature rows),
    :meth:`from_matrix` (explicit distance matrix), or
    :meth:`from_callable` (arbitrary pairwise function, computed lazily).
    Instances are immutable and safe to share across threads.
    """

    def __init__(
        self,
        ids: Sequence[str],
        *,
        features: np.ndarray | None = None,
        matrix: np.ndarray | None = None,
        metric: str | None = None,
        dist_fn: Callable[[int, int], float] | None = None,
        labels: Sequence[str] | None = None,
        cache_mode: str | None = None,
    ):
        self.ids: list[str] = [str(i) for i in ids]
        if len(self.ids) < 1:
            raise ValueError("dataset needs at least one point")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("dataset ids must be distinct")
        self.n = len(self.ids)
        self.features = None if features is None else np.asarray(features, dtype=np.float64)
        if self.features is not None and self.features.shape[0] != self.n:
            raise ValueError("feature row count does not match id count")
        self.metric = metric
        self.labels = list(labels) if labels is not None else None
        self._dist_fn = dist_fn
        if cache_mode is None:
            cache_mode = "full-matrix" if self.n <= FULL_MATRIX_THRESHOLD else "on-demand"
        if cache_mode not in ("full-matrix", "on-demand"):
            raise ValueError(f"unknown cache_mode {cache_mode!r}")
        self.cache_mode = cache_mode
        self._matrix: np.ndarray | None = None
        self._row_cache: dict[int, np.ndarray] = {}
        if matrix is not None:
            m = np.asarray(matrix, dtype=np.float64)
            if m.shape != (self.n, self.n):
                raise ValueError("distance matrix shape mismatch")
            self._matrix = m
            self.cache_mode = "full-matrix"
        elif self.cache_mode == "full-matrix":
            self._matrix = self._build_matrix()
        if self._matrix is not None:
            self._matrix.setflags(write=False)

    @classmethod
    def from_features(
        cls,
        ids: Sequence[str],
        features: np.ndarray,
        metric: str = "euclidean",
        labels: Sequence[str] | None = None,
        cache_mode: str | None = None,
    ) -> "MetricDataset":
        if metric not in _METRICS:
            raise ValueError(f"metric must be one of {_METRICS}, got {metric!r}")
        return cls(ids, features=np.asarray(features, dtype=np.float64), metric=metric,
                   labels=labels, cache_mode=cache_mode)

    @classmethod
    def from_matrix(cls, ids: Sequence[str], matrix: np.ndarray,
                    labels: Sequence[str] | None = None) -> "MetricDataset":
        m = np.asarray(matrix, dtype=np.float64)
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(m) != 0):
            raise ValueError("distance matrix diagonal must be zero")
        if np.any(m < 0):
            raise ValueError("distances must be nonnegative")
        return cls(ids, matrix=m, labels=labels)

    @classmethod
    def from_callable(cls, ids: Sequence[str], dist_fn: Callable[[int, int], float],
                      cache_mode: str = "on-demand") -> "MetricDataset":
        return cls(ids, dist_fn=dist_fn, cache_mode=cache_mode)

    def _build_matrix(self) -> np.ndarray:
        if self.features is not None and self.metric is not None:
            rows = [_pairwise_rows(self.features, self.metric, i) for i in range(self.n)]
            m = np.vstack(rows)
            # enforce exact symmetry against fp noise in per-row evaluation
            m = np.maximum(m, m.T)
            np.fill_diagonal(m, 0.0)
            return m
        if self._dist_fn is not None:
            m = np.zeros((self.n, self.n))
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    m[i, j] = m[j, i] = float(self._dist_fn(i, j))
            return m
        raise ValueError("dataset has no distance source")

    def dist(self, i: int, j: int) -> float:
        if self._matrix is not None:
            return float(self._matrix[i, j])
        return float(self.dist_row(i)[j])

    def dist_row(self, i: int) -> np.ndarray:
        """Distances from point i to every point, as a read-only vector."""
        if self._matrix is not None:
            return self._matrix[i]
        row = self._row_cache.get(i)
        if row is None:
            if self.features is not None and self.metric is not None:
                row = _pairwise_rows(self.features, self.metric, i)
            else:
                row = np.array([0.0 if j == i else float(self._dist_fn(i, j))
                                for j in range(self.n)])
            row[i] = 0.0  # guard against fp noise in self-distance
            row.setflags(write=False)
            if len(self._row_cache) > 256:
                self._row_cache.clear()
            self._row_cache[i] = row
        return row

    def matrix(self) -> np.ndarray:
        """Full distance matrix (materializes it under on-demand caching)."""
        if self._matrix is None:
            m = self._build_matrix()
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def id_to_index(self) -> dict[str, int]:
        return {pid: i for i, pid in enumerate(self.ids)}

    def check_metric_axioms(self, seed: int = 0, exhaustive_limit: int = 64,
                            samples: int = 10000, tol: float = 1e-9) -> None:
        """Raise AssertionError if symmetry, identity, nonnegativity or the
        triangle inequality fail. Triples are exhaustive for small n and
        sampled above `exhaustive_limit`."""
        n = self.n
        m = self.matrix()
        assert np.all(np.diag(m) == 0), "d(i,i) must be 0"
        assert np.all(m >= 0), "distances must be nonnegative"
        assert np.allclose(m, m.T, atol=tol), "distance must be symmetric"
        if n <= exhaustive_limit:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        else:
            rng = np.random.default_rng(seed)
            idx = rng.integers(0, n, size=(samples, 3))
            triples = map(tuple, idx)
        for i, j, k in triples:
            if m[i, k] > m[i, j] + m[j, k] + tol:
                raise AssertionError(
                    f"triangle inequality violated at ({i},{j},{k}): "
                    f"{m[i, k]} > {m[i, j]} + {m[j, k]}")


def diameter(dataset: MetricDataset, subset: Subset) -> float:
    """Largest pairwise distance within `subset` (0 for singletons)."""
    if len(subset) == 0:
        raise ValueError("empty set has no diameter")
    idx = subset.members
    if idx.size == 1:
        return 0.0
    best = 0.0
    for i in idx:
        row = dataset.dist_row(int(i))
        best = max(best, float(row[idx].max()))
    return best


def diameter_pair(dataset: MetricDataset, subset: Subset) -> tuple[int, int, float]:
    """Diameter with an achieving pair, ties broken lexicographically."""
    if len(subset) < 2:
        raise ValueError("need at least two points")
    idx = subset.members
    best = -1.0
    pair = (int(idx[0]), int(idx[1]))
    for i in idx:
        row = dataset.dist_row(int(i))[idx]
        j_local = int(np.argmax(row))
        if row[j_local] > best:
            a, b = int(i), int(idx[j_local])
            best = float(row[j_local])
            pair = (min(a, b), max(a, b))
    return pair[0], pair[1], best


def ball(dataset: MetricDataset, center: int, radius: float, within: Subset) -> Subset:
    """Members of `within` at distance <= radius from `center`."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if center not in within:
        raise ValueError(f"center {center} not in the searched subset")
    idx = within.members
    row = dataset.dist_row(center)[idx]
    return Subset(idx[row <= radius])


def epsilon_net(dataset: MetricDataset, subset: Subset, eps: float,
                seed: int | None = None) -> Subset:
    """Greedy maximal set of subset points pairwise more than `eps` apart.

    The scan order is the natural (sorted index) order when `seed` is None,
    otherwise a permutation drawn from `seed`. Output is deterministic for
    a fixed order.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if len(subset) == 0:
        raise ValueError("cannot build a net of the empty set")
    order = subset.members.copy()
    if seed is not None:
        order = order[np.random.default_rng(seed).permutation(order.size)]
    chosen: list[int] = []
    for cand in order:
        cand = int(cand)
        row = dataset.dist_row(cand)
        if all(row[c] > eps for c in chosen):
            chosen.append(cand)
    return Subset.of(chosen)


def is_cover(dataset: MetricDataset, subset: Subset, centers: Subset, eps: float) -> bool:
    """True iff every subset point lies within `eps` of some center."""
    if len(centers.difference(subset)) != 0:
        raise ValueError("centers must be a subset of the covered set")
    if len(centers) == 0:
        return len(subset) == 0
    idx = subset.members
    covered = np.zeros(idx.size, dtype=bool)
    for c in centers:
        covered |= dataset.dist_row(c)[idx] <= eps
        if covered.all():
            return True
    return bool(covered.all())
