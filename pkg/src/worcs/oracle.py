"""Comparison oracles for a hidden target, and the relations they induce.

The weak oracle answers "which of x, y is closer to the target t" only
when one distance beats the other by a factor alpha; otherwise it may
abstain. Two concrete behaviors are provided for the undetermined zone:
always abstain (WeakDeterministic, used by the invariant suites) and the
log-ratio randomized model (WeakProbabilistic, used by the benchmarks).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .metric import MetricDataset, Subset


class OracleAnswer(enum.Enum):
    CLOSER_X = "x"
    CLOSER_Y = "y"
    UNSURE = "?"


class OracleMode(enum.Enum):
    STRONG = "strong"
    WEAK_DETERMINISTIC = "weak-deterministic"
    WEAK_PROBABILISTIC = "weak-probabilistic"


@dataclass(frozen=True)
class OracleConfig:
    alpha: float = 2.0
    mode: OracleMode = OracleMode.WEAK_DETERMINISTIC
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")


class OracleInstance:
    """One oracle bound to one hidden target; counts every invocation.

    Holds mutable state (query counter, RNG for the probabilistic mode),
    so use one instance per search session.
    """

    def __init__(self, dataset: MetricDataset, target: int, config: OracleConfig):
        if not 0 <= target < dataset.n:
            raise ValueError("target index out of range")
        self._dataset = dataset
        self._target = target
        self.config = config
        self.query_count = 0
        self._rng = np.random.default_rng(config.seed)

    @property
    def target(self) -> int:
        """The hidden target; tests and the harness may look, strategies must not."""
        return self._target

    def answer(self, x: int, y: int) -> OracleAnswer:
        if x == y:
            raise ValueError("degenerate query: x and y must differ")
        self.query_count += 1
        dx = self._dataset.dist(x, self._target)
        dy = self._dataset.dist(y, self._target)
        alpha = self.config.alpha
        mode = self.config.mode

        if mode is OracleMode.STRONG:
            return OracleAnswer.CLOSER_X if dx <= dy else OracleAnswer.CLOSER_Y

        if mode is OracleMode.WEAK_DETERMINISTIC:
            if alpha * dx <= dy:
                return OracleAnswer.CLOSER_X
            if alpha * dy <= dx:
                return OracleAnswer.CLOSER_Y
            return OracleAnswer.UNSURE

        # WeakProbabilistic: certain outside the gray zone, abstains inside
        # it with probability 1 - log(far/near)/log(alpha).
        if alpha == 1.0 and dx == dy:
            return OracleAnswer.UNSURE
        if alpha * dx <= dy:
            return OracleAnswer.CLOSER_X
        if alpha * dy <= dx:
            return OracleAnswer.CLOSER_Y
        if dx < dy:
            p = math.log(dy / dx) / math.log(alpha)
            if self._rng.random() < p:
                return OracleAnswer.CLOSER_X
            return OracleAnswer.UNSURE
        if dy < dx:
            p = math.log(dx / dy) / math.log(alpha)
            if self._rng.random() < p:
                return OracleAnswer.CLOSER_Y
            return OracleAnswer.UNSURE
        return OracleAnswer.UNSURE


def voronoi(dataset: MetricDataset, alpha: float, x: int, y: int,
            within: Subset) -> Subset:
    """Points of `within` at least alpha-times closer to x than to y:
    {v : alpha * d(x,v) <= d(y,v)}."""
    if x == y:
        raise ValueError("voronoi cell needs two distinct anchors")
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    idx = within.members
    dx = dataset.dist_row(x)[idx]
    dy = dataset.dist_row(y)[idx]
    return Subset(idx[alpha * dx <= dy])


class TripletRelation(enum.Enum):
    B_CLOSER = "b"
    C_CLOSER = "c"
    GRAY = "gray"


class TripletOracle:
    """Per-triplet relative-distance knowledge: for (a, b, c) it reports
    whether alpha*d(a,b) <= d(a,c), alpha*d(a,c) <= d(a,b), or neither.

    This is the only distance information the minimal-knowledge pair
    selector is allowed to consume. When both inequalities hold (exact
    ties at alpha = 1, or coincident points) the pair is canonicalized
    lower-index-first, so the relation stays a deterministic function.
    """

    def __init__(self, dataset: MetricDataset, alpha: float):
        if alpha < 1:
            raise ValueError("alpha must be at least 1")
        self._dataset = dataset
        self.alpha = alpha

    def rel(self, a: int, b: int, c: int) -> TripletRelation:
        if a == b or a == c or b == c:
            raise ValueError("triplet points must be distinct")
        dab = self._dataset.dist(a, b)
        dac = self._dataset.dist(a, c)
        b_wins = self.alpha * dab <= dac
        c_wins = self.alpha * dac <= dab
        if b_wins and c_wins:
            return TripletRelation.B_CLOSER if b < c else TripletRelation.C_CLOSER
        if b_wins:
            return TripletRelation.B_CLOSER
        if c_wins:
            return TripletRelation.C_CLOSER
        return TripletRelation.GRAY

    def b_closer_any(self, a: int, b: int, cs: np.ndarray) -> bool:
        """True iff alpha*d(a,b) <= d(a,c) for at least one c in cs, i.e.
        some c makes b look alpha-times closer from a's perspective."""
        if cs.size == 0:
            return False
        dab = self._dataset.dist(a, b)
        dac = self._dataset.dist_row(a)[cs]
        return bool(np.any(self.alpha * dab <= dac))
