"""Version-space search driven by comparison queries.

The engine keeps a shrinking candidate set (the version space) holding
exactly the hypotheses consistent with the answers so far. A certain
answer "x" guarantees the target is no farther from x than from y, so the
strict half nearer y is eliminated; an abstention guarantees the target
sits in neither alpha-certain cell, so both cells are eliminated. Pair
selection is pluggable; the selectors trade off how much distance
information they need against how balanced a split they can promise.

A cover-and-eliminate variant (`run_worcs1`) that needs full pairwise
distances is provided alongside the query-per-iteration engine.
"""
from __future__ import annotations

import enum
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .demand import Demand, power_law_demand, uniform_demand
from .metric import MetricDataset, Subset, ball, diameter, epsilon_net
from .oracle import OracleAnswer, TripletOracle


class StrategyKind(enum.Enum):
    WORCS_I = "worcs-i"
    WORCS_II_RANK = "worcs-ii-rank"
    WORCS_II_WEAK = "worcs-ii-weak"
    WORCS_II_FULLDIST = "worcs-ii-fulldist"
    GTS = "gts"
    FAST_GTS = "fast-gts"
    RANDOM = "random"
    MINDIST = "mindist"


# Selectors whose choice depends on the RNG stream; they get a generous
# reselection budget instead of the exact all-pairs budget.
_RANDOMIZED_KINDS = frozenset({
    StrategyKind.WORCS_II_RANK, StrategyKind.WORCS_II_WEAK,
    StrategyKind.FAST_GTS, StrategyKind.RANDOM,
})


@dataclass(frozen=True)
class Strategy:
    kind: StrategyKind
    seed: int = 0
    k: int = 10  # sample size for fast-gts

    def __post_init__(self):
        if self.kind is StrategyKind.FAST_GTS and self.k < 1:
            raise ValueError("fast-gts needs k >= 1")


class SearchStatus(enum.Enum):
    FOUND_EXACT = "found-exact"
    FOUND_PROBABLE = "found-probable"
    FAILED_TARGET_ELIMINATED = "failed-target-eliminated"
    FAILED_NO_PROGRESS = "failed-no-progress"


@dataclass(frozen=True)
class VersionSpace:
    members: Subset
    mass: float
    generation: int


@dataclass
class StepRecord:
    x: int
    y: int
    answer: OracleAnswer
    removed: int
    vs_size: int
    vs_mass: float
    flagged: bool = False
    decision_time: float = 0.0


@dataclass
class SearchOutcome:
    status: SearchStatus
    returned: int | None
    queries: int
    iterations: int
    transcript: list[StepRecord]
    mass_history: list[float] = field(default_factory=list)
    cover_sizes: list[int] = field(default_factory=list)
    flagged_steps: int = 0

    @property
    def wall_time_per_decision(self) -> list[float]:
        return [s.decision_time for s in self.transcript]

    @property
    def decision_seconds(self) -> float:
        return sum(s.decision_time for s in self.transcript)


class AnswerSource(Protocol):
    def answer(self, x: int, y: int) -> OracleAnswer: ...


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _argmax_mass(demand: Demand, V: Subset) -> int:
    w = demand.weights[V.members]
    return int(V.members[int(np.argmax(w))])


# ---------------------------------------------------------------------------
# Pair selectors
# ---------------------------------------------------------------------------

class FarthestRankTable:
    """Per-point ranking of all other points by decreasing distance.

    This is the rank side information: the selector only walks the
    precomputed order, it never reads raw distances.
    """

    def __init__(self, dataset: MetricDataset):
        n = dataset.n
        self.n = n
        order = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            row = dataset.dist_row(i)
            order[i] = np.lexsort((np.arange(n), -row))
        self._order = order

    def farthest_in(self, x: int, V: Subset) -> int:
        mask = np.zeros(self.n, dtype=bool)
        mask[V.members] = True
        mask[x] = False
        row = self._order[x]
        hits = mask[row]
        if not hits.any():
            raise ValueError("no candidate farthest point")
        return int(row[int(np.argmax(hits))])


def select_pair_rank(ranks: FarthestRankTable, V: Subset, seed=0) -> tuple[int, int]:
    """Random anchor, then its farthest point in V per the rank table.
    The result is always at least half the current diameter apart."""
    if len(V) < 2:
        raise ValueError("need at least two candidates")
    rng = _as_rng(seed)
    x = int(V.members[int(rng.integers(len(V)))])
    return x, ranks.farthest_in(x, V)


def select_pair_weak(triplets: TripletOracle, V: Subset, seed=0) -> tuple[int, int, bool]:
    """Minimal-information selection: random anchor x, then the first
    scanned y no other candidate beats by a factor alpha from x's view.
    Such a pair spans at least diam(V) / (2 alpha).

    Returns (x, y, fallback) where fallback marks the degenerate case of
    no qualifying y (possible only with an inconsistent relation); the
    pair is then a seeded random one.
    """
    if len(V) < 2:
        raise ValueError("need at least two candidates")
    rng = _as_rng(seed)
    members = V.members
    x = int(members[int(rng.integers(members.size))])
    rest = members[members != x]
    for y in rest[rng.permutation(rest.size)]:
        y = int(y)
        zs = rest[rest != y]
        if not triplets.b_closer_any(x, y, zs):
            return x, y, False
    y = int(rest[int(rng.integers(rest.size))])
    return x, y, True


def _pair_grid(members: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ai, bj = np.triu_indices(members.size, k=1)
    return members[ai], members[bj]


def select_pair_gts(dataset: MetricDataset, demand: Demand, alpha: float, V: Subset,
                    k: int | None = None, seed=0) -> tuple[int, int]:
    """Greedy ternary-search pair: minimize the worst-case surviving mass
    over the three possible answers. Exhaustive over all pairs when k is
    None; otherwise over k pairs sampled without repetition (fast-gts).
    Ties go to the lexicographically smallest pair."""
    if len(V) < 2:
        raise ValueError("need at least two candidates")
    members = V.members
    xs, ys = _pair_grid(members)
    if k is not None:
        rng = _as_rng(seed)
        take = min(int(k), xs.size)
        sel = np.sort(rng.choice(xs.size, size=take, replace=False))
        xs, ys = xs[sel], ys[sel]
    w = demand.weights[members]
    total = float(w.sum())
    best_obj = math.inf
    best_pair = (int(xs[0]), int(ys[0]))
    chunk = max(1, 2_000_000 // max(1, members.size))
    for lo in range(0, xs.size, chunk):
        cx, cy = xs[lo:lo + chunk], ys[lo:lo + chunk]
        dx = np.vstack([dataset.dist_row(int(i))[members] for i in cx])
        dy = np.vstack([dataset.dist_row(int(i))[members] for i in cy])
        in_x = alpha * dx <= dy
        in_y = (alpha * dy <= dx) & ~in_x
        mx = in_x @ w
        my = in_y @ w
        mq = total - mx - my
        obj = np.maximum(np.maximum(mx, my), mq)
        j = int(np.argmin(obj))
        if obj[j] < best_obj - 1e-15:
            best_obj = float(obj[j])
            best_pair = (int(cx[j]), int(cy[j]))
    return best_pair


def gts_objective(dataset: MetricDataset, demand: Demand, alpha: float, V: Subset,
                  x: int, y: int) -> float:
    """Worst-case surviving mass of querying (x, y) on version space V."""
    members = V.members
    w = demand.weights[members]
    dx = dataset.dist_row(x)[members]
    dy = dataset.dist_row(y)[members]
    in_x = alpha * dx <= dy
    in_y = (alpha * dy <= dx) & ~in_x
    mx = float(w[in_x].sum())
    my = float(w[in_y].sum())
    return max(mx, my, float(w.sum()) - mx - my)


def select_pair_random(V: Subset, seed=0) -> tuple[int, int]:
    if len(V) < 2:
        raise ValueError("need at least two candidates")
    rng = _as_rng(seed)
    i, j = rng.choice(len(V), size=2, replace=False)
    a, b = int(V.members[i]), int(V.members[j])
    return (a, b) if a < b else (b, a)


def _extreme_pair(dataset: MetricDataset, V: Subset, largest: bool) -> tuple[int, int]:
    if len(V) < 2:
        raise ValueError("need at least two candidates")
    members = V.members
    xs, ys = _pair_grid(members)
    vals = np.concatenate([
        dataset.dist_row(int(i))[members[pos + 1:]]
        for pos, i in enumerate(members[:-1])
    ])
    j = int(np.argmax(vals)) if largest else int(np.argmin(vals))
    return int(xs[j]), int(ys[j])


def select_pair_mindist(dataset: MetricDataset, V: Subset) -> tuple[int, int]:
    return _extreme_pair(dataset, V, largest=False)


def select_pair_fulldist(dataset: MetricDataset, V: Subset) -> tuple[int, int]:
    return _extreme_pair(dataset, V, largest=True)


# ---------------------------------------------------------------------------
# Version-space engine (query-per-iteration loop)
# ---------------------------------------------------------------------------

class ComparisonSearch:
    """Incremental engine: hand it answers one at a time.

    `next_query()` returns the pair to ask about (None once finished);
    `apply_answer()` performs the Voronoi elimination. All strategies
    except the cover-based one run through this class.
    """

    def __init__(self, dataset: MetricDataset, demand: Demand, alpha: float,
                 strategy: Strategy):
        if strategy.kind is StrategyKind.WORCS_I:
            raise ValueError("the cover-based strategy does not run on this engine")
        if alpha < 1:
            raise ValueError("alpha must be at least 1")
        if demand.n != dataset.n:
            raise ValueError("demand size does not match dataset")
        self.dataset = dataset
        self.demand = demand
        self.alpha = alpha
        self.strategy = strategy
        self._rng = np.random.default_rng(strategy.seed)
        self._V = Subset.full(dataset.n)
        self._generation = 0
        self._pending: tuple[int, int] | None = None
        self._pending_flagged = False
        self._select_time = 0.0
        self._terminal_pending = False
        self._retired: set[tuple[int, int]] = set()
        self._reselect_attempts = 0
        self.steps: list[StepRecord] = []
        self.status: SearchStatus | None = None
        self.returned: int | None = None
        self.flagged_steps = 0
        self._ranks: FarthestRankTable | None = None
        self._triplets: TripletOracle | None = None
        if strategy.kind is StrategyKind.WORCS_II_RANK:
            self._ranks = FarthestRankTable(dataset)
        elif strategy.kind is StrategyKind.WORCS_II_WEAK:
            self._triplets = TripletOracle(dataset, alpha)
        if len(self._V) == 1:
            self.status = SearchStatus.FOUND_EXACT
            self.returned = int(self._V.members[0])

    @property
    def version_space(self) -> VersionSpace:
        return VersionSpace(self._V, self.demand.mass(self._V), self._generation)

    @property
    def done(self) -> bool:
        return self.status is not None

    def _select(self) -> tuple[int, int, bool]:
        kind = self.strategy.kind
        if kind is StrategyKind.WORCS_II_RANK:
            x, y = select_pair_rank(self._ranks, self._V, self._rng)
            return x, y, False
        if kind is StrategyKind.WORCS_II_WEAK:
            return select_pair_weak(self._triplets, self._V, self._rng)
        if kind is StrategyKind.WORCS_II_FULLDIST:
            x, y = select_pair_fulldist(self.dataset, self._V)
            return x, y, False
        if kind is StrategyKind.GTS:
            x, y = select_pair_gts(self.dataset, self.demand, self.alpha, self._V)
            return x, y, False
        if kind is StrategyKind.FAST_GTS:
            x, y = select_pair_gts(self.dataset, self.demand, self.alpha, self._V,
                                   k=self.strategy.k, seed=self._rng)
            return x, y, False
        if kind is StrategyKind.RANDOM:
            x, y = select_pair_random(self._V, self._rng)
            return x, y, False
        if kind is StrategyKind.MINDIST:
            x, y = select_pair_mindist(self.dataset, self._V)
            return x, y, False
        raise AssertionError(kind)

    def next_query(self) -> tuple[int, int] | None:
        if self.status is not None:
            return None
        if self._pending is not None:
            return self._pending
        t0 = time.perf_counter()
        if len(self._V) == 1:
            self.status = SearchStatus.FOUND_EXACT
            self.returned = int(self._V.members[0])
            return None
        if len(self._V) == 2:
            a, b = (int(v) for v in self._V.members)
            self._pending = (a, b)
            self._terminal_pending = True
            self._select_time = time.perf_counter() - t0
            return self._pending
        cap = 10 * len(self._V) if self.strategy.kind in _RANDOMIZED_KINDS \
            else len(self._V) * (len(self._V) - 1) // 2
        while True:
            if len(self._retired) >= len(self._V) * (len(self._V) - 1) // 2 \
                    or self._reselect_attempts >= cap:
                self.status = SearchStatus.FAILED_NO_PROGRESS
                self.returned = _argmax_mass(self.demand, self._V)
                return None
            x, y, flagged = self._select()
            key = (min(x, y), max(x, y))
            if key in self._retired:
                self._reselect_attempts += 1
                continue
            self._pending = (x, y)
            self._pending_flagged = flagged
            break
        self._select_time = time.perf_counter() - t0
        return self._pending

    def _removal_for(self, ans: OracleAnswer, x: int, y: int) -> Subset:
        """Candidates inconsistent with the answer.

        Any answer of "x" (certain or not) means d(x,t) <= d(y,t), so the
        strict half nearer y goes; symmetrically for "y". An abstention
        means neither point is alpha-times closer, so both alpha-certain
        Voronoi cells go.
        """
        members = self._V.members
        dx = self.dataset.dist_row(x)[members]
        dy = self.dataset.dist_row(y)[members]
        if ans is OracleAnswer.CLOSER_X:
            return Subset(members[dy < dx])
        if ans is OracleAnswer.CLOSER_Y:
            return Subset(members[dx < dy])
        return Subset(members[(self.alpha * dx <= dy) | (self.alpha * dy <= dx)])

    def apply_answer(self, ans: OracleAnswer) -> StepRecord:
        if self._pending is None:
            raise RuntimeError("no pending query to answer")
        x, y = self._pending
        self._pending = None
        flagged = self._pending_flagged
        self._pending_flagged = False
        t0 = time.perf_counter()

        if self._terminal_pending:
            self._terminal_pending = False
            if ans is OracleAnswer.CLOSER_X:
                self.status, self.returned = SearchStatus.FOUND_EXACT, x
                self._V = Subset.of([x])
                removed, vs_size = 1, 1
                vs_mass = float(self.demand.weights[x])
            elif ans is OracleAnswer.CLOSER_Y:
                self.status, self.returned = SearchStatus.FOUND_EXACT, y
                self._V = Subset.of([y])
                removed, vs_size = 1, 1
                vs_mass = float(self.demand.weights[y])
            else:
                self.status = SearchStatus.FOUND_PROBABLE
                self.returned = _argmax_mass(self.demand, self._V)
                removed, vs_size = 0, 2
                vs_mass = self.demand.mass(self._V)
            step = StepRecord(x, y, ans, removed, vs_size, vs_mass,
                              flagged=flagged,
                              decision_time=self._select_time + time.perf_counter() - t0)
            self.steps.append(step)
            return step

        removal = self._removal_for(ans, x, y)

        if len(removal) == 0:
            # Inadmissible pair: nothing to eliminate, retire it for this
            # version space and let next_query reselect.
            self._retired.add((min(x, y), max(x, y)))
            self._reselect_attempts += 1
            step = StepRecord(x, y, ans, 0, len(self._V), self.demand.mass(self._V),
                              flagged=True,
                              decision_time=self._select_time + time.perf_counter() - t0)
            self.steps.append(step)
            self.flagged_steps += 1
            return step

        self._V = self._V.difference(removal)
        self._generation += 1
        self._retired.clear()
        self._reselect_attempts = 0
        if len(self._V) == 0:
            self.status = SearchStatus.FAILED_TARGET_ELIMINATED
            self.returned = None
        step = StepRecord(x, y, ans, len(removal), len(self._V),
                          self.demand.mass(self._V), flagged=flagged,
                          decision_time=self._select_time + time.perf_counter() - t0)
        if flagged:
            self.flagged_steps += 1
        self.steps.append(step)
        return step

    def outcome(self) -> SearchOutcome:
        if self.status is None:
            raise RuntimeError("search still in progress")
        return SearchOutcome(
            status=self.status,
            returned=self.returned,
            queries=len(self.steps),
            iterations=self._generation,
            transcript=self.steps,
            mass_history=[],
            flagged_steps=self.flagged_steps,
        )


def run_worcs2(dataset: MetricDataset, demand: Demand, answers: AnswerSource,
               alpha: float, strategy: Strategy) -> SearchOutcome:
    """Run the version-space engine to completion against an answer source."""
    engine = ComparisonSearch(dataset, demand, alpha, strategy)
    masses = [engine.version_space.mass]
    while not engine.done:
        pair = engine.next_query()
        if pair is None:
            break
        step = engine.apply_answer(answers.answer(*pair))
        if step.removed > 0:
            masses.append(step.vs_mass)
    out = engine.outcome()
    out.mass_history = masses
    return out


# ---------------------------------------------------------------------------
# Cover-based search (full distance knowledge)
# ---------------------------------------------------------------------------

def run_worcs1(dataset: MetricDataset, demand: Demand, answers: AnswerSource,
               alpha: float, seed: int = 0) -> SearchOutcome:
    """Cover-and-eliminate search: each iteration builds an eps-net cover
    of the version space, finds a center that wins all its long-range
    comparisons, and keeps only a small ball around it.

    Under an abstaining-but-honest oracle a winning center always exists;
    with the randomized oracle the best-scoring center is used instead and
    the iteration is flagged as heuristic.
    """
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    rng = np.random.default_rng(seed)
    V = Subset.full(dataset.n)
    steps: list[StepRecord] = []
    masses = [demand.mass(V)]
    cover_sizes: list[int] = []
    iterations = 0
    flagged_total = 0

    def finish(status: SearchStatus, returned: int | None) -> SearchOutcome:
        return SearchOutcome(status=status, returned=returned, queries=len(steps),
                             iterations=iterations, transcript=steps,
                             mass_history=masses, cover_sizes=cover_sizes,
                             flagged_steps=flagged_total)

    while True:
        if len(V) == 1:
            return finish(SearchStatus.FOUND_EXACT, int(V.members[0]))
        if len(V) == 2:
            a, b = (int(v) for v in V.members)
            ans = answers.answer(a, b)
            if ans is OracleAnswer.CLOSER_X:
                steps.append(StepRecord(a, b, ans, 1, 1, float(demand.weights[a])))
                return finish(SearchStatus.FOUND_EXACT, a)
            if ans is OracleAnswer.CLOSER_Y:
                steps.append(StepRecord(a, b, ans, 1, 1, float(demand.weights[b])))
                return finish(SearchStatus.FOUND_EXACT, b)
            returned = _argmax_mass(demand, V)
            steps.append(StepRecord(a, b, ans, 0, 2, demand.mass(V)))
            return finish(SearchStatus.FOUND_PROBABLE, returned)

        t0 = time.perf_counter()
        delta = diameter(dataset, V)
        if delta == 0.0:
            # all remaining points coincide; no query can separate them
            return finish(SearchStatus.FOUND_PROBABLE, _argmax_mass(demand, V))
        eps = delta / (8 * (alpha + 1))
        net_seed = int(rng.integers(2 ** 32))
        centers = epsilon_net(dataset, V, eps, seed=net_seed)
        cover_sizes.append(len(centers))
        ball_mass = {c: demand.mass(ball(dataset, c, eps, Subset.full(dataset.n)))
                     for c in centers}
        ordered = sorted(centers, key=lambda c: (-ball_mass[c], c))
        decision_time = time.perf_counter() - t0

        winner = None
        wins: dict[int, int] = {}
        for c in ordered:
            row = dataset.dist_row(c)
            opponents = [cj for cj in centers if cj != c and row[cj] > delta / 8]
            ok = True
            count = 0
            for cj in opponents:
                ans = answers.answer(c, cj)
                steps.append(StepRecord(c, cj, ans, 0, len(V), demand.mass(V)))
                if ans is OracleAnswer.CLOSER_X:
                    count += 1
                else:
                    ok = False
                    break
            wins[c] = count
            if ok:
                winner = c
                break

        t1 = time.perf_counter()
        heuristic = winner is None
        if heuristic:
            winner = min(wins, key=lambda c: (-wins[c], -ball_mass[c], c))
            flagged_total += 1
        radius = delta * (alpha + 2) / (8 * (alpha + 1))
        new_V = ball(dataset, winner, radius, V)
        removed = len(V) - len(new_V)
        V = new_V
        iterations += 1
        masses.append(demand.mass(V))
        if steps:
            steps[-1].removed = removed
            steps[-1].vs_size = len(V)
            steps[-1].vs_mass = demand.mass(V)
            steps[-1].decision_time += decision_time + (time.perf_counter() - t1)
            if heuristic:
                steps[-1].flagged = True
        if len(V) == 0:
            return finish(SearchStatus.FAILED_TARGET_ELIMINATED, None)


def run_strategy(dataset: MetricDataset, demand: Demand, answers: AnswerSource,
                 alpha: float, strategy: Strategy) -> SearchOutcome:
    if strategy.kind is StrategyKind.WORCS_I:
        return run_worcs1(dataset, demand, answers, alpha, seed=strategy.seed)
    return run_worcs2(dataset, demand, answers, alpha, strategy)


# ---------------------------------------------------------------------------
# Transcripts
# ---------------------------------------------------------------------------

class ReplayMismatch(Exception):
    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


class ReplaySource:
    """Feeds recorded answers back to an engine, checking query identity."""

    def __init__(self, dataset: MetricDataset, steps: list[dict]):
        self._ids = dataset.ids
        self._steps = steps
        self.cursor = 0

    def answer(self, x: int, y: int) -> OracleAnswer:
        if self.cursor >= len(self._steps):
            raise ReplayMismatch(self.cursor, "engine asked more queries than recorded")
        rec = self._steps[self.cursor]
        if self._ids[x] != rec["x"] or self._ids[y] != rec["y"]:
            raise ReplayMismatch(
                self.cursor,
                f"query pair ({self._ids[x]}, {self._ids[y]}) differs from "
                f"recorded ({rec['x']}, {rec['y']})")
        self.cursor += 1
        return OracleAnswer(rec["answer"])


def make_demand(n: int, spec: dict) -> Demand:
    kind = spec.get("kind", "uniform")
    if kind == "uniform":
        return uniform_demand(n)
    if kind == "power-law":
        return power_law_demand(n, spec["exponent"], spec.get("seed", 0))
    if kind == "explicit":
        return Demand(np.asarray(spec["weights"], dtype=np.float64))
    raise ValueError(f"unknown demand kind {kind!r}")


def demand_spec_of(kind: str, **kw) -> dict:
    return {"kind": kind, **kw}


def outcome_to_transcript(dataset: MetricDataset, outcome: SearchOutcome,
                          strategy: Strategy, alpha: float, target: int,
                          dataset_spec: dict, demand_spec: dict) -> dict:
    doc = {
        "strategy": strategy.kind.value,
        "alpha": alpha,
        "seed": strategy.seed,
        "target_id": dataset.ids[target],
        "status": outcome.status.value,
        "queries": outcome.queries,
        "steps": [
            {"x": dataset.ids[s.x], "y": dataset.ids[s.y], "answer": s.answer.value,
             "removed": s.removed, "vs_size": s.vs_size}
            for s in outcome.transcript
        ],
        "dataset": dataset_spec,
        "demand": demand_spec,
    }
    if strategy.kind is StrategyKind.FAST_GTS:
        doc["k"] = strategy.k
    if outcome.returned is not None:
        doc["returned_id"] = dataset.ids[outcome.returned]
    return doc


def replay_transcript(doc: dict, dataset: MetricDataset | None = None) -> SearchOutcome:
    """Re-run a recorded session, verifying every step. Raises
    ReplayMismatch naming the first step that deviates."""
    from .datasets import resolve_dataset  # local import to avoid a cycle

    if dataset is None:
        ds_spec = doc["dataset"]
        dataset = resolve_dataset(ds_spec["spec"], metric=ds_spec.get("metric", "euclidean"),
                                  standardize=ds_spec.get("standardize", False))
    demand = make_demand(dataset.n, doc["demand"])
    strategy = Strategy(StrategyKind(doc["strategy"]), seed=doc["seed"],
                        k=doc.get("k", 10))
    source = ReplaySource(dataset, doc["steps"])
    outcome = run_strategy(dataset, demand, source, doc["alpha"], strategy)
    if source.cursor != len(doc["steps"]):
        raise ReplayMismatch(source.cursor, "recorded transcript has extra steps")
    for i, (got, rec) in enumerate(zip(outcome.transcript, doc["steps"])):
        if got.removed != rec["removed"]:
            raise ReplayMismatch(i, f"removal count {got.removed} != recorded {rec['removed']}")
        if got.vs_size != rec["vs_size"]:
            raise ReplayMismatch(i, f"version-space size {got.vs_size} != recorded {rec['vs_size']}")
    if outcome.status.value != doc["status"]:
        raise ReplayMismatch(len(doc["steps"]),
                             f"status {outcome.status.value} != recorded {doc['status']}")
    return outcome


def save_transcript(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2))


def load_transcript(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
