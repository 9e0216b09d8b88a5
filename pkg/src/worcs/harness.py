"""Benchmark harness: paired trials of search strategies over a dataset.

Each trial draws a target from the demand, then runs every configured
strategy against oracles with identical seeds, so per-trial differences
are attributable to the strategy alone. Sweeps rerun the grid while
varying dataset size, the oracle factor alpha, or the demand exponent.

Results are bit-identical for a fixed config and master seed. Decision
wall time is only recorded when `timing` is set, because measured time
would break that reproducibility guarantee.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .datasets import resolve_dataset
from .demand import Demand, power_law_demand
from .metric import MetricDataset
from .oracle import OracleConfig, OracleInstance, OracleMode
from .search import (
    SearchOutcome,
    Strategy,
    StrategyKind,
    outcome_to_transcript,
    run_strategy,
    save_transcript,
)

CSV_COLUMNS = ("strategy", "sweep_axis", "sweep_value", "trials", "mean_queries",
               "std_queries", "mean_decision_ms", "failure_rate", "seed")

# seed-stream tags, combined with the master seed and trial index
_STREAM_DEMAND = 0
_STREAM_TARGET = 1
_STREAM_ORACLE = 2
_STREAM_SELECTOR = 3
_STREAM_SUBSAMPLE = 4


@dataclass
class SweepSpec:
    axis: str  # "N" | "alpha" | "exponent"
    values: list[float]

    def __post_init__(self):
        if self.axis not in ("N", "alpha", "exponent"):
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        if any(v <= 0 for v in self.values):
            raise ValueError("sweep values must be positive")


@dataclass
class ExperimentConfig:
    dataset_spec: str
    strategies: list[str]
    metric: str = "euclidean"
    standardize: bool = False
    alpha: float = 2.0
    demand_exponent: float = 0.4
    trials: int = 100
    master_seed: int = 0
    oracle_mode: str = "weak-probabilistic"
    timing: bool = False
    fast_gts_k: int = 10
    transcripts_dir: str | None = None
    sweep: SweepSpec | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")
        for name in self.strategies:
            StrategyKind(name)  # raises on unknown strategy
        OracleMode(self.oracle_mode)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        raw = json.loads(text)
        sweep = raw.pop("sweep", None)
        cfg = cls(**raw)
        if sweep is not None:
            cfg.sweep = SweepSpec(axis=sweep["axis"], values=list(sweep["values"]))
        return cfg

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.sweep is None:
            d.pop("sweep")
        return d


@dataclass
class ResultRow:
    strategy: str
    sweep_axis: str
    sweep_value: float | int | None
    trials: int
    mean_queries: float
    std_queries: float
    mean_decision_ms: float
    failure_rate: float
    seed: int


@dataclass
class ExperimentResult:
    rows: list[ResultRow]
    config: dict = field(default_factory=dict)
    # per-(strategy, sweep_value) raw query counts, for analyses such as
    # medians or regressions that the CSV summary does not carry
    raw_queries: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.rows:
            value = "" if r.sweep_value is None else f"{r.sweep_value:g}"
            lines.append(",".join([
                r.strategy, r.sweep_axis, value, str(r.trials),
                f"{r.mean_queries:.6f}", f"{r.std_queries:.6f}",
                f"{r.mean_decision_ms:.6f}", f"{r.failure_rate:.6f}", str(r.seed),
            ]))
        return "\n".join(lines) + "\n"

    def write(self, csv_path: str | Path) -> None:
        csv_path = Path(csv_path)
        csv_path.write_text(self.to_csv())
        sidecar = csv_path.with_suffix(".json")
        sidecar.write_text(json.dumps(self.config, indent=2))


def load_result_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _seed_for(master: int, stream: int, index: int) -> int:
    return int(np.random.SeedSequence((master, stream, index)).generate_state(1)[0])


def _subsample(dataset: MetricDataset, size: int, seed: int) -> MetricDataset:
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(dataset.n, size=size, replace=False))
    ids = [dataset.ids[i] for i in keep]
    labels = None if dataset.labels is None else [dataset.labels[i] for i in keep]
    if dataset.features is not None and dataset.metric is not None:
        return MetricDataset.from_features(ids, dataset.features[keep],
                                           metric=dataset.metric, labels=labels)
    return MetricDataset.from_matrix(ids, dataset.matrix()[np.ix_(keep, keep)],
                                     labels=labels)


@dataclass
class _TrialStats:
    queries: list[int] = field(default_factory=list)
    decision_ms: list[float] = field(default_factory=list)
    failures: int = 0


def _run_cell(dataset: MetricDataset, demand: Demand, config: ExperimentConfig,
              alpha: float, transcript_meta: dict | None = None) -> dict[str, _TrialStats]:
    mode = OracleMode(config.oracle_mode)
    stats = {name: _TrialStats() for name in config.strategies}
    for trial in range(config.trials):
        target_rng = np.random.default_rng(
            _seed_for(config.master_seed, _STREAM_TARGET, trial))
        target = int(target_rng.choice(dataset.n, p=demand.weights))
        oracle_seed = _seed_for(config.master_seed, _STREAM_ORACLE, trial)
        selector_seed = _seed_for(config.master_seed, _STREAM_SELECTOR, trial)
        for name in config.strategies:
            oracle = OracleInstance(dataset, target,
                                    OracleConfig(alpha=alpha, mode=mode, seed=oracle_seed))
            strategy = Strategy(StrategyKind(name), seed=selector_seed, k=config.fast_gts_k)
            cell = stats[name]
            try:
                outcome: SearchOutcome = run_strategy(dataset, demand, oracle, alpha, strategy)
            except Exception:
                cell.queries.append(0)
                cell.decision_ms.append(0.0)
                cell.failures += 1
                continue
            cell.queries.append(outcome.queries)
            cell.decision_ms.append(outcome.decision_seconds * 1e3 if config.timing else 0.0)
            if outcome.returned != target:
                cell.failures += 1
            if transcript_meta is not None:
                doc = outcome_to_transcript(dataset, outcome, strategy, alpha, target,
                                            dataset_spec=transcript_meta["dataset"],
                                            demand_spec=transcript_meta["demand"])
                out_dir = Path(config.transcripts_dir)
                out_dir.mkdir(parents=True, exist_ok=True)
                save_transcript(out_dir / f"{name}-trial{trial:04d}.json", doc)
    return stats


def _rows_from_stats(stats: dict[str, _TrialStats], config: ExperimentConfig,
                     axis: str, value) -> list[ResultRow]:
    rows = []
    for name in config.strategies:
        cell = stats[name]
        q = np.asarray(cell.queries, dtype=np.float64)
        rows.append(ResultRow(
            strategy=name,
            sweep_axis=axis,
            sweep_value=value,
            trials=config.trials,
            mean_queries=float(q.mean()),
            std_queries=float(q.std(ddof=0)),
            mean_decision_ms=float(np.mean(cell.decision_ms)),
            failure_rate=cell.failures / config.trials,
            seed=config.master_seed,
        ))
    return rows


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full strategy grid described by the config (with its sweep,
    if any) and aggregate per-cell statistics."""
    base = resolve_dataset(config.dataset_spec, metric=config.metric,
                           standardize=config.standardize)
    rows: list[ResultRow] = []
    if config.sweep is None:
        demand_seed = _seed_for(config.master_seed, _STREAM_DEMAND, 0)
        demand = power_law_demand(base.n, config.demand_exponent, demand_seed)
        meta = None
        if config.transcripts_dir is not None:
            meta = {
                "dataset": {"spec": config.dataset_spec, "metric": config.metric,
                            "standardize": config.standardize},
                "demand": {"kind": "power-law", "exponent": config.demand_exponent,
                           "seed": demand_seed},
            }
        stats = _run_cell(base, demand, config, config.alpha, transcript_meta=meta)
        rows.extend(_rows_from_stats(stats, config, "none", None))
        raw = {(name, None): list(cell.queries) for name, cell in stats.items()}
        return ExperimentResult(rows=rows, config=config.to_dict(), raw_queries=raw)

    axis = config.sweep.axis
    raw = {}
    for idx, value in enumerate(config.sweep.values):
        dataset = base
        alpha = config.alpha
        exponent = config.demand_exponent
        if axis == "N":
            size = int(value)
            if size > base.n:
                raise ValueError(f"sweep size {size} exceeds dataset size {base.n}")
            dataset = _subsample(base, size,
                                 _seed_for(config.master_seed, _STREAM_SUBSAMPLE, idx))
        elif axis == "alpha":
            if value < 1:
                raise ValueError("alpha sweep values must be >= 1")
            alpha = float(value)
        else:
            exponent = float(value)
        demand = power_law_demand(dataset.n, exponent,
                                  _seed_for(config.master_seed, _STREAM_DEMAND, idx))
        stats = _run_cell(dataset, demand, config, alpha)
        key_value = int(value) if axis == "N" else float(value)
        rows.extend(_rows_from_stats(stats, config, axis, key_value))
        for name, cell in stats.items():
            raw[(name, key_value)] = list(cell.queries)
    return ExperimentResult(rows=rows, config=config.to_dict(), raw_queries=raw)


def _require_axis(config: ExperimentConfig, axis: str) -> ExperimentConfig:
    if config.sweep is None or config.sweep.axis != axis:
        raise ValueError(f"config must carry a sweep over {axis!r}")
    return config


def sweep_scalability(config: ExperimentConfig) -> ExperimentResult:
    return run_experiment(_require_axis(config, "N"))


def sweep_alpha(config: ExperimentConfig) -> ExperimentResult:
    return run_experiment(_require_axis(config, "alpha"))


def sweep_exponent(config: ExperimentConfig) -> ExperimentResult:
    return run_experiment(_require_axis(config, "exponent"))
