"""Command-line entry points: benchmarks, sweeps, metric inspection,
transcript replay, and the interactive session server.

Exit codes: 0 success, 1 verification failure, 2 usage error. All seeds
default to 0 so runs are reproducible unless a seed is given explicitly;
existing output files are only overwritten with --force.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datasets import resolve_dataset
from .demand import power_law_demand
from .doubling import doubling_constant, strong_doubling_constant
from .harness import ExperimentConfig, SweepSpec, run_experiment
from .metric import Subset, epsilon_net, is_cover
from .search import ReplayMismatch, load_transcript, replay_transcript


def _parse_values(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _check_overwrite(path: Path, force: bool) -> None:
    if path.exists() and not force:
        raise UsageError(f"{path} exists; pass --force to overwrite")


class UsageError(Exception):
    pass


def _config_from_args(args, sweep: SweepSpec | None = None) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_json(Path(args.config).read_text())
        if sweep is not None:
            cfg.sweep = sweep
        return cfg
    if not args.dataset:
        raise UsageError("either --config or --dataset is required")
    return ExperimentConfig(
        dataset_spec=args.dataset,
        strategies=[s.strip() for s in args.strategies.split(",")],
        metric=args.metric,
        standardize=args.standardize,
        alpha=args.alpha,
        demand_exponent=args.exponent,
        trials=args.trials,
        master_seed=args.seed,
        oracle_mode=args.oracle_mode,
        timing=args.timing,
        fast_gts_k=args.fast_gts_k,
        transcripts_dir=getattr(args, "transcripts", None),
        sweep=sweep,
    )


def _add_bench_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (overrides inline flags)")
    p.add_argument("--dataset", help="bundled name, generator spec, or CSV path")
    p.add_argument("--strategies", default="worcs-ii-weak,worcs-ii-rank,random",
                   help="comma-separated strategy names")
    p.add_argument("--metric", default="euclidean",
                   choices=["euclidean", "manhattan", "cosine-distance"])
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--exponent", type=float, default=0.4,
                   help="power-law demand exponent")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--oracle-mode", default="weak-probabilistic",
                   choices=["strong", "weak-deterministic", "weak-probabilistic"])
    p.add_argument("--timing", action="store_true",
                   help="record decision wall time (breaks byte-level determinism)")
    p.add_argument("--fast-gts-k", type=int, default=10)
    p.add_argument("--transcripts", default=None, metavar="DIR",
                   help="also save a replayable per-trial transcript here")
    p.add_argument("--out", default="results.csv")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")


def _run_bench(args, sweep: SweepSpec | None) -> int:
    cfg = _config_from_args(args, sweep)
    out = Path(args.out)
    _check_overwrite(out, args.force)
    result = run_experiment(cfg)
    result.write(out)
    print(f"wrote {out} ({len(result.rows)} rows)")
    return 0


def cmd_bench(args) -> int:
    return _run_bench(args, None)


def cmd_sweep_n(args) -> int:
    return _run_bench(args, SweepSpec(axis="N", values=_parse_values(args.values)))


def cmd_sweep_alpha(args) -> int:
    return _run_bench(args, SweepSpec(axis="alpha", values=_parse_values(args.values)))


def cmd_sweep_exponent(args) -> int:
    return _run_bench(args, SweepSpec(axis="exponent", values=_parse_values(args.values)))


def cmd_net(args) -> int:
    ds = resolve_dataset(args.dataset, metric=args.metric)
    subset = Subset.full(ds.n)
    net = epsilon_net(ds, subset, args.eps, seed=args.seed)
    covered = is_cover(ds, subset, net, args.eps)
    print(f"net size: {len(net)}")
    print("ids: " + ",".join(ds.ids[i] for i in net))
    print(f"cover: {'true' if covered else 'false'}")
    return 0 if covered else 1


def cmd_doubling(args) -> int:
    ds = resolve_dataset(args.dataset, metric=args.metric)
    demand = power_law_demand(ds.n, args.demand_exponent, seed=args.seed)
    if args.strong:
        mode = "exact" if ds.n <= args.max_exact else "sampled"
        report = strong_doubling_constant(ds, demand, mode=mode,
                                          num_subsets=args.num_subsets, seed=args.seed)
    else:
        report = doubling_constant(ds, demand)
    doc = {
        "kind": "strong" if args.strong else "weak",
        "constant": report.constant,
        "center": ds.ids[report.center],
        "radius": report.radius,
        "subset": None if report.subset is None else [ds.ids[i] for i in report.subset],
        "exact": report.exact,
    }
    print(json.dumps(doc, indent=2))
    return 0


def cmd_replay(args) -> int:
    doc = load_transcript(args.transcript)
    try:
        outcome = replay_transcript(doc)
    except ReplayMismatch as err:
        print(f"FAIL: {err}", file=sys.stderr)
        return 1
    print(f"OK: {outcome.queries} queries, status {outcome.status.value}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="worcs",
        description="Comparison-based search benchmarks and tooling")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="run a strategy benchmark")
    _add_bench_flags(p)
    p.set_defaults(func=cmd_bench)

    for name, func, helptext in [
        ("sweep-n", cmd_sweep_n, "sweep the dataset size"),
        ("sweep-alpha", cmd_sweep_alpha, "sweep the oracle factor alpha"),
        ("sweep-exponent", cmd_sweep_exponent, "sweep the demand exponent"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_bench_flags(p)
        p.add_argument("--values", required=True, help="comma-separated sweep values")
        p.set_defaults(func=func)

    p = sub.add_parser("net", help="greedy epsilon-net of a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--metric", default="euclidean")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help="scan-order seed (default: natural order)")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("doubling", help="doubling constant of a demand")
    p.add_argument("--dataset", required=True)
    p.add_argument("--metric", default="euclidean")
    p.add_argument("--demand-exponent", type=float, default=0.4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strong", action="store_true")
    p.add_argument("--max-exact", type=int, default=16,
                   help="largest n for exact strong-constant enumeration")
    p.add_argument("--num-subsets", type=int, default=1000,
                   help="sampled-mode subset count")
    p.set_defaults(func=cmd_doubling)

    p = sub.add_parser("replay", help="verify a recorded transcript")
    p.add_argument("--transcript", required=True)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the interactive session service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default="worcs-sessions")
    p.add_argument("--ui-dir", default=None, help="static UI bundle directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
