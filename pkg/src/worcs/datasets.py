"""Dataset loading: CSV files, synthetic generators, and bundled corpora.

CSV format: a header row with an `id` column (string), an optional `label`
column (kept for display, excluded from geometry), and numeric feature
columns. Synthetic specs use a call-like syntax, e.g.
``uniform-cube(dim=2,n=100,seed=0)``.
"""
from __future__ import annotations

import csv
import os
import re
from importlib import resources
from pathlib import Path

import numpy as np

from .metric import MetricDataset

DATA_DIR_ENV = "WORCS_DATA_DIR"
BUNDLED = ("iris", "wine")

_SPEC_RE = re.compile(r"^([a-z-]+)\((.*)\)$")


def load_csv(path: str | Path, metric: str = "euclidean",
             standardize: bool = False) -> MetricDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader if row]
    if "id" not in header:
        raise ValueError(f"{path}: CSV needs an 'id' column")
    id_col = header.index("id")
    label_col = header.index("label") if "label" in header else None
    feat_cols = [i for i in range(len(header)) if i not in (id_col, label_col)]
    ids = [row[id_col] for row in rows]
    labels = [row[label_col] for row in rows] if label_col is not None else None
    features = np.array([[float(row[i]) for i in feat_cols] for row in rows])
    if standardize:
        std = features.std(axis=0, ddof=0)
        std[std == 0] = 1.0
        features = (features - features.mean(axis=0)) / std
    return MetricDataset.from_features(ids, features, metric=metric, labels=labels)


def _bundled_path(name: str) -> Path:
    return Path(str(resources.files("worcs").joinpath("data", f"{name}.csv")))


def load_bundled(name: str, metric: str | None = None) -> MetricDataset:
    """Bundled corpora: iris (Euclidean) and wine (standardized Euclidean)."""
    if name == "iris":
        return load_csv(_bundled_path("iris"), metric=metric or "euclidean")
    if name == "wine":
        return load_csv(_bundled_path("wine"), metric=metric or "euclidean",
                        standardize=True)
    raise ValueError(f"unknown bundled dataset {name!r}")


def uniform_cube(dim: int, n: int, seed: int = 0) -> MetricDataset:
    rng = np.random.default_rng(seed)
    feats = rng.uniform(0.0, 1.0, size=(n, dim))
    ids = [f"cube-{i:04d}" for i in range(n)]
    return MetricDataset.from_features(ids, feats)


def gaussian_mixture(k: int, dim: int, n: int, seed: int = 0) -> MetricDataset:
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, 4.0, size=(k, dim))
    assign = rng.integers(0, k, size=n)
    feats = centers[assign] + rng.normal(0.0, 1.0, size=(n, dim))
    ids = [f"gm-{i:04d}" for i in range(n)]
    return MetricDataset.from_features(ids, feats, labels=[str(a) for a in assign])


def line(n: int) -> MetricDataset:
    feats = np.arange(n, dtype=np.float64).reshape(-1, 1)
    ids = [f"p{i}" for i in range(n)]
    return MetricDataset.from_features(ids, feats)


_GENERATORS = {
    "uniform-cube": (uniform_cube, ("dim", "n", "seed")),
    "gaussian-mixture": (gaussian_mixture, ("k", "dim", "n", "seed")),
    "line": (line, ("n",)),
}


def parse_synthetic_spec(spec: str) -> MetricDataset | None:
    """Build a generator dataset from a spec string, or None if the string
    is not generator syntax."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        return None
    name, argstr = m.group(1), m.group(2)
    if name not in _GENERATORS:
        raise ValueError(f"unknown generator {name!r}")
    fn, params = _GENERATORS[name]
    kwargs = {}
    if argstr.strip():
        for piece in argstr.split(","):
            key, _, value = piece.partition("=")
            key = key.strip()
            if key not in params:
                raise ValueError(f"generator {name!r} has no parameter {key!r}")
            kwargs[key] = int(value)
    return fn(**kwargs)


def resolve_dataset(spec: str, metric: str = "euclidean",
                    standardize: bool = False) -> MetricDataset:
    """Resolve a dataset reference: bundled name, generator spec, or CSV
    path (searched relative to cwd and $WORCS_DATA_DIR)."""
    if spec in BUNDLED:
        return load_bundled(spec)
    synthetic = parse_synthetic_spec(spec)
    if synthetic is not None:
        return synthetic
    path = Path(spec)
    if not path.exists():
        data_dir = os.environ.get(DATA_DIR_ENV)
        if data_dir and (Path(data_dir) / spec).exists():
            path = Path(data_dir) / spec
        else:
            raise FileNotFoundError(f"dataset {spec!r} not found")
    return load_csv(path, metric=metric, standardize=standardize)
