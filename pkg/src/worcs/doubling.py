"""Doubling constants of a demand measure on a metric dataset.

Both constants are suprema of ball-mass ratios mass(B(2R)) / mass(B(R)).
The ratio is piecewise constant in R and only changes when R or 2R crosses
a pairwise distance, so evaluating it at the finite breakpoint set
{d(x,y), d(x,y)/2} per center is exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .demand import Demand
from .metric import MetricDataset

EXACT_STRONG_LIMIT = 16


@dataclass(frozen=True)
class DoublingReport:
    """Computed constant plus the witness achieving it.

    `subset` is None for the plain constant; for the strong constant it is
    the witnessing subset (sorted point indices). `exact` is False only for
    sampled strong-constant estimates, which are lower bounds.
    """

    constant: float
    center: int
    radius: float
    subset: tuple[int, ...] | None
    exact: bool


def ratio_at(dataset: MetricDataset, demand: Demand, center: int, radius: float,
             subset: tuple[int, ...] | None = None) -> float:
    """Re-evaluate the mass ratio a DoublingReport witness claims."""
    row = dataset.dist_row(center)
    w = demand.weights
    if subset is not None:
        keep = np.asarray(subset, dtype=np.int64)
        row = row[keep]
        w = w[keep]
    num = float(w[row <= 2 * radius].sum())
    den = float(w[row <= radius].sum())
    return num / den


def _best_ratio_for_center(sorted_d: np.ndarray, prefix: np.ndarray,
                           candidates: np.ndarray) -> tuple[float, float]:
    """Max of prefix-mass(2R)/prefix-mass(R) over candidate radii.

    `sorted_d` are distances ascending, `prefix` the matching cumulative
    masses. Returns (ratio, radius)."""
    num_idx = np.searchsorted(sorted_d, 2 * candidates, side="right")
    den_idx = np.searchsorted(sorted_d, candidates, side="right")
    ratios = prefix[num_idx - 1] / prefix[den_idx - 1]
    k = int(np.argmax(ratios))
    return float(ratios[k]), float(candidates[k])


def doubling_constant(dataset: MetricDataset, demand: Demand) -> DoublingReport:
    """Exact sup over support centers and radii of mass(B(2R))/mass(B(R))."""
    if demand.n != dataset.n:
        raise ValueError("demand size does not match dataset")
    best = DoublingReport(1.0, int(demand.support.members[0]), 0.0, None, True)
    for x in demand.support:
        row = dataset.dist_row(x)
        order = np.argsort(row, kind="stable")
        sorted_d = row[order]
        prefix = np.cumsum(demand.weights[order])
        candidates = np.unique(np.concatenate([sorted_d, sorted_d / 2]))
        ratio, radius = _best_ratio_for_center(sorted_d, prefix, candidates)
        if ratio > best.constant:
            best = DoublingReport(ratio, x, radius, None, True)
    return best


def _subset_best(sorted_d: np.ndarray, weights_sorted: np.ndarray) -> tuple[float, float]:
    prefix = np.cumsum(weights_sorted)
    candidates = np.unique(np.concatenate([sorted_d, sorted_d / 2]))
    return _best_ratio_for_center(sorted_d, prefix, candidates)


def strong_doubling_constant(
    dataset: MetricDataset,
    demand: Demand,
    mode: str = "exact",
    num_subsets: int = 1000,
    seed: int = 0,
) -> DoublingReport:
    """Sup of the ball-mass ratio additionally over subsets of the points.

    mode="exact" enumerates every subset (only allowed for n <= 16, it is
    exponential); mode="sampled" scores `num_subsets` random subsets plus
    the full set, yielding a lower-bound estimate.
    """
    n = dataset.n
    if demand.n != n:
        raise ValueError("demand size does not match dataset")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact" and n > EXACT_STRONG_LIMIT:
        raise ValueError(
            f"exact strong-doubling enumeration limited to n <= {EXACT_STRONG_LIMIT}")

    support_mask = demand.weights > 0
    # Per-center sorted views reused across subsets.
    orders = [np.argsort(dataset.dist_row(x), kind="stable") for x in range(n)]
    sorted_ds = [dataset.dist_row(x)[orders[x]] for x in range(n)]
    sorted_ws = [demand.weights[orders[x]] for x in range(n)]

    def score(mask: np.ndarray) -> tuple[float, int, float] | None:
        """Best (ratio, center, radius) over support centers inside mask."""
        centers = np.flatnonzero(mask & support_mask)
        if centers.size == 0:
            return None
        out = None
        for x in centers:
            sel = mask[orders[x]]
            ratio, radius = _subset_best(sorted_ds[x][sel], sorted_ws[x][sel])
            if out is None or ratio > out[0]:
                out = (ratio, int(x), radius)
        return out

    best: tuple[float, int, float] | None = None
    best_mask: np.ndarray | None = None

    if mode == "exact":
        masks = _all_subset_masks(n)
    else:
        masks = _sampled_subset_masks(n, num_subsets, seed)
    for mask in masks:
        got = score(mask)
        if got is not None and (best is None or got[0] > best[0]):
            best, best_mask = got, mask.copy()

    if best is None:
        raise ValueError("demand has empty support")
    subset = tuple(int(i) for i in np.flatnonzero(best_mask))
    return DoublingReport(best[0], best[1], best[2], subset, mode == "exact")


def _all_subset_masks(n: int):
    for bits in range(1, 1 << n):
        yield np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)


def _sampled_subset_masks(n: int, num_subsets: int, seed: int):
    yield np.ones(n, dtype=bool)  # the full set anchors the estimate at the weak constant
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < num_subsets:
        mask = rng.random(n) < rng.uniform(0.2, 0.9)
        if mask.any():
            produced += 1
            yield mask
