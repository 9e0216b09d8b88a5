import itertools

import numpy as np
import pytest

from worcs.demand import uniform_demand
from worcs.metric import MetricDataset, Subset, diameter
from worcs.oracle import TripletOracle
from worcs.search import (
    FarthestRankTable,
    gts_objective,
    select_pair_fulldist,
    select_pair_gts,
    select_pair_mindist,
    select_pair_random,
    select_pair_rank,
    select_pair_weak,
)

from conftest import full, random_dataset, random_demand


def seed_forcing_anchor(members: np.ndarray, wanted: int) -> int:
    """Smallest seed whose first uniform draw picks `wanted` from members."""
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        if int(members[int(rng.integers(members.size))]) == wanted:
            return seed
    raise AssertionError("no seed found")


def brute_force_gts(dataset, demand, alpha, V):
    best = None
    for x, y in itertools.combinations(list(V), 2):
        obj = gts_objective(dataset, demand, alpha, V, x, y)
        if best is None or obj < best[0] - 1e-15:
            best = (obj, (x, y))
    return best


class TestRankSelector:
    def test_farthest_from_middle_of_line(self, tri_line):
        ranks = FarthestRankTable(tri_line)
        V = full(tri_line)
        seed = seed_forcing_anchor(V.members, 1)
        x, y = select_pair_rank(ranks, V, seed)
        assert (x, y) == (1, 2)  # point 10 is farthest from point 1
        assert tri_line.dist(x, y) >= diameter(tri_line, V) / 2

    def test_two_candidates_give_unique_pair(self, tri_line):
        ranks = FarthestRankTable(tri_line)
        V = Subset.of([0, 2])
        x, y = select_pair_rank(ranks, V, 0)
        assert {x, y} == {0, 2}

    def test_half_diameter_guarantee_all_anchors(self):
        ds = random_dataset(50, 2, seed=4)
        ranks = FarthestRankTable(ds)
        V = full(ds)
        delta = diameter(ds, V)
        for x in range(50):
            y = ranks.farthest_in(x, V)
            assert ds.dist(x, y) >= delta / 2

    def test_farthest_tie_breaks_to_smaller_index(self):
        feats = np.array([[0.0], [1.0], [-1.0]])
        ds = MetricDataset.from_features(["a", "b", "c"], feats)
        ranks = FarthestRankTable(ds)
        assert ranks.farthest_in(0, full(ds)) == 1

    def test_too_small(self, tri_line):
        with pytest.raises(ValueError):
            select_pair_rank(FarthestRankTable(tri_line), Subset.of([0]), 0)


class TestWeakSelector:
    def test_middle_anchor_accepts_far_point(self, tri_line):
        rel = TripletOracle(tri_line, 2.0)
        V = full(tri_line)
        seed = seed_forcing_anchor(V.members, 1)
        x, y, fallback = select_pair_weak(rel, V, seed)
        assert (x, y) == (1, 2)
        assert not fallback
        assert tri_line.dist(x, y) >= diameter(tri_line, V) / (2 * 2.0)

    def test_two_candidates_vacuous(self, tri_line):
        rel = TripletOracle(tri_line, 2.0)
        x, y, fallback = select_pair_weak(rel, Subset.of([0, 2]), 3)
        assert {x, y} == {0, 2}
        assert not fallback

    def test_guarantee_on_random_instances(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            n = int(rng.integers(4, 30))
            alpha = float(rng.choice([1.0, 1.5, 2.0, 5.0]))
            ds = random_dataset(n, int(rng.integers(1, 4)), seed + 1000)
            rel = TripletOracle(ds, alpha)
            V = full(ds)
            x, y, fallback = select_pair_weak(rel, V, seed)
            assert not fallback
            assert ds.dist(x, y) >= diameter(ds, V) / (2 * alpha)

    def test_uses_only_triplet_interface(self, tri_line):
        calls = []

        class Spy(TripletOracle):
            def b_closer_any(self, a, b, cs):
                calls.append((a, b))
                return super().b_closer_any(a, b, cs)

        select_pair_weak(Spy(tri_line, 2.0), full(tri_line), 1)
        assert calls  # selection went through the relation, not raw distances

    def test_fallback_on_inconsistent_relation(self, tri_line):
        class Corrupted(TripletOracle):
            def b_closer_any(self, a, b, cs):
                return True  # every candidate rejected

        x, y, fallback = select_pair_weak(Corrupted(tri_line, 2.0), full(tri_line), 0)
        assert fallback
        assert x != y


class TestGtsSelector:
    def test_line_of_four_matches_brute_force(self):
        from worcs.datasets import line
        ds = line(4)
        demand = uniform_demand(4)
        V = full(ds)
        pair = select_pair_gts(ds, demand, 1.0, V)
        obj, brute_pair = brute_force_gts(ds, demand, 1.0, V)
        assert obj == pytest.approx(0.5)
        assert pair == (0, 2)  # lexicographically first optimum
        assert gts_objective(ds, demand, 1.0, V, *pair) == pytest.approx(obj)

    def test_two_candidates(self, tri_line):
        pair = select_pair_gts(tri_line, uniform_demand(3), 2.0, Subset.of([0, 2]))
        assert pair == (0, 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force_random(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 13))
        alpha = float(rng.choice([1.0, 1.5, 2.0]))
        ds = random_dataset(n, 2, seed + 2000)
        demand = random_demand(n, seed + 3000)
        V = full(ds)
        pair = select_pair_gts(ds, demand, alpha, V)
        obj, _ = brute_force_gts(ds, demand, alpha, V)
        assert gts_objective(ds, demand, alpha, V, *pair) == pytest.approx(obj, abs=1e-12)

    def test_sampled_with_all_pairs_equals_exact(self):
        ds = random_dataset(9, 2, seed=31)
        demand = random_demand(9, 32)
        V = full(ds)
        exact = select_pair_gts(ds, demand, 2.0, V)
        k = len(V) * (len(V) - 1) // 2
        sampled = select_pair_gts(ds, demand, 2.0, V, k=k, seed=7)
        assert gts_objective(ds, demand, 2.0, V, *sampled) == pytest.approx(
            gts_objective(ds, demand, 2.0, V, *exact), abs=1e-15)

    def test_sampled_subset_is_valid_pair(self):
        ds = random_dataset(20, 2, seed=33)
        demand = uniform_demand(20)
        x, y = select_pair_gts(ds, demand, 2.0, full(ds), k=10, seed=0)
        assert x != y and 0 <= x < 20 and 0 <= y < 20


class TestRandomSelector:
    def test_two_candidates(self):
        V = Subset.of([3, 8])
        assert select_pair_random(V, 0) == (3, 8)

    def test_never_degenerate(self):
        V = Subset.of(range(6))
        rng = np.random.default_rng(1)
        for _ in range(500):
            x, y = select_pair_random(V, rng)
            assert x != y

    def test_uniform_over_pairs_chi_square(self):
        V = Subset.of(range(5))
        rng = np.random.default_rng(99)
        counts = {}
        draws = 10 ** 4
        for _ in range(draws):
            pair = select_pair_random(V, rng)
            counts[pair] = counts.get(pair, 0) + 1
        assert len(counts) == 10
        expected = draws / 10
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi2 < 35  # df=9, far beyond any plausible uniform deviation


class TestExtremePairSelectors:
    def test_mindist_line(self, tri_line):
        assert select_pair_mindist(tri_line, full(tri_line)) == (0, 1)

    def test_fulldist_line(self, tri_line):
        assert select_pair_fulldist(tri_line, full(tri_line)) == (0, 2)

    def test_two_candidates(self, tri_line):
        V = Subset.of([1, 2])
        assert select_pair_mindist(tri_line, V) == (1, 2)
        assert select_pair_fulldist(tri_line, V) == (1, 2)

    @pytest.mark.parametrize("seed", range(8))
    def test_match_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 25))
        ds = random_dataset(n, 2, seed + 4000)
        V = full(ds)
        pairs = list(itertools.combinations(range(n), 2))
        dists = {p: ds.dist(*p) for p in pairs}
        assert dists[select_pair_mindist(ds, V)] == min(dists.values())
        assert dists[select_pair_fulldist(ds, V)] == max(dists.values())

    def test_lexicographic_tie_break(self):
        feats = np.array([[0.0], [1.0], [2.0], [3.0]])
        ds = MetricDataset.from_features(list("abcd"), feats)
        # every adjacent pair is at distance 1; (0,1) is the first
        assert select_pair_mindist(ds, full(ds)) == (0, 1)
