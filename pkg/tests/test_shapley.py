"""shapley-estimator: ranges, sample bound, Monte-Carlo and exact values."""

import math
import random

import numpy as np
import pytest

from bimshap.graph import Graph
from bimshap.mia import build_miia_cache, sigma
from bimshap.shapley import (BimGame, SamplingPlan, aggregate_range,
                             estimate_shapley, exact_shapley, load_shapley,
                             marginal_gain_range, sample_bound, save_shapley)

import oracles
from conftest import graph_from_arcs


def make_game(graph, theta=0.01):
    return BimGame(build_miia_cache(graph, theta))


class TestMarginalGainRange:
    def test_isolated_node(self):
        g = Graph(3, [(0, 1)], directed=False)
        assert marginal_gain_range(g, 2) == (0.0, 0.0)

    def test_formula(self):
        # deg(u)=2, neighbor degrees 3 and 2 -> 1 + (0.5 + 1.0) = 2.5
        g = Graph(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4)], directed=False)
        # node 0: deg 2; neighbors 1 (deg 3), 2 (deg 3)
        lo, hi = marginal_gain_range(g, 0)
        assert lo == 0.0 and hi == 1.0 + 0.5 + 0.5
        # node 3: deg 1, sole neighbor 1 has deg 3
        assert marginal_gain_range(g, 3) == (0.0, 0.5 + 0.5)

    def test_degree_one_neighbor_contributes_one(self):
        g = Graph(2, [(0, 1)], directed=False)
        assert marginal_gain_range(g, 0) == (0.0, 0.5 + 1.0)

    def test_directed_uses_out_and_in_degrees(self):
        g = graph_from_arcs(3, [(0, 1, 0.5), (0, 2, 0.5), (2, 1, 0.5)])
        # out-neighbors of 0: {1, 2}; indeg(1) = 2, indeg(2) = 1
        lo, hi = marginal_gain_range(g, 0)
        assert hi == 1.0 + 1.0 + 1.0


class TestAggregateRange:
    def test_all_isolated(self):
        g = Graph(4, [], directed=False, raw_ids=list("abcd"))
        assert aggregate_range(g) == 0.0

    def test_mean(self):
        # star K_{1,3}: c(center) = 1.5 + 3*1.0, c(leaf) = 0.5 + 1/2
        g = Graph(4, [(0, 1), (0, 2), (0, 3)], directed=False)
        expect = (4.5 + 3 * 1.0) / 4
        assert aggregate_range(g) == pytest.approx(expect, abs=1e-15)

    def test_empty_graph_rejected(self):
        g = Graph(0, [], directed=False, raw_ids=[])
        with pytest.raises(ValueError):
            aggregate_range(g)


class TestSampleBound:
    def test_zero_range_still_one_permutation(self):
        assert sample_bound(0.1, 0.1, 0.0) == 1

    def test_known_values(self):
        assert sample_bound(0.1, 0.05, 1.0) == 185
        assert sample_bound(0.5, 0.1, 2.0) == 24

    def test_validation(self):
        with pytest.raises(ValueError):
            sample_bound(0.0, 0.1, 1.0)
        with pytest.raises(ValueError):
            sample_bound(0.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            sample_bound(0.1, 0.1, -1.0)

    def test_plan_capping(self):
        plan = SamplingPlan.from_error_bound(0.1, 0.05, 1.0, tau_cap=50)
        assert plan.tau == 50 and plan.tau_bound == 185
        uncapped = SamplingPlan.from_error_bound(0.1, 0.05, 1.0)
        assert uncapped.tau == uncapped.tau_bound == 185


class TestExactShapley:
    def test_edgeless_graph_symmetric_unit_values(self):
        g = Graph(4, [], directed=False, raw_ids=list("abcd"))
        phi = exact_shapley(make_game(g))
        assert np.allclose(phi, 1.0, atol=1e-12)

    def test_two_node_sure_arc(self, two_node_sure_arc):
        phi = exact_shapley(make_game(two_node_sure_arc))
        assert phi[0] == pytest.approx(1.5, abs=1e-12)
        assert phi[1] == pytest.approx(0.5, abs=1e-12)

    def test_matches_full_permutation_average(self):
        rng = random.Random(13)
        for trial in range(8):
            n = rng.randint(2, 5)
            edges, probs = oracles.random_graph(rng, n, edge_prob=0.5)
            g = Graph(n, edges, directed=True, probs=probs)
            game = make_game(g)
            expect = oracles.permutation_shapley(game)
            got = exact_shapley(game)
            assert np.allclose(got, expect, atol=1e-9)

    def test_efficiency(self):
        rng = random.Random(14)
        for trial in range(10):
            n = rng.randint(1, 8)
            edges, probs = oracles.random_graph(rng, n, edge_prob=0.3)
            g = Graph(n, edges, directed=True, probs=probs)
            game = make_game(g)
            phi = exact_shapley(game)
            assert abs(phi.sum() - game.value(range(n))) <= 1e-9
            assert abs(game.value(range(n)) - n) <= 1e-9  # sigma(V) = n

    def test_dummy_player_gets_one(self):
        g = Graph(4, [(0, 1), (1, 2)], directed=False)
        phi = exact_shapley(make_game(g))
        assert phi[3] == pytest.approx(1.0, abs=1e-12)

    def test_refuses_large_games(self):
        g = Graph(11, [], directed=False, raw_ids=[str(i) for i in range(11)])
        with pytest.raises(ValueError):
            exact_shapley(make_game(g))

    def test_scaling_preserves_ranking(self):
        rng = random.Random(15)
        edges, probs = oracles.random_graph(rng, 6, edge_prob=0.4)
        g = Graph(6, edges, directed=True, probs=probs)
        game = make_game(g)
        phi = exact_shapley(game)

        class Scaled:
            n = game.n

            def value(self, seeds):
                return 3.5 * game.value(seeds)

        scaled = exact_shapley(Scaled())
        assert np.allclose(scaled, 3.5 * phi, atol=1e-9)
        assert list(np.argsort(-scaled)) == list(np.argsort(-phi))


class TestEstimateShapley:
    def test_single_node(self):
        g = Graph(1, [], directed=False, raw_ids=["a"])
        plan = SamplingPlan.from_error_bound(0.5, 0.5, 1.0, tau_cap=3)
        est = estimate_shapley(make_game(g), plan, master_seed=0)
        assert est.phi[0] == 1.0

    def test_two_node_exact_in_expectation(self, two_node_sure_arc):
        game = make_game(two_node_sure_arc)
        plan = SamplingPlan.from_error_bound(0.05, 0.05, 2.0)
        est = estimate_shapley(game, plan, master_seed=4)
        assert est.phi[0] == pytest.approx(1.5, abs=0.05)
        assert est.phi[1] == pytest.approx(0.5, abs=0.05)
        assert est.phi.sum() == pytest.approx(2.0, abs=1e-9)  # per-perm gains telescope

    def test_deterministic_given_master_seed(self):
        rng = random.Random(31)
        edges, probs = oracles.random_graph(rng, 7, edge_prob=0.35)
        g = Graph(7, edges, directed=True, probs=probs)
        game = make_game(g)
        plan = SamplingPlan.from_error_bound(0.2, 0.2, 1.0, tau_cap=25)
        a = estimate_shapley(game, plan, master_seed=123)
        b = estimate_shapley(game, plan, master_seed=123)
        c = estimate_shapley(game, plan, master_seed=124)
        assert (a.phi == b.phi).all()
        assert not (a.phi == c.phi).all()

    def test_worker_count_does_not_change_results(self):
        rng = random.Random(32)
        edges, probs = oracles.random_graph(rng, 8, edge_prob=0.3)
        g = Graph(8, edges, directed=True, probs=probs)
        game = make_game(g)
        plan = SamplingPlan.from_error_bound(0.2, 0.2, 1.0, tau_cap=12)
        serial = estimate_shapley(game, plan, master_seed=9, workers=1)
        parallel = estimate_shapley(game, plan, master_seed=9, workers=2)
        assert (serial.phi == parallel.phi).all()

    def test_repetitions_are_averaged(self, two_node_sure_arc):
        game = make_game(two_node_sure_arc)
        one = SamplingPlan.from_error_bound(0.2, 0.2, 1.0, tau_cap=10, repetitions=1)
        three = SamplingPlan.from_error_bound(0.2, 0.2, 1.0, tau_cap=10, repetitions=3)
        a = estimate_shapley(game, one, master_seed=5)
        b = estimate_shapley(game, three, master_seed=5)
        assert np.allclose(a.phi, b.phi, atol=1e-12)  # sigma is deterministic

    def test_prefix_sweep_matches_independent_evaluations(self):
        rng = random.Random(33)
        for trial in range(10):
            n = rng.randint(2, 8)
            edges, probs = oracles.random_graph(rng, n, edge_prob=0.4)
            g = Graph(n, edges, directed=True, probs=probs)
            cache = build_miia_cache(g, 0.01)
            game = BimGame(cache)
            plan = SamplingPlan.from_error_bound(0.5, 0.5, 1.0, tau_cap=1)
            est = estimate_shapley(game, plan, master_seed=trial)
            perm = np.random.default_rng([trial, 0]).permutation(n)
            prefix = []
            expect = np.zeros(n)
            for u in perm:
                before = sigma(cache, prefix)
                prefix.append(int(u))
                expect[u] = sigma(cache, prefix) - before
            assert np.allclose(est.phi, expect, atol=1e-12)

    def test_estimate_converges_to_exact(self):
        rng = random.Random(34)
        edges, probs = oracles.random_graph(rng, 6, edge_prob=0.4)
        g = Graph(6, edges, directed=True, probs=probs)
        game = make_game(g)
        exact = exact_shapley(game)
        plan = SamplingPlan.from_error_bound(0.05, 0.05, aggregate_range(g))
        est = estimate_shapley(game, plan, master_seed=77)
        assert np.max(np.abs(est.phi - exact)) <= 0.05


class TestShapleyFiles:
    def test_round_trip(self, tmp_path, chain_graph):
        game = make_game(chain_graph)
        plan = SamplingPlan.from_error_bound(0.5, 0.5, 1.0, tau_cap=4)
        est = estimate_shapley(game, plan, master_seed=2)
        path = tmp_path / "phi.csv"
        save_shapley(path, chain_graph, est)
        phi = load_shapley(path, chain_graph)
        assert (phi == est.phi).all()

    def test_load_rejects_missing_node(self, tmp_path, chain_graph):
        path = tmp_path / "phi.csv"
        path.write_text("0,1.5\n1,0.5\n")
        with pytest.raises(ValueError, match="2"):
            load_shapley(path, chain_graph)
