"""community: Louvain detection and modularity scoring."""

import random

import pytest

from bimshap.community import (CommunityPartition, PartitionError,
                               detect_communities, modularity)
from bimshap.graph import Graph

import oracles


def two_triangles_with_bridge():
    return Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)],
                 directed=False)


def two_disjoint_triangles():
    return Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
                 directed=False)


class TestModularity:
    def test_single_community_is_zero(self):
        g = two_triangles_with_bridge()
        assert modularity(g, [0] * 6) == pytest.approx(0.0, abs=1e-12)

    def test_two_disjoint_triangles_half(self):
        g = two_disjoint_triangles()
        assert modularity(g, [0, 0, 0, 1, 1, 1]) == pytest.approx(0.5, abs=1e-12)

    def test_edgeless_singletons_zero(self):
        g = Graph(5, [], directed=False, raw_ids=list("abcde"))
        assert modularity(g, list(range(5))) == 0.0

    def test_partition_must_cover(self):
        g = two_disjoint_triangles()
        with pytest.raises(PartitionError):
            modularity(g, [0, 0, 0])

    def test_directed_graph_uses_symmetrized_view(self):
        und = two_disjoint_triangles()
        dire = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
                     directed=True)
        labels = [0, 0, 0, 1, 1, 1]
        assert modularity(dire, labels) == modularity(und, labels)

    def test_range(self):
        rng = random.Random(8)
        for trial in range(15):
            n = rng.randint(2, 7)
            edges, _ = oracles.random_graph(rng, n, edge_prob=0.5, directed=False)
            g = Graph(n, edges, directed=False)
            labels = [rng.randrange(3) for _ in range(n)]
            q = modularity(g, labels)
            assert -0.5 - 1e-12 <= q <= 1.0 + 1e-12


class TestDetectCommunities:
    def test_edgeless_gives_singletons(self):
        g = Graph(4, [], directed=False, raw_ids=list("abcd"))
        part = detect_communities(g, seed=0)
        assert part.size == 4
        assert part.modularity == 0.0
        assert sorted(map(tuple, part.communities)) == [(0,), (1,), (2,), (3,)]

    def test_two_triangles_with_bridge(self):
        g = two_triangles_with_bridge()
        expect, expect_q = oracles.best_modularity_partition(g, modularity)
        part = detect_communities(g, seed=1)
        assert sorted(map(sorted, part.communities)) == sorted(expect)
        assert part.modularity == pytest.approx(expect_q, abs=1e-12)
        assert sorted(map(sorted, expect)) == [[0, 1, 2], [3, 4, 5]]

    def test_two_disjoint_triangles_score(self):
        part = detect_communities(two_disjoint_triangles(), seed=0)
        assert part.modularity == pytest.approx(0.5, abs=1e-12)

    def test_partition_is_valid(self):
        rng = random.Random(12)
        for trial in range(10):
            n = rng.randint(1, 20)
            edges, _ = oracles.random_graph(rng, n, edge_prob=0.2, directed=False)
            g = Graph(n, edges, directed=False)
            part = detect_communities(g, seed=trial)
            members = sorted(u for block in part.communities for u in block)
            assert members == list(range(n))
            assert all(part.assignment[u] == c
                       for c, block in enumerate(part.communities) for u in block)

    def test_deterministic_per_seed(self):
        rng = random.Random(44)
        edges, _ = oracles.random_graph(rng, 30, edge_prob=0.15, directed=False)
        g = Graph(30, edges, directed=False)
        a = detect_communities(g, seed=5)
        b = detect_communities(g, seed=5)
        assert a.assignment == b.assignment and a.modularity == b.modularity

    def test_levels_never_decrease_modularity(self):
        rng = random.Random(45)
        for trial in range(5):
            edges, _ = oracles.random_graph(rng, 40, edge_prob=0.12, directed=False)
            g = Graph(40, edges, directed=False)
            part = detect_communities(g, seed=trial)
            levels = part.level_modularity
            assert all(b >= a - 1e-12 for a, b in zip(levels, levels[1:]))

    def test_reported_score_matches_public_function(self):
        g = two_triangles_with_bridge()
        part = detect_communities(g, seed=3)
        assert part.modularity == modularity(g, part.assignment)

    def test_largest_ties_break_by_index(self):
        part = CommunityPartition.from_assignment(
            two_disjoint_triangles(), [0, 0, 0, 1, 1, 1])
        assert part.largest() == 0
