import random
from fractions import Fraction

import pytest

from flexicolor.errors import PreconditionError
from flexicolor.graph import Graph
from flexicolor.degeneracy import (
    DegeneracyOrdering,
    Hypergraph,
    epsilon_value,
    exact_game_connectivity,
    flexible_degeneracy_order,
    game_connectivity_by_trees,
    hypergraph_spanning_set,
    is_three_connected,
    is_three_edge_connected,
    leaf_ratio,
    ordering_from_tree,
    removable_ratio,
)
from flexicolor.instances import fig_triplet_cover, random_three_connected


def brute_three_edge_connected(h):
    """Literal cut enumeration of the definition."""
    if h.n <= 1:
        return True
    for mask in range(1, (1 << h.n) - 1):
        crossing = 0
        for e in h.edges:
            sides = {mask >> v & 1 for v in e}
            if len(sides) == 2:
                crossing += 1
        if crossing < 3:
            return False
    return True


def prism(m):
    edges = []
    for i in range(m):
        edges.append((min(i, (i + 1) % m), max(i, (i + 1) % m)))
        edges.append((min(m + i, m + (i + 1) % m), max(m + i, m + (i + 1) % m)))
        edges.append((i, m + i))
    return Graph(2 * m, sorted(set(edges)))


class TestEpsilon:
    def test_recurrence_values(self):
        assert epsilon_value(2) == Fraction(1, 3)
        assert epsilon_value(3) == Fraction(1, 4)
        assert epsilon_value(4) == Fraction(3, 19)
        assert epsilon_value(5) == Fraction(3, 23)
        assert epsilon_value(6) == Fraction(1, 9)

    def test_rejects_small(self):
        with pytest.raises(PreconditionError):
            epsilon_value(1)


class TestOrderingFromTree:
    def setup_method(self):
        # prism on 6 vertices plus a pendant-ish chord keeps it simple:
        # use the wheel W5 instead: center 0, cycle 1..5
        edges = [(0, i) for i in range(1, 6)] + [
            (i, i + 1) for i in range(1, 5)
        ] + [(1, 5)]
        self.g = Graph(6, edges)

    def test_leaves_come_first(self):
        g = self.g  # maxdeg 5 at the center, rim degree 3
        tree = [(1, 0), (1, 2), (2, 3), (3, 4), (4, 5)]
        ordering = ordering_from_tree(g, tree, {0}, 1)
        assert ordering.k == 4
        assert 0 in ordering.first
        ordering.validate(g)

    def test_rejects_max_degree_start(self):
        tree = [(0, i) for i in range(1, 6)]
        with pytest.raises(PreconditionError, match="degree"):
            ordering_from_tree(self.g, tree, set(), 0)

    def test_rejects_non_leaf(self):
        tree = [(1, 0), (0, 2), (2, 3), (3, 4), (4, 5)]
        with pytest.raises(PreconditionError, match="not a leaf"):
            ordering_from_tree(self.g, tree, {0}, 1)

    def test_rejects_dependent_leaf_set(self):
        tree = [(1, 2), (2, 3), (3, 4), (4, 5), (2, 0)]
        with pytest.raises(PreconditionError, match="independent"):
            ordering_from_tree(self.g, tree, {0, 5}, 1)

    def test_validate_catches_back_degree(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
        bad = DegeneracyOrdering((1, 2, 3, 0), 1, frozenset())
        with pytest.raises(PreconditionError):
            bad.validate(g)


class TestHypergraphConnectivity:
    def test_matches_bruteforce(self):
        rng = random.Random(12)
        agree = 0
        for _ in range(60):
            n = rng.randint(2, 6)
            m = rng.randint(2, 9)
            edges = []
            for _ in range(m):
                size = rng.randint(1, min(3, n))
                edges.append(tuple(sorted(rng.sample(range(n), size))))
            h = Hypergraph.build(n, edges)
            assert is_three_edge_connected(h) == brute_three_edge_connected(h)
            agree += 1
        assert agree == 60

    def test_singletons_do_not_help(self):
        h = Hypergraph.build(2, [(0, 1), (0, 1), (0,), (1,)])
        assert not is_three_edge_connected(h)
        h2 = Hypergraph.build(2, [(0, 1)] * 3)
        assert is_three_edge_connected(h2)


class TestSpanningSet:
    def test_multigraph_case(self):
        h = Hypergraph.build(3, [(0, 1), (0, 1), (0, 1), (1, 2), (1, 2), (0, 2)])
        A = hypergraph_spanning_set(h, 2)
        assert len(A) == 2

    def test_triple_edges(self):
        h = Hypergraph.build(
            5,
            [(0, 1, 2), (0, 1, 3), (0, 2, 4), (1, 3, 4), (2, 3, 4), (0, 1, 4), (1, 2, 3)],
        )
        A = hypergraph_spanning_set(h, 3)
        assert len(A) <= (1 - Fraction(1, 4)) * len(h.edges)

    def test_rejects_oversized_edge(self):
        h = Hypergraph.build(4, [(0, 1, 2, 3)] * 3)
        with pytest.raises(PreconditionError, match="exceeds"):
            hypergraph_spanning_set(h, 3)

    def test_rejects_disconnected(self):
        h = Hypergraph.build(4, [(0, 1), (0, 1), (0, 1), (2, 3), (2, 3), (2, 3)])
        with pytest.raises(PreconditionError, match="3-edge-connected"):
            hypergraph_spanning_set(h, 2)

    def test_random_accepted_instances(self):
        rng = random.Random(3)
        accepted = 0
        while accepted < 40:
            n = rng.randint(2, 8)
            d = rng.randint(2, 5)
            m = rng.randint(3, 14)
            edges = []
            for _ in range(m):
                size = rng.randint(1, min(d, n))
                edges.append(tuple(sorted(rng.sample(range(n), size))))
            h = Hypergraph.build(n, edges)
            if not is_three_edge_connected(h):
                continue
            A = hypergraph_spanning_set(h, d)
            assert len(A) <= (1 - epsilon_value(d)) * len(h.edges)
            accepted += 1


class TestPipeline:
    def test_rejects_regular(self):
        g = prism(5)
        with pytest.raises(PreconditionError, match="regular"):
            flexible_degeneracy_order(g, [0, 1])

    def test_rejects_not_three_connected(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2), (0, 3)])
        with pytest.raises(PreconditionError, match="3-connected"):
            flexible_degeneracy_order(g, [1])

    def test_rejects_lone_low_degree_request(self):
        # K8 minus a 3-star at vertex 7 and two disjoint edges: vertex 7
        # is the unique vertex below the maximum degree
        removed = {(0, 7), (1, 7), (2, 7), (3, 4), (5, 6)}
        edges = [
            (a, b)
            for a in range(8)
            for b in range(a + 1, 8)
            if (a, b) not in removed
        ]
        g = Graph(8, edges)
        assert is_three_connected(g)
        low = [v for v in range(8) if g.degree(v) < g.max_degree()]
        assert low == [7]
        with pytest.raises(PreconditionError, match="excluded"):
            flexible_degeneracy_order(g, [7])
        out = flexible_degeneracy_order(g, [0, 7])
        assert out.satisfied >= out.certified_fraction * 2

    def test_complete_bipartite_runs(self):
        g = Graph(7, [(a, 3 + b) for a in range(3) for b in range(4)])
        assert is_three_connected(g)
        out = flexible_degeneracy_order(g, [3, 4, 5, 6])
        out.ordering.validate(g)
        assert out.satisfied >= out.certified_fraction * 4

    def test_random_instances_meet_bound(self):
        for seed in range(25):
            inst = random_three_connected(seed, 12 + 2 * (seed % 5))
            R0 = sorted(inst.request.domain())
            out = flexible_degeneracy_order(inst.g, R0)
            out.ordering.validate(inst.g)
            sat = len(out.ordering.first & set(R0))
            assert sat == out.satisfied
            assert sat >= out.certified_fraction * len(R0)

    def test_empty_request(self):
        inst = random_three_connected(1, 12)
        out = flexible_degeneracy_order(inst.g, [])
        assert out.satisfied == 0
        out.ordering.validate(inst.g)


class TestGameConnectivity:
    def test_known_values(self):
        c4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        k4 = Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        assert exact_game_connectivity(c4)[0] == Fraction(1, 2)
        assert exact_game_connectivity(k4)[0] == Fraction(3, 4)

    def test_triplet_cover_core_ratio(self):
        inst = fig_triplet_cover()
        assert removable_ratio(inst.g, range(5)) == Fraction(2, 5)

    def test_formulations_agree_on_random_graphs(self):
        rng = random.Random(2)
        for _ in range(25):
            n = rng.randint(3, 6)
            edges = {(rng.randrange(v), v) for v in range(1, n)}
            for _ in range(n):
                u, v = rng.sample(range(n), 2)
                edges.add((min(u, v), max(u, v)))
            g = Graph(n, sorted(edges))
            assert exact_game_connectivity(g)[0] == game_connectivity_by_trees(g)

    def test_leaf_ratio_path(self):
        g = Graph(3, [(0, 1), (1, 2)])
        assert leaf_ratio(g, {0, 2}) == 1
        assert leaf_ratio(g, {1}) == 0
