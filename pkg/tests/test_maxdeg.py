import random
from fractions import Fraction

import pytest

from flexicolor.errors import PreconditionError
from flexicolor.graph import Graph
from flexicolor.instances import (
    fig_diamond,
    random_bounded_degree,
    two_cliques_matching,
)
from flexicolor.listcolor import Request, check_coloring
from flexicolor.maxdeg import (
    b_value,
    classify_components,
    solve_unweighted,
    solve_weighted,
)
from flexicolor.oracle import bruteforce_bad_component, optimal_satisfaction


class TestPreconditions:
    def test_complete_graph_rejected(self):
        g = Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        L = {v: {1, 2, 3} for v in range(4)}
        with pytest.raises(PreconditionError, match="complete"):
            solve_unweighted(g, L, Request("unweighted", prefs={0: 1}))

    def test_low_degree_rejected(self):
        g = Graph(4, [(i, (i + 1) % 4) for i in range(4)])
        L = {v: {1, 2, 3} for v in range(4)}
        with pytest.raises(PreconditionError, match="degree"):
            solve_unweighted(g, L, Request("unweighted", prefs={0: 1}))

    def test_figure_diamond_lists_violate_the_class(self):
        # degree-2 vertex carrying only 2 colors is outside the solver's
        # list class, which wants degree+1 below the maximum degree
        inst = fig_diamond()
        with pytest.raises(PreconditionError, match="list size"):
            solve_unweighted(inst.g, inst.L, inst.request)


class TestFixtureBounds:
    def test_diamond_single_request(self):
        g = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
        L = {v: {1, 2, 3} for v in range(4)}
        out = solve_unweighted(g, L, Request("unweighted", prefs={0: 1}))
        assert out.satisfied >= 1
        assert out.coloring[0] == 1

    def test_two_cliques_matching(self):
        inst = two_cliques_matching(3)
        out = solve_unweighted(inst.g, inst.L, inst.request)
        # the oracle optimum on this construction is exactly 1
        assert optimal_satisfaction(inst.g, inst.L, inst.request).optimum == 1
        assert out.satisfied == 1
        assert out.satisfied >= out.certified_amount

    def test_empty_request(self):
        inst = two_cliques_matching(3)
        out = solve_unweighted(inst.g, inst.L, Request("unweighted"))
        assert out.satisfied == 0
        check_coloring(inst.g, inst.L, out.coloring)


class TestClassification:
    def test_matches_bruteforce_on_pruned_components(self):
        rng = random.Random(17)
        agreed = 0
        for seed in range(40):
            inst = random_bounded_degree(seed, rng.randint(6, 10), 3)
            g, L = inst.g, inst.L
            prefs = dict(inst.request.prefs)
            S = set()
            for v in sorted(prefs):
                if all(u not in S for u in g.neighbors(v)):
                    S.add(v)
            reports = classify_components(g, L, S, prefs)
            for rep in reports:
                sub, ids = g.induced(rep.vertices)
                relabeled = {
                    i: rep.pruned_lists[ids[i]] for i in range(sub.n)
                }
                assert rep.bad == bruteforce_bad_component(sub, relabeled)
                agreed += 1
        assert agreed > 40

    def test_b_value_two_components_destroyed(self):
        # center r joins two tight triangles; removing r from the
        # precolored set frees a color in both, destroying two bad
        # components at once
        g = Graph(
            7,
            [
                (0, 1), (0, 2), (1, 2),
                (3, 4), (3, 5), (4, 5),
                (6, 0), (6, 3), (6, 1),
            ],
        )
        L = {
            0: {1, 2, 3},
            1: {1, 2, 3},
            2: {1, 2},
            3: {1, 2, 3},
            4: {1, 2},
            5: {1, 2},
            6: {1, 2, 3},
        }
        prefs = {6: 3}
        assert b_value(g, L, {6}, prefs, 6) == 2


class TestRandomBounds:
    def test_unweighted_certified_bound_and_oracle(self):
        for seed in range(40):
            delta = 3 + seed % 3
            inst = random_bounded_degree(seed, 8 + seed % 4, delta)
            out = solve_unweighted(inst.g, inst.L, inst.request, "brooks")
            check_coloring(inst.g, inst.L, out.coloring)
            assert out.satisfied >= out.certified_amount
            assert out.certified_fraction >= Fraction(1, 6 * delta)
            opt = optimal_satisfaction(inst.g, inst.L, inst.request)
            assert out.satisfied <= opt.optimum

    def test_greedy_mode_bound(self):
        for seed in range(20):
            inst = random_bounded_degree(seed + 100, 10, 3)
            out = solve_unweighted(inst.g, inst.L, inst.request, "greedy")
            assert out.satisfied >= out.certified_amount
            assert out.certified_fraction >= Fraction(1, 6 * 4)

    def test_weighted_unique_bound(self):
        rng = random.Random(23)
        for seed in range(25):
            inst = random_bounded_degree(seed, 10, 3, request_kind="unique")
            out = solve_weighted(inst.g, inst.L, inst.request)
            assert out.satisfied >= out.certified_amount
            assert out.certified_fraction >= Fraction(1, 2 * 27)
            opt = optimal_satisfaction(inst.g, inst.L, inst.request)
            assert out.satisfied <= opt.optimum

    def test_weighted_general_bound(self):
        for seed in range(25):
            inst = random_bounded_degree(seed, 10, 3, request_kind="weighted")
            out = solve_weighted(inst.g, inst.L, inst.request)
            assert out.satisfied >= out.certified_amount
            max_list = max(len(inst.L[v]) for v in range(inst.g.n))
            assert out.certified_fraction >= Fraction(1, 2 * 27 * max_list)

    def test_trace_reports_moves_and_mode(self):
        inst = random_bounded_degree(7, 12, 4)
        out = solve_unweighted(inst.g, inst.L, inst.request, "brooks")
        assert "chi_hat" in out.trace and "moves" in out.trace
        assert out.trace["chi_hat"] <= 5
