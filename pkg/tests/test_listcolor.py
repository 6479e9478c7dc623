import random
from fractions import Fraction
from itertools import combinations

import pytest

from flexicolor.errors import BudgetExceededError, PreconditionError
from flexicolor.graph import Graph
from flexicolor.listcolor import (
    Infeasible,
    Request,
    check_coloring,
    degree_choosable_coloring,
    precolor_and_extend,
    reduce_to_unique,
    satisfied_amount,
    validate_lists,
)
from flexicolor.oracle import is_degree_choosable_here


def all_small_graphs(n):
    """All connected graphs on n labeled vertices."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = Graph(n, edges)
        if g.is_connected():
            yield g


class TestValidation:
    def test_missing_and_empty_lists(self):
        g = Graph(2, [(0, 1)])
        with pytest.raises(PreconditionError):
            validate_lists(g, {0: {1}})
        with pytest.raises(PreconditionError):
            validate_lists(g, {0: {1}, 1: set()})

    def test_request_kinds(self):
        with pytest.raises(PreconditionError):
            Request("other")
        with pytest.raises(PreconditionError):
            Request("unique", prefs={0: 1}, weights={0: 0})
        r = Request("weighted", table={(0, 1): Fraction(2), (0, 2): Fraction(0)})
        assert r.domain() == {0}
        assert r.total() == 2

    def test_widespread(self):
        g = Graph(2, [(0, 1)])
        assert Request("unweighted", prefs={0: 1, 1: 1}).is_widespread(g)
        assert not Request("unweighted", prefs={0: 1}).is_widespread(g)

    def test_check_coloring_names_offender(self):
        g = Graph(2, [(0, 1)])
        L = {0: {1, 2}, 1: {1, 2}}
        with pytest.raises(PreconditionError, match="vertex 1"):
            check_coloring(g, L, {0: 1, 1: 3})
        with pytest.raises(PreconditionError, match=r"\(0,1\)"):
            check_coloring(g, L, {0: 1, 1: 1})
        with pytest.raises(PreconditionError, match="misses"):
            check_coloring(g, L, {0: 1})

    def test_satisfied_amount_kinds(self):
        g = Graph(2, [(0, 1)])
        L = {0: {1, 2}, 1: {1, 2}}
        col = {0: 1, 1: 2}
        assert satisfied_amount(g, L, col, Request("unweighted", prefs={0: 1, 1: 1})) == 1
        r = Request("unique", prefs={0: 1}, weights={0: Fraction(5)})
        assert satisfied_amount(g, L, col, r) == 5
        rw = Request("weighted", table={(0, 1): Fraction(2), (1, 1): Fraction(7)})
        assert satisfied_amount(g, L, col, rw) == 2


class TestReduceToUnique:
    def test_argmax_with_smallest_color_tiebreak(self):
        L = {0: {1, 2, 3}}
        r = Request(
            "weighted",
            table={(0, 1): Fraction(3), (0, 2): Fraction(5), (0, 3): Fraction(5)},
        )
        u = reduce_to_unique(r, L)
        assert u.kind == "unique"
        assert u.prefs == {0: 2} and u.weights[0] == 5

    def test_drops_zero_weight_vertices(self):
        L = {0: {1}, 1: {1}}
        r = Request("weighted", table={(0, 1): Fraction(0), (1, 1): Fraction(1)})
        u = reduce_to_unique(r, L)
        assert 0 not in u.prefs

    def test_reduction_factor_bound(self):
        # kept weight is at least total / max list size
        rng = random.Random(11)
        for _ in range(30):
            L = {v: set(rng.sample(range(1, 6), 3)) for v in range(4)}
            table = {}
            for v in range(4):
                for c in L[v]:
                    table[(v, c)] = Fraction(rng.randint(0, 9))
            r = Request("weighted", table=table)
            if r.total() == 0:
                continue
            u = reduce_to_unique(r, L)
            assert u.total() * 3 >= r.total()


class TestDegreeChoosable:
    def test_even_cycle_tight_lists_colorable(self):
        g = Graph(4, [(i, (i + 1) % 4) for i in range(4)])
        L = {v: {1, 2} for v in range(4)}
        col = degree_choosable_coloring(g, L)
        check_coloring(g, L, col)

    def test_odd_cycle_tight_lists_infeasible(self):
        g = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
        L = {v: {1, 2} for v in range(5)}
        out = degree_choosable_coloring(g, L)
        assert isinstance(out, Infeasible)

    def test_slack_vertex_fast_path(self):
        g = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
        L = {v: {1, 2} for v in range(5)}
        L[0] = {1, 2, 3}
        col = degree_choosable_coloring(g, L)
        check_coloring(g, L, col)

    def test_list_below_degree_rejected(self):
        g = Graph(3, [(0, 1), (0, 2), (1, 2)])
        with pytest.raises(PreconditionError):
            degree_choosable_coloring(g, {0: {1}, 1: {1, 2}, 2: {1, 2}})

    def test_budget_cap_applies_only_to_bad_instances(self):
        g = Graph(30, [(i, i + 1) for i in range(29)])
        L = {v: {1, 2} for v in range(30)}
        L[0] = {1}
        L[29] = {1}
        # path blocks are cliques (edges) and all lists are tight
        with pytest.raises(BudgetExceededError):
            degree_choosable_coloring(g, L, component_cap=20)

    def test_agrees_with_oracle_on_sweep(self):
        # all connected graphs n <= 5, a few random tight list choices
        rng = random.Random(3)
        checked = 0
        for n in (3, 4, 5):
            for g in all_small_graphs(n):
                for _ in range(2):
                    L = {
                        v: set(
                            rng.sample(range(1, 5), min(4, max(1, g.degree(v))))
                        )
                        for v in range(n)
                    }
                    try:
                        validate_lists(g, L)
                        out = degree_choosable_coloring(g, L)
                    except PreconditionError:
                        continue
                    truth = is_degree_choosable_here(g, L)
                    if isinstance(out, Infeasible):
                        assert not truth
                    else:
                        check_coloring(g, L, out)
                        assert truth
                    checked += 1
        assert checked > 100


class TestPrecolorAndExtend:
    def test_extends_around_fixed_triangle_vertex(self):
        # bowtie: requests at a pendant triangle vertex
        g = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
        L = {0: {1, 2, 3}, 1: {1, 2, 3}, 2: {1, 2, 3, 4}, 3: {1, 2, 3}, 4: {1, 2, 3}}
        col = precolor_and_extend(g, L, {0: 1})
        assert not isinstance(col, Infeasible)
        assert col[0] == 1
        check_coloring(g, L, col)

    def test_rejects_adjacent_fixed_vertices(self):
        g = Graph(3, [(0, 1), (1, 2)])
        L = {v: {1, 2} for v in range(3)}
        with pytest.raises(PreconditionError):
            precolor_and_extend(g, L, {0: 1, 1: 2})

    def test_rejects_off_list_fixed_color(self):
        g = Graph(2, [(0, 1)])
        with pytest.raises(PreconditionError):
            precolor_and_extend(g, {0: {1}, 1: {1, 2}}, {0: 9})

    def test_infeasible_component_reports_original_ids(self):
        # fixing color 1 at the center strips the pendant triangle 3,4,5
        # down to a tight K3 on lists {2,3}
        g = Graph(
            6,
            [(0, 1), (0, 2), (1, 2), (0, 3), (3, 4), (3, 5), (4, 5)],
        )
        L = {
            0: {1, 2, 3},
            1: {1, 2, 3},
            2: {1, 2, 3},
            3: {1, 2, 3},
            4: {2, 3},
            5: {2, 3},
        }
        out = precolor_and_extend(g, L, {0: 1})
        assert isinstance(out, Infeasible)
        assert set(out.component) == {3, 4, 5}
