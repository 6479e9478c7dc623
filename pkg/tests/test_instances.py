import random

import pytest

from flexicolor.errors import FormatError
from flexicolor.instances import (
    FIXTURES,
    fig_3tree,
    fig_cycle,
    fig_diamond,
    fig_triplet_cover,
    parse,
    parse_dimacs,
    random_bounded_degree,
    random_ktree,
    random_three_connected,
    random_treedepth,
    serialize,
    two_cliques_matching,
)
from flexicolor.degeneracy import is_three_connected
from flexicolor.oracle import optimal_satisfaction


class TestRoundTrip:
    def test_all_fixtures_round_trip_byte_identically(self):
        for name, make in FIXTURES.items():
            inst = make()
            text = serialize(inst)
            assert serialize(parse(text)) == text, name

    def test_random_families_round_trip(self):
        insts = [
            random_bounded_degree(1, 9, 3),
            random_ktree(2, 9, 2),
            random_treedepth(3, 9, 3),
            random_three_connected(4, 12),
        ]
        for inst in insts:
            text = serialize(inst)
            back = parse(text)
            assert serialize(back) == text
            assert back.g == inst.g
            assert back.L == inst.L

    def test_weighted_request_round_trip(self):
        inst = random_treedepth(5, 8, 3, request_kind="weighted")
        text = serialize(inst)
        back = parse(text)
        assert back.request.table == inst.request.table

    def test_empty_request_is_valid(self):
        inst = fig_diamond()
        inst.request = None
        text = serialize(inst)
        assert parse(text).request is None


class TestParserDiagnostics:
    def good(self):
        return serialize(fig_diamond())

    def test_missing_header(self):
        with pytest.raises(FormatError):
            parse("nonsense\n")

    def test_off_list_request_rejected(self):
        text = self.good().replace("request 0 2", "request 0 9")
        with pytest.raises(FormatError, match="not in its list"):
            parse(text)

    def test_duplicate_edge_line_number(self):
        text = self.good().replace("edge 0 1\n", "edge 0 1\nedge 0 1\n")
        with pytest.raises(FormatError) as e:
            parse(text)
        assert e.value.line == 5

    def test_out_of_order_sections(self):
        lines = self.good().splitlines()
        # move the vertices line to the end
        vert = [l for l in lines if l.startswith("vertices")][0]
        lines.remove(vert)
        lines.append(vert)
        with pytest.raises(FormatError, match="order|before"):
            parse("\n".join(lines) + "\n")

    def test_missing_list(self):
        text = self.good().replace("list 3 1 3\n", "")
        with pytest.raises(FormatError, match="missing lists"):
            parse(text)

    def test_bad_weight(self):
        inst = random_treedepth(1, 6, 2)
        text = serialize(inst)
        line = next(l for l in text.splitlines() if l.startswith("request "))
        broken = text.replace(line, " ".join(line.split()[:3]) + " x/y")
        with pytest.raises(FormatError, match="weight"):
            parse(broken)


class TestDimacs:
    def test_parse_and_map_ids(self):
        g = parse_dimacs("c comment\np edge 3 2\ne 1 2\ne 2 3\n")
        assert g.n == 3 and g.edges == ((0, 1), (1, 2))

    def test_edge_count_mismatch(self):
        with pytest.raises(FormatError, match="announces"):
            parse_dimacs("p edge 3 5\ne 1 2\n")

    def test_unknown_line(self):
        with pytest.raises(FormatError):
            parse_dimacs("p edge 2 1\nq 1 2\n")


class TestFixtures:
    def test_diamond_matches_figure(self):
        inst = fig_diamond()
        assert inst.g.n == 4 and inst.g.m == 5
        assert inst.L == {0: {1, 2}, 1: {1, 2, 3}, 2: {1, 2, 3}, 3: {1, 3}}
        assert inst.request.is_widespread(inst.g)
        assert optimal_satisfaction(inst.g, inst.L, inst.request).optimum == 0

    def test_cycle_fixture_zero_optimum(self):
        inst = fig_cycle()
        assert inst.g.is_cycle() and inst.g.n == 10
        assert all(len(inst.L[v]) == 2 for v in range(10))
        assert optimal_satisfaction(inst.g, inst.L, inst.request).optimum == 0

    def test_cycle_fixture_deterministic(self):
        assert serialize(fig_cycle()) == serialize(fig_cycle())

    def test_3tree_order_valid(self):
        inst = fig_3tree()
        assert inst.g.n == 8 and inst.ktree.k == 3
        inst.validate()

    def test_triplet_cover_shape(self):
        inst = fig_triplet_cover()
        assert inst.g.n == 15 and inst.g.m == 30
        for v in range(5, 15):
            assert inst.g.degree(v) == 3
        assert is_three_connected(inst.g)

    def test_two_cliques_matching_shape(self):
        inst = two_cliques_matching(3)
        assert inst.g.n == 6 and inst.g.m == 9
        assert all(inst.g.degree(v) == 3 for v in range(6))
        assert not inst.g.is_complete()


class TestRandomFamilies:
    def test_bounded_degree_class(self):
        for seed in range(10):
            inst = random_bounded_degree(seed, 10, 4)
            g = inst.g
            assert g.is_connected() and g.max_degree() == 4
            for v in range(g.n):
                need = 4 if g.degree(v) == 4 else g.degree(v) + 1
                assert len(inst.L[v]) == need

    def test_ktree_orders_validate(self):
        for seed in range(5):
            inst = random_ktree(seed, 12, 3)
            inst.validate()

    def test_treedepth_heights(self):
        for seed in range(5):
            inst = random_treedepth(seed, 12, 3)
            inst.validate()
            assert inst.forest.height() <= 3

    def test_three_connected_verified(self):
        for seed in range(5):
            inst = random_three_connected(seed, 12)
            assert is_three_connected(inst.g)
            assert inst.g.max_degree() == 4
            degs = {inst.g.degree(v) for v in range(inst.g.n)}
            assert len(degs) > 1

    def test_deterministic_per_seed(self):
        a = random_bounded_degree(9, 10, 3)
        b = random_bounded_degree(9, 10, 3)
        assert serialize(a) == serialize(b)
