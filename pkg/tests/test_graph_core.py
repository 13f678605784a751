import dataclasses
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sensconn.bits import all_bits, iter_bits, mask_of
from sensconn.errors import ContractViolation, ParseError, QueryEndpointError
from sensconn.graph_core import (
    AugmentedView,
    Graph,
    StatePartition,
    UpdateBatch,
    connected_components,
    dump_graph,
    induced_augmented,
    load_graph,
    parse_query_text,
    parse_update_text,
    reachable_mask,
)

from reference import brute_components, brute_connected
from strategies import graphs, graphs_with_partition


class TestLoadGraph:
    def test_path_with_inactive_middle(self):
        g, p = load_graph("5 4\n0 1\n1 2\n2 3\n3 4\nOFF 1\n2")
        assert (g.n, g.m) == (5, 4)
        assert g.adj == ((1,), (0, 2), (1, 3), (2, 4), (3,))
        assert p.off_vertices == (2,)
        assert p.n_on == 4 and p.n_off == 1

    def test_edgeless(self):
        g, p = load_graph("3 0\nOFF 0\n")
        assert (g.n, g.m) == (3, 0)
        assert p.on_mask == 0b111

    def test_duplicate_edges_collapse(self):
        g, p = load_graph("2 2\n0 1\n1 0\nOFF 0\n")
        assert g.m == 1
        assert g.adj == ((1,), (0,))

    def test_comments_and_blank_lines_ignored(self):
        g, p = load_graph("# fixture\n\n2 1\n# edge below\n0 1\nOFF 1\n# off id\n1\n")
        assert g.m == 1 and p.off_vertices == (1,)

    def test_off_ids_spread_over_lines(self):
        _, p = load_graph("4 0\nOFF 3\n0 2\n3\n")
        assert p.off_vertices == (0, 2, 3)

    def test_malformed_header(self):
        with pytest.raises(ParseError, match="line 1"):
            load_graph("five 4\n")

    def test_edge_endpoint_out_of_range_names_line(self):
        with pytest.raises(ParseError, match="line 3"):
            load_graph("3 2\n0 1\n1 7\nOFF 0\n")

    def test_unknown_off_vertex_names_line(self):
        with pytest.raises(ParseError, match="line 4.*unknown vertex 9"):
            load_graph("3 1\n0 1\nOFF 1\n9\n")

    def test_duplicate_off_vertex_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            load_graph("3 0\nOFF 2\n1 1\n")

    def test_truncated_input(self):
        with pytest.raises(ParseError, match="unexpected end of input"):
            load_graph("3 2\n0 1\n")

    def test_trailing_tokens_rejected(self):
        with pytest.raises(ParseError, match="trailing"):
            load_graph("2 0\nOFF 0\n7\n")

    def test_roundtrip_fixture(self, p5):
        g, p = p5
        assert load_graph(dump_graph(g, p)) == (g, p)

    @given(graphs_with_partition(max_n=16))
    def test_roundtrip_idempotent(self, gp):
        g, p = gp
        text = dump_graph(g, p)
        g2, p2 = load_graph(text)
        assert (g2, p2) == (g, p)
        assert dump_graph(g2, p2) == text


class TestConnectedComponents:
    def test_path_with_middle_removed(self, p5):
        g, _ = p5
        lab = connected_components(g, mask_of([0, 1, 3, 4]))
        assert lab.k == 2
        assert lab.members == ((0, 1), (3, 4))
        assert lab.labels == (0, 0, -1, 1, 1)

    def test_full_path_is_one_component(self, p5):
        g, _ = p5
        assert connected_components(g, all_bits(5)).k == 1

    def test_star_with_center_off(self):
        g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        lab = connected_components(g, mask_of([1, 2, 3]))
        assert lab.k == 3
        assert lab.members == ((1,), (2,), (3,))

    def test_empty_active_set(self, p5):
        g, _ = p5
        assert connected_components(g, 0).k == 0

    def test_numbering_follows_smallest_member(self):
        g = Graph.from_edges(6, [(4, 5), (0, 3)])
        lab = connected_components(g, all_bits(6))
        assert lab.members == ((0, 3), (1,), (2,), (4, 5))

    def test_exhaustive_small_graphs_match_reference(self):
        for n in range(1, 6):
            pairs = list(itertools.combinations(range(n), 2))
            for edge_bits in range(1 << len(pairs)):
                g = Graph.from_edges(n, [pairs[i] for i in iter_bits(edge_bits)])
                for active_bits in range(1 << n):
                    active = set(iter_bits(active_bits))
                    lab = connected_components(g, active_bits)
                    assert set(map(frozenset, lab.members)) == set(brute_components(g, active))

    @given(graphs(max_n=64), st.data())
    @settings(max_examples=80)
    def test_random_graphs_match_reference(self, g, data):
        active_bits = data.draw(st.integers(0, (1 << g.n) - 1))
        active = set(iter_bits(active_bits))
        lab = connected_components(g, active_bits)
        for u in active:
            for v in active:
                assert lab.same_component(u, v) == brute_connected(g, active, u, v)


class TestReachableMask:
    def test_inactive_source_rejected(self, p5):
        g, _ = p5
        with pytest.raises(QueryEndpointError):
            reachable_mask(g, mask_of([0, 1]), 3)

    def test_matches_reference(self, p5):
        g, _ = p5
        active = {0, 1, 3, 4}
        assert set(iter_bits(reachable_mask(g, mask_of(active), 0))) == {0, 1}


class TestInducedAugmented:
    def test_adding_the_only_off_vertex_restores_the_graph(self, p5):
        g, p = p5
        sub, remap = induced_augmented(g, p, {2})
        assert sub == g
        assert remap.to_global == (0, 1, 2, 3, 4)

    def test_without_extras_drops_off_vertices(self, p5):
        g, p = p5
        sub, remap = induced_augmented(g, p)
        assert remap.to_global == (0, 1, 3, 4)
        assert list(sub.edges()) == [(0, 1), (2, 3)]

    def test_cycle_with_one_vertex_restored(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        p = StatePartition.from_off(4, [1, 3])
        sub, remap = induced_augmented(g, p, {1})
        kept = set(remap.to_global)
        expected = {(u, v) for u, v in g.edges() if u in kept and v in kept}
        got = {(remap.to_global[u], remap.to_global[v]) for u, v in sub.edges()}
        assert got == expected == {(0, 1), (1, 2)}

    def test_active_extra_rejected(self, p5):
        g, p = p5
        with pytest.raises(ContractViolation):
            induced_augmented(g, p, {0})

    @given(graphs_with_partition(max_n=12), st.data())
    def test_edge_set_is_the_membership_filter(self, gp, data):
        g, p = gp
        extras = data.draw(st.lists(st.sampled_from(p.off_vertices), unique=True)) if p.n_off else []
        sub, remap = induced_augmented(g, p, extras)
        kept = set(remap.to_global)
        expected = {(u, v) for u, v in g.edges() if u in kept and v in kept}
        got = {(remap.to_global[u], remap.to_global[v]) for u, v in sub.edges()}
        assert got == expected


class TestAugmentedView:
    @given(graphs_with_partition(max_n=12), st.data())
    def test_matches_materialized_subgraph(self, gp, data):
        g, p = gp
        extras = tuple(
            data.draw(st.lists(st.sampled_from(p.off_vertices), unique=True, max_size=2))
        ) if p.n_off else ()
        base, base_remap = induced_augmented(g, p)
        view = AugmentedView(base, base_remap, g, extras)
        sub, remap = induced_augmented(g, p, extras)
        assert view.n == sub.n
        assert view.m == sub.m
        # the view appends extras after the base vertices, so normalize the
        # undirected pairs before comparing
        view_edges = {
            frozenset((view.remap.to_global[u], view.remap.to_global[v]))
            for u, v in view.edges()
        }
        sub_edges = {
            frozenset((remap.to_global[u], remap.to_global[v])) for u, v in sub.edges()
        }
        assert view_edges == sub_edges

    def test_rejects_base_vertices(self, p5):
        g, p = p5
        base, base_remap = induced_augmented(g, p)
        with pytest.raises(ContractViolation):
            AugmentedView(base, base_remap, g, (0,))


class TestUpdateAndQueryFiles:
    def test_update_tokens(self):
        down, up = parse_update_text("+2\n-0\n# note\n+4\n", n=5)
        assert down == [0] and up == [2, 4]

    def test_update_bad_token(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_update_text("2\n", n=5)

    def test_update_out_of_range(self):
        with pytest.raises(ParseError, match="outside"):
            parse_update_text("+9\n", n=5)

    def test_update_double_flip_rejected(self):
        with pytest.raises(ParseError, match="more than once"):
            parse_update_text("+2\n-2\n", n=5)

    def test_query_pairs(self):
        assert parse_query_text("0 4\n1 3\n") == [(0, 4), (1, 3)]

    def test_query_dangling_endpoint(self):
        with pytest.raises(ParseError, match="dangling"):
            parse_query_text("0 4\n1\n")


class TestUpdateBatch:
    def test_valid_batch(self, mixed):
        _, p = mixed
        batch = UpdateBatch.for_partition(p, [2], [5])
        assert batch.d == 2

    def test_deactivating_inactive_vertex_rejected(self, mixed):
        _, p = mixed
        with pytest.raises(ContractViolation):
            UpdateBatch.for_partition(p, [5], [])

    def test_activating_active_vertex_rejected(self, mixed):
        _, p = mixed
        with pytest.raises(ContractViolation):
            UpdateBatch.for_partition(p, [], [1])


class TestImmutability:
    def test_graph_is_frozen(self, p5):
        g, p = p5
        with pytest.raises(dataclasses.FrozenInstanceError):
            g.n = 7
        with pytest.raises(dataclasses.FrozenInstanceError):
            p.on_mask = 0
