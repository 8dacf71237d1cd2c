import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minorkit import (
    Contract,
    EdgeDelete,
    Graph,
    VertexDelete,
    apply_edit,
    components,
    enumerate_cycles,
    invert_edit,
    is_bridge,
    is_connected,
    is_tree,
    reduce_to_spanning_tree,
    replay_edits,
)
from minorkit.exceptions import Disconnected, InvalidEdit, OracleTooLarge, SequenceMismatch

from helpers import random_connected, random_tree


def path3():
    return Graph(3, [(1, 2), (2, 3)])


def triangle():
    return Graph(3, [(1, 2), (2, 3), (1, 3)])


def k4():
    return Graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


class TestComponents:
    def test_no_removal(self):
        assert components(path3()) == [(1, 2, 3)]

    def test_bridge_split(self):
        assert components(path3(), [(1, 2)]) == [(1,), (2, 3)]

    def test_triangle_stays_connected(self):
        assert components(triangle(), [(1, 2)]) == [(1, 2, 3)]

    def test_removed_must_be_edges(self):
        with pytest.raises(ValueError):
            components(path3(), [(1, 3)])


class TestBridges:
    def test_path_edge(self):
        assert is_bridge(path3(), (1, 2))

    def test_triangle_edges(self):
        for e in triangle().edges:
            assert not is_bridge(triangle(), e)

    def test_two_triangles_joined(self):
        g = Graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (3, 4)])
        assert is_bridge(g, (3, 4))
        assert not is_bridge(g, (1, 2))


class TestCycles:
    def test_triangle(self):
        assert len(enumerate_cycles(triangle())) == 1

    def test_k4_has_seven(self):
        # 4 triangles plus 3 quadrilaterals
        cycles = enumerate_cycles(k4())
        assert len(cycles) == 7
        assert sorted(len(c) for c in cycles) == [3, 3, 3, 3, 4, 4, 4]

    def test_tree_has_none(self):
        assert enumerate_cycles(random_tree(8, random.Random(1))) == []

    def test_vertex_gate(self):
        with pytest.raises(OracleTooLarge):
            enumerate_cycles(Graph(11, []))

    def test_count_gate(self):
        with pytest.raises(OracleTooLarge):
            enumerate_cycles(k4(), limit=3)


class TestApplyEdit:
    def test_contract_path_to_edge(self):
        g = apply_edit(path3(), Contract(2, 3))
        assert g.n == 2 and g.edges == ((1, 2),)

    def test_edge_delete_triangle(self):
        g = apply_edit(triangle(), EdgeDelete(1, 2))
        assert g.n == 3 and set(g.edges) == {(1, 3), (2, 3)}

    def test_delete_isolated_max_vertex(self):
        g = Graph(4, [(1, 2), (2, 3)])
        h = apply_edit(g, VertexDelete(4))
        assert h.n == 3 and h.edges == g.edges

    def test_delete_relabels_max_into_gap(self):
        h = apply_edit(path3(), VertexDelete(2))
        # old vertex 3 takes label 2; no edges survive
        assert h.n == 2 and h.edges == ()

    def test_contract_avoids_parallel_edges(self):
        g = triangle()
        h = apply_edit(g, Contract(1, 3))
        assert h.n == 2 and h.edges == ((1, 2),)

    def test_missing_targets(self):
        with pytest.raises(InvalidEdit):
            apply_edit(path3(), EdgeDelete(1, 3))
        with pytest.raises(InvalidEdit):
            apply_edit(path3(), VertexDelete(5))
        with pytest.raises(InvalidEdit):
            apply_edit(path3(), Contract(1, 3))


def _random_intent(g, rng):
    kind = rng.choice(["v", "e", "c"]) if g.edges else "v"
    if kind == "v":
        return VertexDelete(rng.randrange(1, g.n + 1))
    u, v = g.edges[rng.randrange(len(g.edges))]
    return EdgeDelete(u, v) if kind == "e" else Contract(*(rng.sample([u, v], 2)))


class TestEditRoundTrip:
    def test_invert_reproduces_original(self):
        from minorkit.graph import record_edit

        rng = random.Random(7)
        for _ in range(60):
            n = rng.randrange(3, 12)
            m = rng.randrange(n - 1, min(n * (n - 1) // 2, n + 4) + 1)
            g = random_connected(n, m, rng)
            intent = _random_intent(g, rng)
            h, op = record_edit(g, intent)
            back = invert_edit(h, op)
            assert back.same_topology(g), (g.edges, op, h.edges, back.edges)

    def test_replay_detects_tampered_base(self):
        g = random_connected(6, 8, random.Random(3))
        seq = reduce_to_spanning_tree(g)
        tampered = type(seq)(base=Graph(seq.base.n, []), ops=seq.ops, checksums=seq.checksums)
        with pytest.raises(SequenceMismatch):
            replay_edits(g, tampered)


class TestSpanningTreeReduction:
    def test_tree_input_is_noop(self):
        t = random_tree(9, random.Random(2))
        seq = reduce_to_spanning_tree(t)
        assert seq.ops == () and seq.base.same_topology(t)

    def test_cycle_needs_one_deletion(self):
        c5 = Graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
        assert len(reduce_to_spanning_tree(c5).ops) == 1

    def test_base_is_spanning_tree(self):
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randrange(3, 12)
            r = rng.randrange(0, 5)
            m = min(n + r, n * (n - 1) // 2)
            g = random_connected(n, m, rng)
            seq = reduce_to_spanning_tree(g)
            assert len(seq.ops) == m - (n - 1)
            assert is_tree(seq.base)
            replay_edits(g, seq)  # checksums line up

    def test_disconnected_rejected(self):
        with pytest.raises(Disconnected):
            reduce_to_spanning_tree(Graph(4, [(1, 2), (3, 4)]))


class TestComponentCycleAgreement:
    def test_target_edge_in_one_component_iff_cycle_spares_it(self):
        rng = random.Random(13)
        for _ in range(40):
            n = rng.randrange(3, 8)
            m = min(n + rng.randrange(0, 4), n * (n - 1) // 2)
            g = random_connected(n, m, rng)
            cycles = enumerate_cycles(g)
            f_set = {e for e in g.edges if rng.random() < 0.4}
            comp_of = {}
            for i, comp in enumerate(components(g, f_set)):
                for v in comp:
                    comp_of[v] = i
            for u, v in f_set:
                same = comp_of[u] == comp_of[v]
                lone_cycle = any((u, v) in c and len(c & f_set) == 1 for c in cycles)
                assert same == lone_cycle


@given(st.integers(min_value=2, max_value=30), st.integers())
@settings(max_examples=40, deadline=None)
def test_random_trees_are_trees(n, seed):
    t = random_tree(n, random.Random(seed))
    assert is_tree(t) and is_connected(t) and len(t.edges) == n - 1


class TestGraphValidation:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(2, [(1, 1)])

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError):
            Graph(2, [(1, 2), (2, 1)])

    def test_rejects_nonpositive_gain(self):
        with pytest.raises(ValueError):
            Graph(2, [(1, 2)], gains={3: 0})

    def test_edge_indices_follow_positions(self):
        g = Graph(3, [(1, 3), (1, 2)])
        assert g.edge_index(1, 3) == 4 and g.edge_index(2, 1) == 5 and g.t == 5
