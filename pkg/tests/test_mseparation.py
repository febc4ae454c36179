"""m-separation queries, maximality, and completion."""

from itertools import combinations

import networkx as nx
import numpy as np
import pytest

import oracles
from agfit import (
    AncestralGraph,
    SeparationQuery,
    implied_pairwise_independences,
    is_maximal,
    m_separated,
    maximal_completion,
    separating_set,
)
from agfit.errors import GraphTooLarge, OverlappingSets


@pytest.fixture
def mixed5():
    return AncestralGraph(
        5,
        undirected=[(0, 1)],
        directed=[(1, 2), (2, 4)],
        bidirected=[(2, 3), (3, 4)],
    )


class TestBasicQueries:
    def test_chain_blocks_on_middle(self):
        g = AncestralGraph(3, directed=[(0, 1), (1, 2)])
        assert not m_separated(g, {0}, {2}, set())
        assert m_separated(g, {0}, {2}, {1})

    def test_collider_opens_on_conditioning(self):
        g = AncestralGraph(3, directed=[(0, 1), (2, 1)])
        assert m_separated(g, {0}, {2}, set())
        assert not m_separated(g, {0}, {2}, {1})

    def test_collider_opens_on_descendant(self):
        g = AncestralGraph(4, directed=[(0, 1), (2, 1), (1, 3)])
        assert not m_separated(g, {0}, {2}, {3})

    def test_bidirected_collider(self):
        g = AncestralGraph(3, bidirected=[(0, 1), (1, 2)])
        assert m_separated(g, {0}, {2}, set())
        assert not m_separated(g, {0}, {2}, {1})

    def test_mixed_example(self, mixed5):
        assert m_separated(mixed5, {0}, {2}, {1})
        assert m_separated(mixed5, {0}, {3}, set())
        assert not m_separated(mixed5, {0}, {3}, {2})
        assert m_separated(mixed5, {1}, {4}, {2})
        assert not m_separated(mixed5, {1}, {4}, {2, 3})

    def test_set_arguments(self, mixed5):
        assert m_separated(mixed5, {0, 1}, {3}, set())
        assert not m_separated(mixed5, {0, 3}, {4}, set())

    def test_adjacent_never_separated(self, mixed5):
        for i, j in [(0, 1), (1, 2), (2, 3), (2, 4), (3, 4)]:
            rest = set(range(5)) - {i, j}
            for r in range(len(rest) + 1):
                for c in combinations(sorted(rest), r):
                    assert not m_separated(mixed5, {i}, {j}, set(c))


class TestQueryValidation:
    def test_overlap_rejected(self, mixed5):
        with pytest.raises(OverlappingSets):
            m_separated(mixed5, {0, 2}, {2}, set())
        with pytest.raises(OverlappingSets):
            m_separated(mixed5, {0}, {2}, {0})

    def test_empty_side_rejected(self, mixed5):
        with pytest.raises(ValueError):
            m_separated(mixed5, set(), {2}, set())

    def test_unknown_vertex_rejected(self, mixed5):
        with pytest.raises(Exception):
            m_separated(mixed5, {0}, {9}, set())

    def test_query_object(self):
        q = SeparationQuery(frozenset({0}), frozenset({2}), frozenset({1}))
        assert q.a == frozenset({0})
        with pytest.raises(OverlappingSets):
            SeparationQuery(frozenset({0}), frozenset({0}), frozenset())


class TestAgainstPathEnumeration:
    def _check_all(self, g):
        p = g.n
        for i, j in combinations(range(p), 2):
            rest = sorted(set(range(p)) - {i, j})
            for r in range(len(rest) + 1):
                for c in combinations(rest, r):
                    lib = not m_separated(g, {i}, {j}, set(c))
                    assert lib == oracles.brute_m_connecting(g, i, j, set(c))

    def test_exhaustive_three_vertices(self):
        for g in oracles.all_ancestral_graphs(3):
            self._check_all(g)

    def test_random_five_vertices(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            self._check_all(oracles.random_ancestral_graph(rng, 5))


class TestAgainstMoralization:
    def test_random_dags(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            g = oracles.random_dag(rng, 6)
            for _ in range(30):
                verts = list(rng.permutation(6))
                i, j = verts[0], verts[1]
                c = {v for v in verts[2:] if rng.random() < 0.4}
                assert m_separated(g, {i}, {j}, c) == oracles.moral_d_separated(
                    g, {i}, {j}, c
                )


class TestUndirectedReduction:
    # with no arrowheads, m-separation is plain vertex-cut separation
    def test_matches_graph_cut(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            p = 6
            edges = [
                (i, j)
                for i, j in combinations(range(p), 2)
                if rng.random() < 0.4
            ]
            g = AncestralGraph(p, undirected=edges)
            nxg = nx.Graph()
            nxg.add_nodes_from(range(p))
            nxg.add_edges_from(edges)
            for _ in range(20):
                verts = list(rng.permutation(p))
                i, j = verts[0], verts[1]
                c = {v for v in verts[2:] if rng.random() < 0.4}
                h = nxg.subgraph(set(range(p)) - c)
                cut = not nx.has_path(h, i, j)
                assert m_separated(g, {i}, {j}, c) == cut


class TestSeparatingSet:
    def test_smallest_is_returned(self, mixed5):
        assert separating_set(mixed5, 0, 2) == frozenset({1})
        assert separating_set(mixed5, 0, 3) == frozenset()
        assert separating_set(mixed5, 1, 4) == frozenset({2})

    def test_none_for_adjacent(self, mixed5):
        assert separating_set(mixed5, 2, 3) is None

    def test_none_when_inseparable(self):
        g = AncestralGraph(
            4, directed=[(1, 3), (2, 0)], bidirected=[(0, 1), (1, 2), (2, 3)]
        )
        assert separating_set(g, 0, 3) is None

    def test_size_guard(self):
        g = AncestralGraph(20)
        with pytest.raises(GraphTooLarge):
            separating_set(g, 0, 1, max_vertices=16)


class TestImpliedIndependences:
    def test_mixed_example(self, mixed5):
        got = implied_pairwise_independences(mixed5)
        stmts = {(s.a, s.b): s.c for s in got}
        assert stmts == {
            (frozenset({0}), frozenset({2})): frozenset({1}),
            (frozenset({0}), frozenset({3})): frozenset(),
            (frozenset({0}), frozenset({4})): frozenset({1}),
            (frozenset({1}), frozenset({3})): frozenset(),
            (frozenset({1}), frozenset({4})): frozenset({2}),
        }

    def test_complete_graph_implies_nothing(self):
        g = AncestralGraph(3, bidirected=[(0, 1), (0, 2), (1, 2)])
        assert implied_pairwise_independences(g) == ()


class TestMaximality:
    def test_mixed_example_is_maximal(self, mixed5):
        assert is_maximal(mixed5)

    def test_inseparable_nonadjacent_pair(self):
        g = AncestralGraph(
            4, directed=[(1, 3), (2, 0)], bidirected=[(0, 1), (1, 2), (2, 3)]
        )
        assert not is_maximal(g)

    def test_completion_adds_bidirected_edge(self):
        g = AncestralGraph(
            4, directed=[(1, 3), (2, 0)], bidirected=[(0, 1), (1, 2), (2, 3)]
        )
        h = maximal_completion(g)
        assert is_maximal(h)
        assert set(h.bidirected_pairs) - set(g.bidirected_pairs) == {(0, 3)}
        assert h.directed_pairs == g.directed_pairs
        assert h.undirected_pairs == g.undirected_pairs

    def test_completion_preserves_independence_model(self):
        g = AncestralGraph(
            4, directed=[(1, 3), (2, 0)], bidirected=[(0, 1), (1, 2), (2, 3)]
        )
        h = maximal_completion(g)
        for i, j in combinations(range(4), 2):
            rest = sorted(set(range(4)) - {i, j})
            for r in range(len(rest) + 1):
                for c in combinations(rest, r):
                    assert m_separated(g, {i}, {j}, set(c)) == m_separated(
                        h, {i}, {j}, set(c)
                    )

    def test_completion_fixes_maximal_graphs(self, mixed5):
        assert maximal_completion(mixed5) == mixed5

    def test_dags_are_maximal(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            assert is_maximal(oracles.random_dag(rng, 5))
