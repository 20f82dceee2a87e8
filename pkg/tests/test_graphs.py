from __future__ import annotations

import json
from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inertiabound.certify import TRIANGLE_GADGET
from inertiabound.graphs import (Automorphism, Graph, PaleyParams, apply_automorphism, complete_graph,
                                 cycle_graph, delete_edge, delete_vertex, edge_class, find_induced_copies,
                                 graph_from_json, graph_to_json, half_multiplier_orbit, image_sets,
                                 induced_subgraph, paley, path_graph, quadratic_residues, triangle_pattern,
                                 triangles, two_factorization)


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def to_nx(G: Graph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return H


class TestPaley:
    @pytest.mark.parametrize("q, degree", [(5, 2), (13, 6), (17, 8), (29, 14)])
    def test_regular_and_size(self, q, degree):
        G = paley(q)
        assert G.n == q
        assert set(G.degrees()) == {degree}
        assert len(G.edges) == q * (q - 1) // 4

    def test_p17_residues(self):
        assert quadratic_residues(17) == {1, 2, 4, 8, 9, 13, 15, 16}
        assert PaleyParams.for_prime(17).half_set == (1, 2, 4, 8)

    def test_p5_is_c5(self):
        assert nx.is_isomorphic(to_nx(paley(5)), nx.cycle_graph(5))

    @pytest.mark.parametrize("q", [13, 17])
    def test_strongly_regular(self, q):
        G = paley(q)
        k, lam, mu = (q - 1) // 2, (q - 5) // 4, (q - 1) // 4
        for u, v in combinations(range(q), 2):
            common = bin(G.masks[u] & G.masks[v]).count("1")
            assert common == (lam if G.has_edge(u, v) else mu)
        assert all(d == k for d in G.degrees())

    @pytest.mark.parametrize("q", [13, 17])
    def test_self_complementary(self, q):
        assert nx.is_isomorphic(to_nx(paley(q)), to_nx(paley(q).complement()))

    @pytest.mark.parametrize("q", [1, 4, 15, 21])
    def test_non_prime_rejected(self, q):
        with pytest.raises(ValueError, match="prime"):
            paley(q)

    @pytest.mark.parametrize("q", [3, 7, 11, 19])
    def test_three_mod_four_rejected(self, q):
        with pytest.raises(ValueError, match="1 mod 4"):
            paley(q)

    def test_two_factorization_p17(self):
        params = PaleyParams.for_prime(17)
        cycles = two_factorization(params)
        assert sorted(cycles) == [1, 2, 4, 8]
        seen = set()
        for k, cyc in cycles.items():
            assert len(cyc) == 17 and sorted(cyc) == list(range(17))
            es = {tuple(sorted((cyc[i], cyc[(i + 1) % 17]))) for i in range(17)}
            assert all(edge_class(params, e) == k for e in es)
            seen |= es
        assert seen == set(paley(17).edges)

    def test_edge_class_rejects_non_edge(self):
        with pytest.raises(ValueError):
            edge_class(PaleyParams.for_prime(17), (0, 3))

    @pytest.mark.parametrize("a", [1, 2, 4, 8, 9, 13, 15, 16])
    def test_multiplier_automorphisms(self, a):
        params = PaleyParams.for_prime(17)
        perm = apply_automorphism(params, Automorphism(a, 5), paley(17))
        assert sorted(perm) == list(range(17))

    def test_non_square_multiplier_rejected(self):
        with pytest.raises(ValueError):
            apply_automorphism(PaleyParams.for_prime(17), Automorphism(3, 0), paley(17))


class TestTriangles:
    def test_p17_counts(self, p17):
        ts = triangles(p17)
        assert len(ts) == 68
        params = PaleyParams.for_prime(17)
        counts = {}
        for t in ts:
            pat = triangle_pattern(params, t)
            counts[pat] = counts.get(pat, 0) + 1
        assert counts == {(1, 1, 2): 17, (2, 2, 4): 17, (4, 4, 8): 17, (1, 8, 8): 17}

    @given(small_graphs())
    def test_matches_networkx(self, G):
        ref = sum(nx.triangles(to_nx(G)).values()) // 3
        assert len(triangles(G)) == ref

    def test_half_multiplier_orbit_is_one_per_triangle(self):
        params = PaleyParams.for_prime(17)
        orbit = half_multiplier_orbit(params, (0, 1, 2))
        assert len(orbit) == 68


class TestDerived:
    def test_delete_vertex_labels(self, p17):
        rel = delete_vertex(p17, 0)
        assert rel.graph.n == 16
        assert rel.labels == tuple(range(1, 17))
        assert rel.old_to_new()[5] == 4
        assert len(triangles(rel.graph)) == 56

    def test_delete_edge(self):
        G = delete_edge(cycle_graph(5), (1, 0))
        assert (0, 1) not in G.edges and len(G.edges) == 4
        with pytest.raises(ValueError):
            delete_edge(G, (0, 1))

    def test_induced_subgraph_keeps_sequence_order(self):
        rel = induced_subgraph(path_graph(4), [3, 2, 0])
        assert rel.labels == (3, 2, 0)
        assert rel.graph.edges == {(0, 1)}

    def test_induced_subgraph_rejects_repeats(self):
        with pytest.raises(ValueError):
            induced_subgraph(path_graph(4), [1, 1])

    def test_connectivity(self):
        assert cycle_graph(6).is_connected()
        assert not Graph.from_edges(4, [(0, 1), (2, 3)]).is_connected()
        assert Graph(0, frozenset()).is_connected()


def _brute_copies(pattern: Graph, host: Graph) -> int:
    count = 0
    for image in permutations(range(host.n), pattern.n):
        if all(pattern.has_edge(i, j) == host.has_edge(image[i], image[j])
               for i, j in combinations(range(pattern.n), 2)):
            count += 1
    return count


class TestInducedCopies:
    @settings(max_examples=60, deadline=None)
    @given(small_graphs(max_n=4), small_graphs(max_n=7))
    def test_matches_brute_force(self, pattern, host):
        copies = find_induced_copies(pattern, host)
        assert len(copies) == len(set(copies)) == _brute_copies(pattern, host)
        for c in copies:
            assert induced_subgraph(host, c).graph == pattern

    def test_p5_in_p5(self):
        assert len(find_induced_copies(cycle_graph(5), paley(5))) == 10

    def test_limit(self):
        assert len(find_induced_copies(complete_graph(2), complete_graph(5), limit=3)) == 3

    def test_pattern_budget(self):
        with pytest.raises(ValueError):
            find_induced_copies(complete_graph(10), complete_graph(12))

    def test_triangle_gadget_in_p17_matches_networkx(self, p17):
        copies = find_induced_copies(TRIANGLE_GADGET, p17)
        gm = nx.algorithms.isomorphism.GraphMatcher(to_nx(p17), to_nx(TRIANGLE_GADGET))
        ref = {frozenset(m) for m in gm.subgraph_isomorphisms_iter()}
        assert len(copies) == 272
        assert set(image_sets(copies)) == ref
        assert len(ref) == 136


class TestJson:
    @given(small_graphs())
    def test_round_trip(self, G):
        text = json.dumps(graph_to_json(G))
        assert graph_from_json(json.loads(text)) == G

    def test_paley_shorthand(self):
        assert graph_from_json({"paley": 13}) == paley(13)

    @pytest.mark.parametrize("obj, needle", [
        ({"n": 3}, "'n' and 'edges'"),
        ({"n": -1, "edges": []}, "non-negative"),
        ({"n": 3, "edges": [[0, 1], [2, 2]]}, r"edges\[1\]: self-loop"),
        ({"n": 3, "edges": [[0, 3]]}, r"edges\[0\]: endpoint out of range"),
        ({"n": 3, "edges": [[0, "1"]]}, r"edges\[0\]"),
        ([1, 2], "object"),
    ])
    def test_errors_report_position(self, obj, needle):
        with pytest.raises(ValueError, match=needle):
            graph_from_json(obj)
