from __future__ import annotations

import json
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inertiabound.exactla import Inertia, WeightMatrix, inertia, matrix_from_json
from inertiabound.graphs import Graph, PaleyParams, complete_graph, cycle_graph, paley
from inertiabound.independence import independence_number
from inertiabound.search import (ClassWeighting, _candidates, _class_rotations, _is_canonical, circulant_blocks,
                                 circulant_inertia, circulant_weight_matrix, grid_search_circulant,
                                 random_edge_search)

from test_graphs import small_graphs


def circ(q: int, weights) -> WeightMatrix:
    params = PaleyParams.for_prime(q)
    return circulant_weight_matrix(params, ClassWeighting.of(params, weights))


class TestCirculant:
    @pytest.mark.parametrize("q, w, expected", [
        (17, (30, -22, -12, 7), (13, 4, 0)),
        (17, (1, 1, 1, 1), (9, 8, 0)),
        (5, (1,), (3, 2, 0)),
    ])
    def test_examples(self, q, w, expected):
        assert inertia(circ(q, w)) == expected

    @pytest.mark.parametrize("q", [13, 17])
    def test_commutes_with_shift(self, q):
        rows = circ(q, [3, -1, 4, 1][:len(PaleyParams.for_prime(q).half_set)]).matrix.rows()
        shifted = [[rows[(i + 1) % q][(j + 1) % q] for j in range(q)] for i in range(q)]
        assert shifted == rows

    @settings(max_examples=80, deadline=None)
    @given(st.sampled_from([5, 13, 17]), st.integers(0, 10 ** 9))
    def test_blocks_match_full_matrix(self, q, seed):
        rng = random.Random(seed)
        k = len(PaleyParams.for_prime(q).half_set)
        w = [rng.randint(-4, 4) for _ in range(k)]
        if not any(w):
            w[0] = 1
        W = circ(q, w)
        c = [int(W.matrix[(0, j)]) for j in range(q)]
        assert circulant_inertia(c) == inertia(W)

    def test_blocks_shape(self):
        ones, even, odd = circulant_blocks([0, 1, 0, 0, 1])
        assert ones == 10 and len(even) == len(odd) == 2

    def test_weighting_validation(self):
        params = PaleyParams.for_prime(17)
        with pytest.raises(ValueError):
            ClassWeighting.of(params, (0, 0, 0, 0))
        with pytest.raises(ValueError):
            ClassWeighting.of(params, (1, 2))
        assert ClassWeighting.of(params, {2: 5}).weights == (0, 5, 0, 0)


class TestGrid:
    @pytest.mark.parametrize("q, lo, hi", [(17, -5, 7), (13, -6, 6), (13, -3, 5), (5, -2, 2), (17, -3, 0), (17, 1, 3)])
    def test_candidate_prefilter_is_lossless(self, q, lo, hi):
        params = PaleyParams.for_prime(q)
        perms = _class_rotations(params)
        k = len(params.half_set)
        neg, prim = lo == -hi, lo <= 0 <= hi
        fast = [w for w in _candidates(lo, hi, k, neg) if any(w) and _is_canonical(w, perms, neg, prim)]
        slow = [w for w in product(range(lo, hi + 1), repeat=k) if any(w) and _is_canonical(w, perms, neg, prim)]
        assert fast == slow

    @pytest.mark.parametrize("q, lo, hi", [(13, -2, 2), (13, 0, 3), (17, -1, 1), (17, -2, 1)])
    def test_reduction_preserves_minimum(self, q, lo, hi):
        params = PaleyParams.for_prime(q)
        k = len(params.half_set)
        best = min(inertia(circ(q, w)).bound for w in product(range(lo, hi + 1), repeat=k) if any(w))
        rep = grid_search_circulant(params, (lo, hi))
        assert rep.bound == best
        for w in rep.argmin:
            assert inertia(circ(q, w)).bound == best

    def test_c5_tight(self):
        rep = grid_search_circulant(PaleyParams.for_prime(5), (-2, 2))
        assert rep.gap == 0 and rep.bound == 2 and rep.inertia == (3, 2, 0)

    def test_small_p17_box(self):
        rep = grid_search_circulant(PaleyParams.for_prime(17), (-6, 6))
        assert rep.bound == 5 and rep.alpha == 3

    def test_partial(self):
        rep = grid_search_circulant(PaleyParams.for_prime(17), (-3, 3), max_points=10)
        assert rep.partial and rep.iterations == 10
        assert rep.to_json()["partial"] is True

    def test_threads_agree(self):
        params = PaleyParams.for_prime(13)
        assert (grid_search_circulant(params, (-4, 4), threads=2).to_json()
                == grid_search_circulant(params, (-4, 4)).to_json())

    def test_empty_range(self):
        with pytest.raises(ValueError):
            grid_search_circulant(PaleyParams.for_prime(5), (2, 1))

    def test_report_json(self):
        js = json.loads(grid_search_circulant(PaleyParams.for_prime(5), (-2, 2)).dumps())
        assert list(js)[:4] == ["best_gap", "bound", "alpha", "inertia"]
        assert js["weights"] == {"1": 1} and js["seed"] is None and js["iterations"] == 1


class TestRandom:
    def test_k3_tight(self):
        rep = random_edge_search(complete_graph(3), 1, 50, 0)
        assert rep.gap == 0 and rep.inertia == (1, 2, 0)

    def test_deterministic(self):
        G = paley(13)
        a = random_edge_search(G, 3, 300, 11, hill_climb=20)
        b = random_edge_search(G, 3, 300, 11, hill_climb=20)
        c = random_edge_search(G, 3, 300, 11, hill_climb=20, threads=2)
        assert a.dumps() == b.dumps() == c.dumps()
        assert a.dumps() != random_edge_search(G, 3, 300, 12, hill_climb=20).dumps()

    def test_matrix_reproduces_bound(self):
        G = cycle_graph(7)
        rep = random_edge_search(G, 3, 100, 5)
        W = WeightMatrix.from_matrix(G, matrix_from_json(rep.matrix))
        assert inertia(W) == rep.inertia

    def test_nonnegative(self):
        rep = random_edge_search(paley(13), 3, 100, 1, nonnegative=True)
        assert all(not x.startswith("-") for _, _, x in rep.matrix["entries"])

    def test_p17_never_tight(self, p17):
        rep = random_edge_search(p17, 3, 10_000, 0)
        assert rep.gap >= 1

    @settings(max_examples=40, deadline=None)
    @given(small_graphs(max_n=8), st.integers(0, 1000))
    def test_gap_nonnegative(self, G, seed):
        alpha = independence_number(G).alpha
        assert random_edge_search(G, alpha, 20, seed, hill_climb=5).gap >= 0

    def test_edgeless(self):
        rep = random_edge_search(Graph(3, frozenset()), 3, 5, 0)
        assert rep.inertia == Inertia(0, 0, 3) and rep.gap == 0
