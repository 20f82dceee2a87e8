"""Searching for weight matrices with a small inertia bound.

Circulant weightings give one weight per Paley edge class.  Every verdict is
an exact congruence computation; circulants are first split by the rational
congruence described in :func:`circulant_inertia`, never through their
(irrational) eigenvalue formulas.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .exactla import Inertia, WeightMatrix, inertia, int_inertia, matrix_to_json
from .graphs import Graph, PaleyParams, edge_class, paley
from .independence import independence_number

DEFAULT_RADIUS = 32
RANDOM_CHUNK = 1000


@dataclass(frozen=True)
class ClassWeighting:
    """Weights indexed by the Paley edge classes (``params.half_set`` order)."""

    labels: tuple[int, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.weights):
            raise ValueError("one weight per edge class required")
        if not any(self.weights):
            raise ValueError("at least one weight must be nonzero")

    @classmethod
    def of(cls, params: PaleyParams, weights: Sequence[int] | Mapping[int, int]) -> "ClassWeighting":
        if isinstance(weights, Mapping):
            weights = [weights.get(k, 0) for k in params.half_set]
        return cls(params.half_set, tuple(int(w) for w in weights))

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.labels, self.weights))


def circulant_weight_matrix(params: PaleyParams, w: ClassWeighting) -> WeightMatrix:
    if w.labels != params.half_set:
        raise ValueError(f"weighting labels {w.labels} do not match classes {params.half_set}")
    G = paley(params.q)
    table = w.as_dict()
    return WeightMatrix.from_weights(G, {e: table[edge_class(params, e)] for e in G.sorted_edges})


def _difference_table(params: PaleyParams, weights: Sequence[int]) -> list[int]:
    q = params.q
    c = [0] * q
    for k, wk in zip(params.half_set, weights):
        c[k] = c[q - k] = wk
    return c


def circulant_blocks(c: Sequence[int]) -> tuple[int, list[list[int]], list[list[int]]]:
    """Congruence-split a symmetric circulant with first row ``c``.

    With h = (q-1)/2 take the basis
        1,   e_x + e_-x - 2 e_0  (x = 1..h),   e_x - e_-x  (x = 1..h).
    The matrix commutes with the reflection x -> -x and fixes the all-ones
    direction, so T^T C T is block diagonal: the 1x1 block q * sum(c), an
    even block and an odd block (both halved, a positive scaling).
    """
    q = len(c)
    h = (q - 1) // 2
    even = [[c[(x - y) % q] + c[(x + y) % q] - 2 * c[x] - 2 * c[y] + 2 * c[0]
             for y in range(1, h + 1)] for x in range(1, h + 1)]
    odd = [[c[(x - y) % q] - c[(x + y) % q] for y in range(1, h + 1)] for x in range(1, h + 1)]
    return q * sum(c), even, odd


def circulant_inertia(c: Sequence[int]) -> Inertia:
    ones, even, odd = circulant_blocks(c)
    a = int_inertia(even)
    b = int_inertia(odd)
    return Inertia(a.n_plus + b.n_plus + (ones > 0), a.n_minus + b.n_minus + (ones < 0),
                   a.n_zero + b.n_zero + (ones == 0))


@dataclass
class SearchReport:
    alpha: int
    bound: int
    inertia: Inertia
    iterations: int
    seed: int | None = None
    weights: dict | None = None
    matrix: dict | None = None
    argmin: list[tuple[int, ...]] = field(default_factory=list)
    partial: bool = False

    @property
    def gap(self) -> int:
        return self.bound - self.alpha

    def to_json(self) -> dict:
        out = {"best_gap": self.gap, "bound": self.bound, "alpha": self.alpha,
               "inertia": list(self.inertia)}
        if self.weights is not None:
            out["weights"] = {str(k): v for k, v in self.weights.items()}
        if self.matrix is not None:
            out["matrix"] = self.matrix
        out["seed"] = self.seed
        out["iterations"] = self.iterations
        if self.argmin:
            out["argmin"] = [list(a) for a in self.argmin]
        if self.partial:
            out["partial"] = True
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def _class_rotations(params: PaleyParams) -> list[tuple[int, ...]]:
    """Permutations of class positions induced by the multipliers v -> a*v."""
    q = params.q
    pos = {k: i for i, k in enumerate(params.half_set)}
    perms = set()
    for a in params.squares:
        perms.add(tuple(pos[min(a * k % q, q - a * k % q)] for k in params.half_set))
    return sorted(perms)


def _is_canonical(w: tuple[int, ...], perms, negate: bool, primitive: bool) -> bool:
    if primitive and math.gcd(*w) != 1:
        return False
    for p in perms:
        img = tuple(w[p[i]] for i in range(len(w)))
        if img > w:
            return False
        if negate and tuple(-x for x in img) > w:
            return False
    return True


def _candidates(lo: int, hi: int, k: int, negate: bool):
    """Box points whose first weight dominates the others.

    The multipliers permute the classes transitively, so a lexicographic
    orbit maximum has w[0] >= w[i] (and >= -w[i] under negation).
    """
    for w0 in range(lo, hi + 1):
        if negate and w0 < 0:
            continue
        rest_lo = max(lo, -w0) if negate else lo
        for rest in product(range(rest_lo, w0 + 1), repeat=k - 1):
            yield (w0,) + rest


def _grid_chunk(args):
    q, weights_list = args
    params = PaleyParams.for_prime(q)
    out = []
    for w in weights_list:
        out.append((w, circulant_inertia(_difference_table(params, w))))
    return out


def grid_search_circulant(params: PaleyParams, weight_range: tuple[int, int] = (-DEFAULT_RADIUS, DEFAULT_RADIUS),
                          *, alpha: int | None = None, max_points: int | None = None,
                          threads: int = 1, progress=None) -> SearchReport:
    """Exact inertia for every class weighting in a box, up to symmetry.

    Skipped points are exactly equivalent to a visited one: relabelling by a
    multiplier automorphism (permutes classes), negation when the box is
    symmetric (swaps n+ and n-), and division by the gcd when the box
    contains 0 (positive scaling).
    """
    lo, hi = weight_range
    if lo > hi:
        raise ValueError(f"empty weight range {lo}..{hi}")
    if alpha is None:
        alpha = independence_number(paley(params.q)).alpha
    perms = _class_rotations(params)
    negate = lo == -hi
    primitive = lo <= 0 <= hi
    points = [w for w in _candidates(lo, hi, len(params.half_set), negate)
              if any(w) and _is_canonical(w, perms, negate, primitive)]
    partial = False
    if max_points is not None and len(points) > max_points:
        points = points[:max_points]
        partial = True

    results: list[tuple[tuple[int, ...], Inertia]] = []
    if threads <= 1:
        for i, w in enumerate(points):
            results.append((w, circulant_inertia(_difference_table(params, w))))
            if progress and i % 100000 == 0:
                progress(i, len(points))
    else:
        step = -(-len(points) // (threads * 8))
        jobs = [(params.q, points[s:s + step]) for s in range(0, len(points), step)]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for part in ex.map(_grid_chunk, jobs):
                results.extend(part)

    best = min(inr.bound for _, inr in results)
    argmin = sorted(w for w, inr in results if inr.bound == best)
    top = argmin[0]
    top_inertia = inertia(circulant_weight_matrix(params, ClassWeighting.of(params, top)))
    assert top_inertia.bound == best
    return SearchReport(alpha, best, top_inertia, len(points), None,
                        weights=dict(zip(params.half_set, top)), argmin=argmin, partial=partial)


def _edge_rows(n: int, edges: Sequence[tuple[int, int]], ws: Sequence[int]) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    for (u, v), x in zip(edges, ws):
        rows[u][v] = rows[v][u] = x
    return rows


def _random_chunk(args):
    """Best draw of one chunk; its stream depends only on (seed, chunk)."""
    n, edges, seed, chunk, count, lo, hi = args
    rng = random.Random(f"{seed}:{chunk}")
    best = None
    for _ in range(count):
        ws = [rng.randint(lo, hi) for _ in edges]
        inr = int_inertia(_edge_rows(n, edges, ws))
        if best is None or inr.bound < best[1].bound:
            best = (ws, inr)
    return best


def random_edge_search(G: Graph, alpha: int, iterations: int, seed: int, *,
                       max_weight: int = 64, nonnegative: bool = False,
                       hill_climb: int = 0, threads: int = 1) -> SearchReport:
    """Seeded random integer weight matrices on E(G); keeps the smallest bound.

    Draws come in chunks of ``RANDOM_CHUNK`` with sub-seeds derived from
    ``seed`` and the chunk index, and ties go to the earliest chunk, so the
    report does not depend on ``threads``.  After the random phase,
    ``hill_climb`` single-edge perturbations of the incumbent are tried,
    accepting any that do not increase the bound.
    """
    edges = G.sorted_edges
    lo = 0 if nonnegative else -max_weight
    jobs = [(G.n, edges, seed, c, min(RANDOM_CHUNK, iterations - s), lo, max_weight)
            for c, s in enumerate(range(0, iterations, RANDOM_CHUNK))]
    if threads <= 1 or len(jobs) < 2:
        parts = [_random_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_random_chunk, jobs))

    best_w: list[int] | None = None
    best_inr: Inertia | None = None
    for part in parts:
        if part is not None and (best_inr is None or part[1].bound < best_inr.bound):
            best_w, best_inr = part
    if edges and best_w is not None:
        rng = random.Random(f"{seed}:climb")
        for _ in range(hill_climb):
            cand = list(best_w)
            cand[rng.randrange(len(edges))] = rng.randint(lo, max_weight)
            inr = int_inertia(_edge_rows(G.n, edges, cand))
            if inr.bound <= best_inr.bound:
                best_w, best_inr = cand, inr
    if best_w is None:
        best_w, best_inr = [0] * len(edges), inertia([[0] * G.n for _ in range(G.n)])
    W = WeightMatrix.from_weights(G, dict(zip(edges, best_w)))
    exact = inertia(W)
    assert exact == best_inr
    return SearchReport(alpha, exact.bound, exact, iterations + hill_climb, seed, matrix=matrix_to_json(W))
