"""Sign-parity certificates that a graph has no optimal weight matrix.

A *gadget* is an induced subgraph on 2*alpha + 1 vertices whose own
independence number equals alpha(G) and whose generic symbolic determinant is
a single monomial ``c * prod w_e^k_e``.  If every edge weight is nonzero the
gadget's principal submatrix is nonsingular, and the inertia bound on the
gadget squeezes its inertia to (alpha+1, alpha, 0) or (alpha, alpha+1, 0).
Which one is decided by the sign of the determinant, i.e. by ``sign(c)`` times
the parity of negative edges among the odd-exponent edges (the odd support).

In an optimal weight matrix of an alpha-critical graph every edge weight is
nonzero, and no two gadgets may point in opposite directions (one with
alpha+1 positive eigenvalues, another with alpha+1 negative eigenvalues would
push the bound above alpha by interlacing).  Requiring all gadget determinants
to share one sign bit ``d`` is a linear system over GF(2) in the edge-sign
bits; if it is infeasible, a subset of rows summing to ``0 = 1`` certifies
that the graph has no optimal weight matrix.  Only signs enter the argument,
so the certificate covers real weights, not just rational ones.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, islice
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BudgetExceeded
from .exactla import Inertia, WeightMatrix, inertia, inertia_bound, is_monomial, principal_submatrix, symbolic_determinant
from .graphs import (Edge, Graph, Triangle, find_induced_copies, graph_from_json, graph_to_json,
                     image_sets, induced_subgraph, norm_edge, triangles)
from .independence import _popcount, independence_number, is_alpha_critical, is_independent, max_independent_set

MAX_GADGET_ORDER = 9

# Gadgets from the literature: the odd support of the first is a triangle,
# of the second a 5-cycle.  Edges in lexicographic order are named a, b, c...
TRIANGLE_GADGET = Graph.from_edges(7, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6)])
PENTAGON_GADGET = Graph.from_edges(7, [(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (2, 5), (3, 4), (4, 6), (5, 6)])

SignVector = Mapping[Edge, int]


@dataclass(frozen=True)
class GadgetCopy:
    vertices: tuple[int, ...]
    odd_support: tuple[Edge, ...]
    const_negative: int
    coefficient: int = field(default=0, compare=False)

    @property
    def alpha(self) -> int:
        return (len(self.vertices) - 1) // 2

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "odd_support": [list(e) for e in self.odd_support],
                "const_negative": self.const_negative}

    @classmethod
    def from_json(cls, obj: Mapping) -> "GadgetCopy":
        return cls(tuple(obj["vertices"]),
                   tuple(norm_edge(*e) for e in obj["odd_support"]),
                   int(obj["const_negative"]))


@lru_cache(maxsize=65536)
def _local_gadget(local_masks: tuple[int, ...], alpha: int) -> Optional[tuple[int, tuple[tuple[int, int], ...]]]:
    """(coefficient, odd local edges) if the local graph is a gadget, else None."""
    if _popcount(max_independent_set(local_masks)) != alpha:
        return None
    k = len(local_masks)
    if any(m == 0 for m in local_masks):
        return None  # isolated vertex: every Leibniz term vanishes
    pattern = Graph(k, frozenset(
        (i, j) for i in range(k) for j in range(i + 1, k) if (local_masks[i] >> j) & 1))
    mono = is_monomial(symbolic_determinant(pattern))
    if mono is None:
        return None
    odd = tuple(sorted(e for e, x in mono.exponents.items() if x % 2))
    deg = [0] * k
    for u, v in odd:
        deg[u] += 1
        deg[v] += 1
    # even degree everywhere keeps each row invariant under diagonal sign switching
    assert all(x % 2 == 0 for x in deg), f"odd support {odd} is not an even subgraph"
    return mono.coefficient, odd


def _local_masks(masks: Sequence[int], S: Sequence[int]) -> tuple[int, ...]:
    out = []
    for v in S:
        mv = masks[v]
        m = 0
        for j, w in enumerate(S):
            if (mv >> w) & 1:
                m |= 1 << j
        out.append(m)
    return tuple(out)


def _scan(masks: tuple[int, ...], subsets: Iterable[tuple[int, ...]], alpha: int) -> list[GadgetCopy]:
    out = []
    for S in subsets:
        hit = _local_gadget(_local_masks(masks, S), alpha)
        if hit is None:
            continue
        coef, odd = hit
        out.append(GadgetCopy(S, tuple((S[u], S[v]) for u, v in odd), int(coef < 0), coef))
    return out


def _scan_chunk(args):
    masks, n, k, start, stop, alpha = args
    return _scan(masks, islice(combinations(range(n), k), start, stop), alpha)


def enumerate_gadgets(G: Graph, alpha: int, *, threads: int = 1) -> list[GadgetCopy]:
    """All (2*alpha+1)-vertex gadgets of ``G``, sorted by vertex set."""
    k = 2 * alpha + 1
    if k > MAX_GADGET_ORDER:
        raise BudgetExceeded(f"gadget order {k} exceeds {MAX_GADGET_ORDER}")
    if k > G.n:
        return []
    if threads <= 1:
        return _scan(G.masks, combinations(range(G.n), k), alpha)
    total = comb(G.n, k)
    step = -(-total // (threads * 4))
    jobs = [(G.masks, G.n, k, s, min(s + step, total), alpha) for s in range(0, total, step)]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return [g for part in ex.map(_scan_chunk, jobs) for g in part]


def direction_of(g: GadgetCopy, s: SignVector) -> int:
    """1 if the gadget submatrix has alpha+1 positive eigenvalues, else 0.

    ``s`` maps edges to bits (1 = negative weight).  The determinant is
    negative iff const_negative XOR the parity of ``s`` over the odd support;
    with 2*alpha+1 nonzero eigenvalues, alpha+1 of them positive exactly when
    sign(det) = (-1)^alpha.
    """
    det_negative = g.const_negative
    for e in g.odd_support:
        det_negative ^= s[e]
    return det_negative if g.alpha % 2 else det_negative ^ 1


# -- GF(2) system -----------------------------------------------------------

@dataclass(frozen=True)
class ParitySystem:
    """Rows ``sum_{e in odd_support} x_e + d = const_negative`` over GF(2).

    Variables are the host edges in sorted order followed by ``d``, the
    common determinant-sign bit.  Rows are int bitmasks over that order.
    """

    edges: tuple[Edge, ...]
    rows: tuple[tuple[int, int], ...]

    @property
    def d_index(self) -> int:
        return len(self.edges)

    def describe_row(self, i: int) -> str:
        mask, rhs = self.rows[i]
        names = [f"x{e[0]}_{e[1]}" for j, e in enumerate(self.edges) if (mask >> j) & 1]
        if (mask >> self.d_index) & 1:
            names.append("d")
        return " + ".join(names) + f" = {rhs}"


def build_parity_system(G: Graph, gadgets: Sequence[GadgetCopy]) -> ParitySystem:
    if not gadgets:
        raise ValueError("empty gadget list")
    edges = G.sorted_edges
    pos = {e: i for i, e in enumerate(edges)}
    d_bit = 1 << len(edges)
    rows = []
    for g in gadgets:
        mask = d_bit
        for e in g.odd_support:
            mask ^= 1 << pos[e]
        rows.append((mask, g.const_negative))
    return ParitySystem(edges, tuple(rows))


@dataclass(frozen=True)
class Feasible:
    solution: int
    rank: int
    n_vars: int

    @property
    def nullity(self) -> int:
        return self.n_vars - self.rank

    def value(self, var: int) -> int:
        return (self.solution >> var) & 1


@dataclass(frozen=True)
class Infeasible:
    farkas_rows: tuple[int, ...]


def solve_gf2(sys: ParitySystem) -> Feasible | Infeasible:
    """Gaussian elimination over GF(2) with row-combination tracking.

    Each pivot is the lowest variable index of its reduced row, so pivot
    rows only involve higher variables and back substitution runs from the
    highest pivot down, free variables set to 0.
    """
    n_vars = len(sys.edges) + 1
    pivots: dict[int, tuple[int, int, int]] = {}
    for i, (mask, rhs) in enumerate(sys.rows):
        combo = 1 << i
        while mask:
            col = (mask & -mask).bit_length() - 1
            if col not in pivots:
                break
            pm, pr, pc = pivots[col]
            mask ^= pm
            rhs ^= pr
            combo ^= pc
        if not mask:
            if rhs:
                return Infeasible(tuple(j for j in range(len(sys.rows)) if (combo >> j) & 1))
            continue
        pivots[(mask & -mask).bit_length() - 1] = (mask, rhs, combo)
    solution = 0
    for col in sorted(pivots, reverse=True):
        mask, rhs, _ = pivots[col]
        rest = mask & ~(1 << col) & solution
        if rhs ^ (_popcount(rest) & 1):
            solution |= 1 << col
    return Feasible(solution, len(pivots), n_vars)


# -- certificates -----------------------------------------------------------

@dataclass(frozen=True)
class NonTightnessCertificate:
    graph: Graph
    alpha: int
    critical_witnesses: dict[Edge, tuple[int, ...]]
    gadgets: tuple[GadgetCopy, ...]
    farkas_rows: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "graph": graph_to_json(self.graph),
            "alpha": self.alpha,
            "critical_witnesses": {f"{u}-{v}": list(w) for (u, v), w in sorted(self.critical_witnesses.items())},
            "gadgets": [g.to_json() for g in self.gadgets],
            "farkas_rows": list(self.farkas_rows),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, obj: Mapping) -> "NonTightnessCertificate":
        wit = {}
        for key, w in obj["critical_witnesses"].items():
            u, v = (int(x) for x in key.split("-"))
            wit[norm_edge(u, v)] = tuple(w)
        return cls(graph_from_json(obj["graph"]), int(obj["alpha"]), wit,
                   tuple(GadgetCopy.from_json(g) for g in obj["gadgets"]),
                   tuple(int(i) for i in obj["farkas_rows"]))


@dataclass(frozen=True)
class Verdict:
    status: str  # "NOT_TIGHT" or "UNKNOWN"
    reason: str = ""
    certificate: NonTightnessCertificate | None = None
    sign_class: dict[Edge, int] | None = None
    direction: int | None = None
    gadgets: tuple[GadgetCopy, ...] = ()

    @property
    def not_tight(self) -> bool:
        return self.status == "NOT_TIGHT"

    def __str__(self) -> str:
        return "NOT_TIGHT" if self.not_tight else f"UNKNOWN({self.reason})"


def certify_not_tight(G: Graph, *, threads: int = 1) -> Verdict:
    try:
        alpha = independence_number(G).alpha
        crit = is_alpha_critical(G)
    except BudgetExceeded as exc:
        return Verdict("UNKNOWN", f"budget exceeded: {exc}")
    if not G.edges:
        return Verdict("UNKNOWN", "graph has no edges")
    if not crit.is_critical:
        return Verdict("UNKNOWN", "criticality prerequisite fails")
    try:
        gadgets = enumerate_gadgets(G, alpha, threads=threads)
    except BudgetExceeded as exc:
        return Verdict("UNKNOWN", f"budget exceeded: {exc}")
    if not gadgets:
        return Verdict("UNKNOWN", "no gadgets")
    system = build_parity_system(G, gadgets)
    result = solve_gf2(system)
    if isinstance(result, Feasible):
        signs = {e: result.value(i) for i, e in enumerate(system.edges)}
        return Verdict("UNKNOWN", "parity system is feasible", sign_class=signs,
                       direction=result.value(system.d_index), gadgets=tuple(gadgets))
    used = tuple(gadgets[i] for i in result.farkas_rows)
    cert = NonTightnessCertificate(G, alpha, dict(crit.per_edge), used, tuple(range(len(used))))
    return Verdict("NOT_TIGHT", certificate=cert, gadgets=tuple(gadgets))


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(G: Graph, cert: NonTightnessCertificate) -> Verification:
    """Re-derive every claim of ``cert`` on ``G`` from scratch."""
    alpha = cert.alpha
    gadgets = cert.gadgets
    rows = cert.farkas_rows
    if not rows:
        return Verification(False, "empty farkas row set")
    if len(set(rows)) != len(rows) or not all(0 <= r < len(gadgets) for r in rows):
        return Verification(False, "farkas rows out of range or repeated")

    parity: dict[Edge, int] = {}
    rhs = 0
    for r in rows:
        g = gadgets[r]
        for e in g.odd_support:
            parity[e] = parity.get(e, 0) ^ 1
        rhs ^= g.const_negative
    if len(rows) % 2:
        return Verification(False, "farkas sum coefficient on d is 1")
    stray = sorted(e for e, b in parity.items() if b)
    if stray:
        return Verification(False, f"farkas sum coefficient on edge {stray[0]} is 1")
    if rhs != 1:
        return Verification(False, "farkas sum rhs = 0")

    for idx, g in enumerate(gadgets):
        vs = g.vertices
        if (len(vs) != 2 * alpha + 1 or len(set(vs)) != len(vs)
                or not all(0 <= v < G.n for v in vs)):
            return Verification(False, f"gadget {idx}: induced subgraph mismatch")
        sub = induced_subgraph(G, vs)
        local = sub.old_to_new()
        if any(not (u in local and v in local) or norm_edge(local[u], local[v]) not in sub.graph.edges
               for u, v in g.odd_support):
            return Verification(False, f"gadget {idx}: induced subgraph mismatch")
        if independence_number(sub.graph).alpha != alpha:
            return Verification(False, f"gadget {idx}: independence number is not {alpha}")
        mono = is_monomial(symbolic_determinant(sub.graph))
        if mono is None or mono.coefficient == 0:
            return Verification(False, f"gadget {idx}: determinant is not a monomial")
        odd = sorted(norm_edge(vs[a], vs[b]) for (a, b), k in mono.exponents.items() if k % 2)
        if odd != sorted(g.odd_support) or int(mono.coefficient < 0) != g.const_negative:
            return Verification(False, f"gadget {idx}: determinant mismatch")

    if independence_number(G).alpha != alpha:
        return Verification(False, "alpha mismatch")
    for e in G.sorted_edges:
        w = cert.critical_witnesses.get(e)
        if w is None:
            return Verification(False, f"critical witness missing for {e[0]}-{e[1]}")
        if (len(set(w)) != alpha + 1 or e[0] not in w or e[1] not in w
                or not all(0 <= v < G.n for v in w)):
            return Verification(False, f"critical witness invalid for {e[0]}-{e[1]}")
        rest = [v for v in w if v not in e]
        if not is_independent(G, rest) or any(G.has_edge(x, y) for x in e for y in rest):
            return Verification(False, f"critical witness invalid for {e[0]}-{e[1]}")
    if set(cert.critical_witnesses) - set(G.edges):
        return Verification(False, "critical witness given for a non-edge")
    if cert.graph != G:
        return Verification(False, "graph mismatch")
    return Verification(True)


# -- sign manipulation ------------------------------------------------------

def normalize_signs(G: Graph, s: SignVector, tree: Iterable[Sequence[int]]) -> tuple[dict[Edge, int], tuple[int, ...]]:
    """Switch ``s`` by a diagonal +-1 matrix so every tree edge is positive.

    Returns the switched sign vector and the diagonal (root vertex 0 gets +1).
    """
    tree = {norm_edge(*e) for e in tree}
    if len(tree) != G.n - 1 or not tree <= G.edges or not Graph(G.n, frozenset(tree)).is_connected():
        raise ValueError("not a spanning tree of the graph")
    adj: dict[int, list[int]] = {v: [] for v in range(G.n)}
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    flip = [0] * G.n
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                flip[v] = flip[u] ^ s[norm_edge(u, v)]
                stack.append(v)
    switched = {e: b ^ flip[e[0]] ^ flip[e[1]] for e, b in s.items()}
    return switched, tuple(-1 if f else 1 for f in flip)


@dataclass(frozen=True)
class Propagation:
    signs: dict[Edge, int]
    conflicts: tuple[Triangle, ...]
    undetermined: tuple[Edge, ...]
    rounds: int

    @property
    def contradiction(self) -> bool:
        return bool(self.conflicts)


def propagate_triangle_signs(G: Graph, fixed: SignVector, global_sign: int,
                             covered: Iterable[Triangle] | None = None) -> Propagation:
    """Force edge signs from triangles constrained to sign ``global_sign``.

    Synchronous rounds: in each round every covered triangle with exactly two
    known edges forces its third, judged against the state at the start of
    the round.  Stops at a fixed point or at the first round exhibiting a
    violated or doubly-forced triangle; all such triangles are reported.
    """
    tris = sorted(covered) if covered is not None else triangles(G)
    signs = {norm_edge(*e): b for e, b in fixed.items()}
    sides = [((a, b), (a, c), (b, c)) for a, b, c in tris]
    rounds = 0
    while True:
        rounds += 1
        forced: dict[Edge, tuple[int, Triangle]] = {}
        bad: set[Triangle] = set()
        for t, es in zip(tris, sides):
            known = [e for e in es if e in signs]
            if len(known) == 3:
                if signs[es[0]] ^ signs[es[1]] ^ signs[es[2]] != global_sign:
                    bad.add(t)
            elif len(known) == 2:
                (miss,) = [e for e in es if e not in signs]
                val = global_sign ^ signs[known[0]] ^ signs[known[1]]
                if miss in forced and forced[miss][0] != val:
                    bad.update((t, forced[miss][1]))
                else:
                    forced.setdefault(miss, (val, t))
        if bad:
            break
        if not forced:
            break
        for e, (val, _) in forced.items():
            signs[e] = val
    undetermined = tuple(e for e in G.sorted_edges if e not in signs)
    return Propagation(signs, tuple(sorted(bad)), undetermined, rounds)


@dataclass(frozen=True)
class ConflictWitness:
    positive: GadgetCopy
    negative: GadgetCopy
    positive_inertia: Inertia
    negative_inertia: Inertia
    bound: int


def signed_weight_matrix(G: Graph, s: SignVector, magnitudes: Mapping[Edge, object] | None = None) -> WeightMatrix:
    return WeightMatrix.from_weights(G, {
        e: (-1 if s[e] else 1) * (magnitudes[e] if magnitudes else 1) for e in G.sorted_edges})


def conflict_witness(G: Graph, s: SignVector, gadgets: Sequence[GadgetCopy],
                     magnitudes: Mapping[Edge, object] | None = None) -> Optional[ConflictWitness]:
    """Two gadgets pointing in opposite directions under ``s``, confirmed exactly.

    Builds the weight matrix with the given signs (unit magnitudes unless
    ``magnitudes`` is supplied) and checks both principal submatrices.
    """
    missing = [e for e in G.sorted_edges if e not in s]
    if missing:
        raise ValueError(f"sign vector is not total; missing {missing[0]}")
    up = next((g for g in gadgets if direction_of(g, s) == 1), None)
    down = next((g for g in gadgets if direction_of(g, s) == 0), None)
    if up is None or down is None:
        return None
    W = signed_weight_matrix(G, s, magnitudes)
    a = up.alpha
    pin = inertia(principal_submatrix(W, up.vertices))
    nin = inertia(principal_submatrix(W, down.vertices))
    if pin != Inertia(a + 1, a, 0) or nin != Inertia(a, a + 1, 0):
        raise AssertionError(f"gadget inertia disagrees with direction: {pin}, {nin}")
    return ConflictWitness(up, down, pin, nin, inertia_bound(G, W))


# -- census -----------------------------------------------------------------

def covered_triangles(gadgets: Iterable[GadgetCopy]) -> set[Triangle]:
    """Triangles that are the entire odd support of some gadget."""
    out = set()
    for g in gadgets:
        if len(g.odd_support) == 3:
            vs = sorted({v for e in g.odd_support for v in e})
            if len(vs) == 3:
                out.add(tuple(vs))
    return out


@dataclass(frozen=True)
class PatternCensus:
    embeddings: int
    image_sets: int
    gadget_image_sets: int


def pattern_census(pattern: Graph, G: Graph, gadgets: Iterable[GadgetCopy]) -> PatternCensus:
    """How often ``pattern`` occurs in ``G``, under both counting conventions."""
    copies = find_induced_copies(pattern, G)
    sets = set(image_sets(copies))
    gsets = {frozenset(g.vertices) for g in gadgets}
    return PatternCensus(len(copies), len(sets), len(sets & gsets))
