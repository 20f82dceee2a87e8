"""Exact independence numbers by branch and bound on vertex bitmasks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import BudgetExceeded
from .graphs import Edge, Graph

MAX_VERTICES = 64
DEFAULT_NODE_BUDGET = 5_000_000


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _greedy(masks: Sequence[int], cand: int) -> int:
    """Min-degree greedy independent set inside ``cand``."""
    chosen = 0
    while cand:
        best_v, best_d = -1, None
        m = cand
        while m:
            low = m & -m
            v = low.bit_length() - 1
            d = _popcount(masks[v] & cand)
            if best_d is None or d < best_d:
                best_v, best_d = v, d
            m ^= low
        chosen |= 1 << best_v
        cand &= ~masks[best_v] & ~(1 << best_v)
    return chosen


def max_independent_set(masks: Sequence[int], cand: int | None = None, *,
                         node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Bitmask of a maximum independent set of the graph induced on ``cand``.

    Branches on a maximum-degree vertex (lowest index on ties), first taking
    it and then discarding it.  A node is pruned when the current size plus
    n' - ceil(m'/maxdeg) cannot beat the incumbent, where n', m' count the
    live vertices and edges: any vertex cover of the live graph needs at
    least m'/maxdeg vertices.
    """
    if cand is None:
        cand = (1 << len(masks)) - 1
    best = _greedy(masks, cand)
    best_size = _popcount(best)
    nodes = 0

    def search(cand: int, cur: int, size: int) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"independence search exceeded {node_budget} nodes")
        cnt = _popcount(cand)
        if size + cnt <= best_size:
            return
        top_v, top_d, total = -1, -1, 0
        m = cand
        while m:
            low = m & -m
            v = low.bit_length() - 1
            d = _popcount(masks[v] & cand)
            total += d
            if d > top_d:
                top_v, top_d = v, d
            m ^= low
        if top_d == 0:
            best, best_size = cur | cand, size + cnt
            return
        edges = total // 2
        if size + cnt - (edges + top_d - 1) // top_d <= best_size:
            return
        bit = 1 << top_v
        search(cand & ~masks[top_v] & ~bit, cur | bit, size + 1)
        search(cand & ~bit, cur, size)

    search(cand, 0, 0)
    return best


@dataclass(frozen=True)
class IndependenceResult:
    alpha: int
    witness: tuple[int, ...]

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "witness": list(self.witness)}


def _bits(x: int) -> tuple[int, ...]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return tuple(out)


def independence_number(G: Graph, *, node_budget: int = DEFAULT_NODE_BUDGET) -> IndependenceResult:
    if G.n > MAX_VERTICES:
        raise BudgetExceeded(f"graph has {G.n} vertices; exact search is limited to {MAX_VERTICES}")
    s = max_independent_set(G.masks, node_budget=node_budget)
    return IndependenceResult(_popcount(s), _bits(s))


def is_independent(G: Graph, S: Sequence[int]) -> bool:
    S = list(S)
    return all(not G.has_edge(u, v) for i, u in enumerate(S) for v in S[i + 1:])


@dataclass(frozen=True)
class CriticalityReport:
    is_critical: bool
    alpha: int
    per_edge: dict[Edge, tuple[int, ...]] = field(default_factory=dict)
    failing_edge: Edge | None = None

    def to_json(self) -> dict:
        out = {"critical": self.is_critical,
               "witnesses": {f"{u}-{v}": list(w) for (u, v), w in sorted(self.per_edge.items())}}
        if self.failing_edge is not None:
            out["failing_edge"] = list(self.failing_edge)
        return out


def is_alpha_critical(G: Graph, *, node_budget: int = DEFAULT_NODE_BUDGET) -> CriticalityReport:
    """Whether deleting any single edge raises the independence number.

    alpha(G - uv) > alpha(G) exactly when some independent set of size
    alpha(G) - 1 avoids u, v and all their neighbours; that set plus {u, v}
    is the witness.
    """
    alpha = independence_number(G, node_budget=node_budget).alpha
    masks = G.masks
    full = (1 << G.n) - 1
    per_edge = {}
    for u, v in G.sorted_edges:
        cand = full & ~(masks[u] | masks[v] | (1 << u) | (1 << v))
        s = max_independent_set(masks, cand, node_budget=node_budget)
        if _popcount(s) < alpha - 1:
            return CriticalityReport(False, alpha, {}, (u, v))
        per_edge[(u, v)] = tuple(sorted(_bits(s)[:alpha - 1] + (u, v)))
    return CriticalityReport(True, alpha, per_edge)


def edge_witnesses(G: Graph, e: Edge, alpha: int) -> list[tuple[int, ...]]:
    """Every independent set of G - e of size alpha + 1 containing both ends of e."""
    u, v = e
    if not G.has_edge(u, v):
        raise ValueError(f"{e} is not an edge")
    masks = G.masks
    free = ((1 << G.n) - 1) & ~(masks[u] | masks[v] | (1 << u) | (1 << v))
    out = []

    def grow(cand: int, chosen: tuple[int, ...]) -> None:
        if len(chosen) == alpha - 1:
            out.append(tuple(sorted(chosen + (u, v))))
            return
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            grow(cand & ~masks[w], chosen + (w,))

    grow(free, ())
    return sorted(out)
