"""Simple graphs, prime-field Paley graphs and small-pattern subgraph search.

Vertices are always ``0..n-1``; edges are stored as sorted pairs ``(u, v)``
with ``u < v``.  Adjacency bitmasks are cached on each graph and are what the
hot loops elsewhere in the package operate on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"negative vertex count {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"invalid edge {(u, v)} for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        out = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            out.add(norm_edge(int(u), int(v)))
        return cls(n, frozenset(out))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as an int bitmask."""
        m = [0] * self.n
        for u, v in self.edges:
            m[u] |= 1 << v
            m[v] |= 1 << u
        return tuple(m)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return (self.masks[u] >> v) & 1 == 1

    def neighbors(self, v: int) -> list[int]:
        m = self.masks[v]
        return [u for u in range(self.n) if (m >> u) & 1]

    def degree(self, v: int) -> int:
        return bin(self.masks[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(m).count("1") for m in self.masks]

    def complement(self) -> "Graph":
        return Graph(self.n, frozenset(
            (u, v) for u, v in combinations(range(self.n), 2)
            if not self.has_edge(u, v)))

    def adjacency(self) -> list[list[int]]:
        return [[(self.masks[i] >> j) & 1 for j in range(self.n)] for i in range(self.n)]

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen, frontier = 1, 1
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= self.masks[low.bit_length() - 1]
                m ^= low
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1


class Relabeled(NamedTuple):
    """A derived graph together with ``labels[new] = old``."""

    graph: Graph
    labels: tuple[int, ...]

    def old_to_new(self) -> dict[int, int]:
        return {old: new for new, old in enumerate(self.labels)}


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


# -- prime fields and Paley graphs ------------------------------------------

def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def quadratic_residues(q: int) -> frozenset[int]:
    """Nonzero squares modulo an odd prime ``q``."""
    if q < 3 or not is_prime(q):
        raise ValueError(f"q={q} is not an odd prime")
    return frozenset(x * x % q for x in range(1, q))


@dataclass(frozen=True)
class PaleyParams:
    q: int
    squares: frozenset[int]

    @classmethod
    def for_prime(cls, q: int) -> "PaleyParams":
        squares = quadratic_residues(q)
        if q % 4 != 1:
            raise ValueError(f"q={q} is not 1 mod 4; Paley adjacency would not be symmetric")
        return cls(q, squares)

    @cached_property
    def half_set(self) -> tuple[int, ...]:
        """Edge-class labels: residues r <= (q-1)/2, each standing for +-r."""
        return tuple(r for r in range(1, (self.q - 1) // 2 + 1) if r in self.squares)


def paley(q: int) -> Graph:
    params = PaleyParams.for_prime(q)
    return Graph(q, frozenset(
        (u, v) for u, v in combinations(range(q), 2) if (v - u) % q in params.squares))


def edge_class(params: PaleyParams, e: Sequence[int]) -> int:
    u, v = e
    d = (u - v) % params.q
    if d not in params.squares:
        raise ValueError(f"{tuple(e)} is not an edge of P({params.q})")
    return min(d, params.q - d)


def two_factorization(params: PaleyParams) -> dict[int, list[int]]:
    """One Hamiltonian cycle per edge class, as vertex sequences from 0."""
    q = params.q
    cycles = {}
    for k in params.half_set:
        cyc = [0]
        v = k % q
        while v != 0:
            cyc.append(v)
            v = (v + k) % q
        if len(cyc) != q:
            raise ValueError(f"class {k} splits into {q // len(cyc)} cycles")
        cycles[k] = cyc
    return cycles


Triangle = tuple[int, int, int]


def triangles(G: Graph) -> list[Triangle]:
    out = []
    masks = G.masks
    for u, v in G.sorted_edges:
        common = masks[u] & masks[v] & ~((1 << (v + 1)) - 1)
        while common:
            low = common & -common
            out.append((u, v, low.bit_length() - 1))
            common ^= low
    out.sort()
    return out


def triangle_pattern(params: PaleyParams, t: Triangle) -> tuple[int, int, int]:
    a, b, c = t
    return tuple(sorted((edge_class(params, (a, b)), edge_class(params, (a, c)),
                         edge_class(params, (b, c)))))


@dataclass(frozen=True)
class Automorphism:
    """The affine map v -> a*v + b (mod q) with a a nonzero square."""

    a: int
    b: int

    def __call__(self, v: int, q: int) -> int:
        return (self.a * v + self.b) % q


def apply_automorphism(params: PaleyParams, sigma: Automorphism, G: Graph) -> tuple[int, ...]:
    q = params.q
    if sigma.a % q == 0 or sigma.a % q not in params.squares:
        raise ValueError(f"a={sigma.a} is not a nonzero square mod {q}")
    if G.n != q:
        raise ValueError(f"graph has {G.n} vertices, expected {q}")
    perm = tuple(sigma(v, q) for v in range(q))
    for u, v in combinations(range(q), 2):
        if G.has_edge(u, v) != G.has_edge(perm[u], perm[v]):
            raise ValueError(f"{sigma} does not preserve adjacency of {(u, v)}")
    return perm


def half_multiplier_orbit(params: PaleyParams, vertices: Iterable[int]) -> set[frozenset[int]]:
    """Images of a vertex set under v -> a*v + b for a in the half-set.

    These are the automorphisms that send one triangle of a given class
    pattern onto every triangle exactly once, so the orbit of a gadget copy
    under them has one member per triangle.
    """
    q = params.q
    vs = tuple(vertices)
    return {frozenset((a * v + b) % q for v in vs)
            for a in params.half_set for b in range(q)}


# -- derived graphs ---------------------------------------------------------

def induced_subgraph(G: Graph, S: Iterable[int]) -> Relabeled:
    labels = tuple(sorted(S)) if isinstance(S, (set, frozenset)) else tuple(S)
    if len(set(labels)) != len(labels):
        raise ValueError("repeated vertex in subset")
    for v in labels:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} out of range for n={G.n}")
    edges = frozenset(
        (i, j) for i, j in combinations(range(len(labels)), 2)
        if G.has_edge(labels[i], labels[j]))
    return Relabeled(Graph(len(labels), edges), labels)


def delete_vertex(G: Graph, v: int) -> Relabeled:
    if not 0 <= v < G.n:
        raise ValueError(f"vertex {v} not present")
    return induced_subgraph(G, [u for u in range(G.n) if u != v])


def delete_edge(G: Graph, e: Sequence[int]) -> Graph:
    e = norm_edge(*e)
    if e not in G.edges:
        raise ValueError(f"edge {e} not present")
    return Graph(G.n, G.edges - {e})


def find_induced_copies(pattern: Graph, host: Graph, *, limit: int | None = None,
                        max_pattern: int = 9) -> list[tuple[int, ...]]:
    """All injections pattern -> host preserving both edges and non-edges.

    Each copy is a tuple ``m`` with ``m[i]`` the host image of pattern vertex
    ``i``.  Backtracking visits pattern vertices in a connectivity-first order
    and discards host candidates of too-small degree.
    """
    k = pattern.n
    if k > max_pattern:
        raise ValueError(f"pattern has {k} vertices; budget is {max_pattern}")
    if k > host.n:
        return []
    pdeg = pattern.degrees()
    hdeg = host.degrees()
    order: list[int] = []
    rest = set(range(k))
    while rest:
        placed = set(order)
        v = max(rest, key=lambda x: (len(set(pattern.neighbors(x)) & placed), pdeg[x], -x))
        order.append(v)
        rest.remove(v)

    pm, hm = pattern.masks, host.masks
    image = [-1] * k
    out: list[tuple[int, ...]] = []

    def extend(pos: int, used: int) -> bool:
        if pos == k:
            out.append(tuple(image))
            return limit is not None and len(out) >= limit
        p = order[pos]
        for h in range(host.n):
            if (used >> h) & 1 or hdeg[h] < pdeg[p]:
                continue
            ok = True
            for prev in order[:pos]:
                if ((pm[p] >> prev) & 1) != ((hm[h] >> image[prev]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[p] = h
            if extend(pos + 1, used | (1 << h)):
                return True
        image[p] = -1
        return False

    extend(0, 0)
    return out


def image_sets(copies: Iterable[Sequence[int]]) -> list[frozenset[int]]:
    return sorted({frozenset(c) for c in copies}, key=sorted)


# -- JSON -------------------------------------------------------------------

def graph_to_json(G: Graph) -> dict:
    return {"n": G.n, "edges": [list(e) for e in G.sorted_edges]}


def graph_from_json(obj: Mapping) -> Graph:
    if not isinstance(obj, Mapping):
        raise ValueError("graph JSON must be an object")
    if "paley" in obj:
        return paley(int(obj["paley"]))
    if "n" not in obj or "edges" not in obj:
        raise ValueError("graph JSON needs keys 'n' and 'edges'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"'n' must be a non-negative integer, got {n!r}")
    edges = set()
    for pos, e in enumerate(obj["edges"]):
        if (not isinstance(e, (list, tuple)) or len(e) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise ValueError(f"edges[{pos}]: expected [u, v] integers, got {e!r}")
        u, v = e
        if u == v:
            raise ValueError(f"edges[{pos}]: self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edges[{pos}]: endpoint out of range 0..{n - 1}")
        edges.add(norm_edge(u, v))
    return Graph(n, frozenset(edges))
