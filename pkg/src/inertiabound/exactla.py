"""Exact symmetric linear algebra over the rationals.

Inertia is computed by symmetric congruence elimination (Sylvester's law of
inertia), never from eigenvalues.  Matrices with rational entries are first
scaled by the positive lcm of their denominators, which leaves the inertia
unchanged and lets the elimination run on Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import BudgetExceeded
from .graphs import Edge, Graph, norm_edge

Number = Union[int, Fraction]


class Inertia(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int

    def __str__(self) -> str:
        return f"({self.n_plus}, {self.n_minus}, {self.n_zero})"

    @property
    def n(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero

    @property
    def bound(self) -> int:
        """min(n - n+, n - n-)."""
        return min(self.n - self.n_plus, self.n - self.n_minus)

    @property
    def alt_bound(self) -> int:
        """n0 + min(n+, n-); always equal to :attr:`bound`."""
        return self.n_zero + min(self.n_plus, self.n_minus)


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric rational matrix stored as its nonzero upper triangle."""

    n: int
    entries: tuple[tuple[tuple[int, int], Fraction], ...]

    @classmethod
    def from_entries(cls, n: int, upper: Mapping[tuple[int, int], Number]) -> "SymMatrix":
        clean = {}
        for (i, j), x in upper.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"index {(i, j)} out of range for n={n}")
            key = (i, j) if i <= j else (j, i)
            x = Fraction(x)
            if key in clean and clean[key] != x:
                raise ValueError(f"conflicting values for {key}")
            if x:
                clean[key] = x
        return cls(n, tuple(sorted(clean.items())))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "SymMatrix":
        n = len(rows)
        upper = {}
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix is not square")
            for j in range(i, n):
                if Fraction(rows[i][j]) != Fraction(rows[j][i]):
                    raise ValueError(f"matrix is not symmetric at {(i, j)}")
                upper[(i, j)] = rows[i][j]
        return cls.from_entries(n, upper)

    @cached_property
    def _lookup(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i > j:
            i, j = j, i
        return self._lookup.get((i, j), Fraction(0))

    def rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.n for _ in range(self.n)]
        for (i, j), x in self.entries:
            out[i][j] = x
            out[j][i] = x
        return out

    def scaled(self, c: Number) -> "SymMatrix":
        c = Fraction(c)
        return SymMatrix.from_entries(self.n, {k: c * x for k, x in self.entries})

    def conjugate_by_signs(self, d: Sequence[int]) -> "SymMatrix":
        """D M D for the diagonal sign matrix D = diag(d), d_i in {1, -1}."""
        return SymMatrix.from_entries(self.n, {(i, j): d[i] * d[j] * x for (i, j), x in self.entries})


@dataclass(frozen=True)
class WeightMatrix:
    """Symmetric matrix supported on the edges of ``graph`` with zero diagonal."""

    graph: Graph
    weights: tuple[tuple[Edge, Fraction], ...]

    @classmethod
    def from_weights(cls, graph: Graph, weights: Mapping[Sequence[int], Number]) -> "WeightMatrix":
        clean = {}
        for e, w in weights.items():
            u, v = e
            if u == v:
                raise ValueError(f"diagonal entry {(u, v)} not allowed in a weight matrix")
            key = norm_edge(u, v)
            if key not in graph.edges:
                if Fraction(w) != 0:
                    raise ValueError(f"support violation: {key} is not an edge")
                continue
            clean[key] = Fraction(w)
        return cls(graph, tuple(sorted(clean.items())))

    @classmethod
    def from_matrix(cls, graph: Graph, M: SymMatrix) -> "WeightMatrix":
        if M.n != graph.n:
            raise ValueError(f"matrix order {M.n} != graph order {graph.n}")
        w = {}
        for (i, j), x in M.entries:
            if i == j:
                raise ValueError(f"nonzero diagonal entry at {(i, i)}")
            w[(i, j)] = x
        return cls.from_weights(graph, w)

    @classmethod
    def adjacency(cls, graph: Graph) -> "WeightMatrix":
        return cls.from_weights(graph, {e: 1 for e in graph.edges})

    @cached_property
    def matrix(self) -> SymMatrix:
        return SymMatrix.from_entries(self.graph.n, dict(self.weights))

    def __getitem__(self, e: Sequence[int]) -> Fraction:
        return self.matrix[tuple(e)]


MatrixLike = Union[SymMatrix, WeightMatrix, Sequence[Sequence[Number]]]


def _dense(M: MatrixLike) -> list[list[Number]]:
    if isinstance(M, WeightMatrix):
        M = M.matrix
    if isinstance(M, SymMatrix):
        return M.rows()
    return [list(r) for r in M]


def _integerize(rows: list[list[Number]]) -> tuple[list[list[int]], int]:
    """Scale by the positive lcm of all denominators; returns (matrix, lcm)."""
    den = 1
    for r in rows:
        for x in r:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
    if den == 1:
        return [[int(x) for x in r] for r in rows], 1
    return [[int(x * den) for x in r] for r in rows], den


def int_inertia(rows: list[list[int]]) -> Inertia:
    """Inertia of a symmetric integer matrix by congruence elimination.

    Pivots on the first nonzero diagonal entry; when the live block has an
    all-zero diagonal, pivots on the first nonzero off-diagonal 2x2 block
    [[0, b], [b, 0]], which contributes one positive and one negative sign.
    The live block is kept integral by scaling it with the pivot and then
    dividing out its content, with the sign correction applied so only
    positive factors touch the remaining block.  ``rows`` is not modified.
    """
    A = rows
    n = len(A)
    pos = neg = 0
    while A:
        m = len(A)
        k = next((i for i in range(m) if A[i][i]), -1)
        if k >= 0:
            rk = A[k]
            p = rk[k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            keep = [i for i in range(m) if i != k]
            rkk = [rk[j] for j in keep]
            nxt = []
            for i in keep:
                ri = A[i]
                a = rk[i]
                if a:
                    nxt.append([p * ri[j] - a * y for j, y in zip(keep, rkk)])
                else:
                    nxt.append([p * ri[j] for j in keep])
            s = p
        else:
            pair = next(((i, j) for i in range(m) for j in range(i + 1, m) if A[i][j]), None)
            if pair is None:
                break
            i0, j0 = pair
            ri, rj = A[i0], A[j0]
            b = ri[j0]
            pos += 1
            neg += 1
            keep = [i for i in range(m) if i != i0 and i != j0]
            u = [ri[j] for j in keep]
            v = [rj[j] for j in keep]
            nxt = []
            for r, ur, vr in zip(keep, u, v):
                rr = A[r]
                nxt.append([b * rr[j] - (ur * vs + vr * us) for j, us, vs in zip(keep, u, v)])
            s = b
        A = nxt
        if not A:
            break
        g = math.gcd(*[x for r in A for x in r])
        if g == 0:
            break
        if s < 0:
            g = -g
        if g != 1:
            A = [[x // g for x in r] for r in A]
    return Inertia(pos, neg, n - pos - neg)


def inertia(M: MatrixLike) -> Inertia:
    return int_inertia(_integerize(_dense(M))[0])


def int_determinant(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    A = [list(r) for r in rows]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def determinant(M: MatrixLike) -> Fraction:
    ints, den = _integerize(_dense(M))
    return Fraction(int_determinant(ints), den ** len(ints))


def principal_submatrix(M: MatrixLike, S: Sequence[int]) -> SymMatrix:
    if isinstance(M, WeightMatrix):
        M = M.matrix
    if not isinstance(M, SymMatrix):
        M = SymMatrix.from_rows(M)
    idx = list(S)
    for i in idx:
        if not 0 <= i < M.n:
            raise ValueError(f"index {i} out of range for n={M.n}")
    return SymMatrix.from_entries(len(idx), {
        (a, b): M[idx[a], idx[b]] for a in range(len(idx)) for b in range(a, len(idx))})


def inertia_bound(G: Graph, W: WeightMatrix) -> int:
    """min(n - n+(W), n - n-(W)), an upper bound on the independence number."""
    if W.graph != G:
        raise ValueError("weight matrix is not supported on this graph")
    inr = inertia(W)
    assert inr.bound == inr.alt_bound
    return inr.bound


# -- polynomials in edge variables ----------------------------------------

Monomial = tuple[tuple[Edge, int], ...]


@dataclass(frozen=True)
class EdgePolynomial:
    """Integer polynomial whose variables are graph edges.

    ``terms`` is canonical: monomials sorted lexicographically by their
    (edge, exponent) tuples, zero coefficients dropped.
    """

    terms: tuple[tuple[Monomial, int], ...]

    @classmethod
    def from_terms(cls, terms: Mapping[Iterable[tuple[Sequence[int], int]], int]
                   | Iterable[tuple[Iterable, int]]) -> "EdgePolynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            exps: dict[Edge, int] = {}
            mono = mono.items() if isinstance(mono, Mapping) else mono
            for e, k in mono:
                if k:
                    e = norm_edge(*e)
                    exps[e] = exps.get(e, 0) + k
            key = tuple(sorted(exps.items()))
            acc[key] = acc.get(key, 0) + c
        return cls(tuple(sorted((m, c) for m, c in acc.items() if c)))

    @classmethod
    def monomial(cls, coefficient: int, exponents: Mapping[Sequence[int], int]) -> "EdgePolynomial":
        return cls.from_terms([(exponents.items(), coefficient)])

    def evaluate(self, values: Mapping[Edge, Number]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms:
            t = Fraction(c)
            for e, k in mono:
                t *= Fraction(values[e]) ** k
            total += t
        return total

    def variables(self) -> set[Edge]:
        return {e for mono, _ in self.terms for e, _ in mono}

    def __neg__(self) -> "EdgePolynomial":
        return EdgePolynomial(tuple((m, -c) for m, c in self.terms))

    def format(self, names: Mapping[Edge, str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            body = "".join(
                (names[e] if names else f"x{e[0]}_{e[1]}") + (f"^{k}" if k > 1 else "")
                for e, k in mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.format()


def edge_letters(G: Graph) -> dict[Edge, str]:
    """Name edges a, b, c, ... in lexicographic edge order."""
    return {e: chr(ord("a") + i) for i, e in enumerate(G.sorted_edges)}


class MonomialInfo(NamedTuple):
    coefficient: int
    exponents: dict[Edge, int]


def is_monomial(p: EdgePolynomial) -> Optional[MonomialInfo]:
    if len(p.terms) != 1:
        return None
    mono, c = p.terms[0]
    return MonomialInfo(c, dict(mono))


def symbolic_determinant(pattern: Graph, *, max_order: int = 9) -> EdgePolynomial:
    """Determinant of the generic weight matrix of ``pattern``.

    Leibniz expansion restricted to permutations whose every arrow i -> s(i)
    is an edge; all other terms carry a zero factor.  The sign of a term is
    (-1)^(n - #cycles).
    """
    n = pattern.n
    if n > max_order:
        raise BudgetExceeded(f"symbolic determinant limited to {max_order} vertices, got {n}")
    masks = pattern.masks
    eidx = {e: i for i, e in enumerate(pattern.sorted_edges)}
    index = [[-1] * n for _ in range(n)]
    for (u, v), i in eidx.items():
        index[u][v] = index[v][u] = i
    exps = [0] * len(eidx)
    sigma = [-1] * n
    acc: dict[tuple[int, ...], int] = {}

    def rec(i: int, used: int) -> None:
        if i == n:
            seen = 0
            cycles = 0
            for s in range(n):
                if not (seen >> s) & 1:
                    cycles += 1
                    t = s
                    while not (seen >> t) & 1:
                        seen |= 1 << t
                        t = sigma[t]
            key = tuple(exps)
            acc[key] = acc.get(key, 0) + (-1 if (n - cycles) & 1 else 1)
            return
        m = masks[i] & ~used
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            e = index[i][j]
            sigma[i] = j
            exps[e] += 1
            rec(i + 1, used | low)
            exps[e] -= 1
        sigma[i] = -1

    rec(0, 0)
    if n == 0:
        return EdgePolynomial.from_terms([((), 1)])
    edges = pattern.sorted_edges
    return EdgePolynomial(tuple(sorted(
        (tuple((edges[i], k) for i, k in enumerate(key) if k), c)
        for key, c in acc.items() if c)))


# -- JSON -------------------------------------------------------------------

def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_fraction(s, where: str) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValueError(f"{where}: expected a rational string like '3' or '-2/5', got {s!r}")
    if isinstance(s, str) and ("." in s or "e" in s.lower()):
        raise ValueError(f"{where}: decimal notation not allowed ({s!r})")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{where}: cannot parse {s!r} ({exc})") from None


def matrix_to_json(M: MatrixLike) -> dict:
    if isinstance(M, WeightMatrix):
        M = M.matrix
    if not isinstance(M, SymMatrix):
        M = SymMatrix.from_rows(M)
    for (i, j), _ in M.entries:
        if i == j:
            raise ValueError("diagonal entries cannot be serialized")
    return {"n": M.n, "entries": [[i, j, _fraction_str(x)] for (i, j), x in M.entries]}


def matrix_from_json(obj: Mapping) -> SymMatrix:
    if not isinstance(obj, Mapping) or "n" not in obj or "entries" not in obj:
        raise ValueError("matrix JSON needs keys 'n' and 'entries'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"'n' must be a non-negative integer, got {n!r}")
    upper = {}
    for pos, ent in enumerate(obj["entries"]):
        where = f"entries[{pos}]"
        if not isinstance(ent, (list, tuple)) or len(ent) != 3:
            raise ValueError(f"{where}: expected [i, j, \"p/q\"]")
        i, j, x = ent
        if not all(isinstance(t, int) and not isinstance(t, bool) for t in (i, j)):
            raise ValueError(f"{where}: indices must be integers")
        if i == j:
            raise ValueError(f"{where}: diagonal entry ({i}, {j}) forbidden")
        if not i < j:
            raise ValueError(f"{where}: expected i < j, got ({i}, {j})")
        if j >= n or i < 0:
            raise ValueError(f"{where}: index out of range 0..{n - 1}")
        if (i, j) in upper:
            raise ValueError(f"{where}: duplicate entry ({i}, {j})")
        upper[(i, j)] = _parse_fraction(x, where)
    return SymMatrix.from_entries(n, upper)


def random_symmetric(rng, n: int, *, density: float = 0.6, max_num: int = 9,
                     max_den: int = 4) -> SymMatrix:
    """Random rational symmetric matrix; used by property tests and demos."""
    upper = {}
    for i, j in combinations(range(n), 2):
        if rng.random() < density:
            upper[(i, j)] = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
    for i in range(n):
        if rng.random() < density / 2:
            upper[(i, i)] = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
    return SymMatrix.from_entries(n, upper)
