"""Dual-number weighted graphs.

Every edge carries conductance ``1 + a_hat*eps``: the standard graph is a
simple unit-resistor network and ``-a_hat`` is the first-order perturbation
of the edge's unit resistance. Vertices are 1-based in the public API and
in files, 0-based in arrays.
"""
from __future__ import annotations

import io
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dual_linalg import DualMatrix
from .errors import (
    Disconnected,
    DuplicateEdge,
    EdgeNotInGraph,
    ParseError,
    RoundingGuardFailed,
    SelfLoop,
    ValidationError,
    VertexOutOfRange,
)

__all__ = [
    "Edge",
    "PerturbedGraph",
    "DualLaplacian",
    "build_graph",
    "laplacian",
    "is_connected",
    "spanning_tree_count",
    "spanning_trees_containing_edge",
    "bareiss_determinant",
    "parse_graph",
    "load_graph",
    "format_graph",
    "random_connected_graph",
    "require_connected",
]

BAREISS_MAX_N = 32


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    a_hat: float = 0.0

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class PerturbedGraph:
    n: int
    edges: tuple[Edge, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _index(self) -> dict[tuple[int, int], Edge]:
        return {e.pair: e for e in self.edges}

    def has_edge(self, i: int, j: int) -> bool:
        return _canonical(i, j) in self._index

    def edge(self, i: int, j: int) -> Edge:
        try:
            return self._index[_canonical(i, j)]
        except KeyError:
            raise EdgeNotInGraph(f"edge {{{i},{j}}} is not in the graph") from None

    def with_perturbation(self, a_hat: dict[tuple[int, int], float] | None = None) -> "PerturbedGraph":
        """Same standard graph with new coefficients; unlisted edges get 0."""
        a_hat = {_canonical(*k): v for k, v in (a_hat or {}).items()}
        for pair in a_hat:
            if pair not in self._index:
                raise EdgeNotInGraph(f"edge {{{pair[0]},{pair[1]}}} is not in the graph")
        return PerturbedGraph(self.n, tuple(Edge(e.i, e.j, float(a_hat.get(e.pair, 0.0)))
                                            for e in self.edges))

    def unperturbed(self) -> "PerturbedGraph":
        return self.with_perturbation({})

    def without_edge(self, i: int, j: int) -> "PerturbedGraph":
        pair = self.edge(i, j).pair
        return PerturbedGraph(self.n, tuple(e for e in self.edges if e.pair != pair))

    def check_vertex(self, v: int) -> int:
        """Validate a 1-based vertex id and return its 0-based index."""
        if not isinstance(v, (int, np.integer)) or not 1 <= v <= self.n:
            raise VertexOutOfRange(f"vertex {v} is outside 1..{self.n}")
        return int(v) - 1


@dataclass(frozen=True, eq=False)
class DualLaplacian:
    matrix: DualMatrix

    @property
    def standard(self) -> np.ndarray:
        return self.matrix.standard

    @property
    def infinitesimal(self) -> np.ndarray:
        return self.matrix.infinitesimal


def _canonical(i, j):
    return (i, j) if i < j else (j, i)


def build_graph(n: int, edge_list) -> PerturbedGraph:
    """Validate ``(i, j, a_hat)`` triples and return a canonical graph.

    Edges are stored with ``i < j`` in lexicographic order. ``a_hat`` may be
    omitted (``(i, j)`` pairs) and then defaults to 0.
    """
    if int(n) != n or n < 1:
        raise ValidationError(f"vertex count must be a positive integer, got {n}")
    n = int(n)
    seen: dict[tuple[int, int], Edge] = {}
    for item in edge_list:
        if isinstance(item, Edge):
            i, j, a = item.i, item.j, item.a_hat
        elif len(item) == 2:
            (i, j), a = item, 0.0
        else:
            i, j, a = item
        for v in (i, j):
            if int(v) != v or not 1 <= v <= n:
                raise VertexOutOfRange(f"vertex {v} is outside 1..{n}")
        i, j = int(i), int(j)
        if i == j:
            raise SelfLoop(f"self-loop at vertex {i}")
        pair = _canonical(i, j)
        if pair in seen:
            raise DuplicateEdge(f"edge {{{pair[0]},{pair[1]}}} appears twice")
        seen[pair] = Edge(pair[0], pair[1], float(a))
    return PerturbedGraph(n, tuple(seen[p] for p in sorted(seen)))


def laplacian(G: PerturbedGraph) -> DualLaplacian:
    """L_w = L + L_hat eps with L = D - A and L_hat = D_hat - A_hat."""
    n = G.n
    L = np.zeros((n, n))
    Lh = np.zeros((n, n))
    for e in G.edges:
        i, j = e.i - 1, e.j - 1
        L[i, i] += 1.0
        L[j, j] += 1.0
        L[i, j] = L[j, i] = -1.0
        Lh[i, i] += e.a_hat
        Lh[j, j] += e.a_hat
        Lh[i, j] = Lh[j, i] = -e.a_hat
    return DualLaplacian(DualMatrix(L, Lh))


def _adjacency_lists(G: PerturbedGraph):
    adj = [[] for _ in range(G.n)]
    for e in G.edges:
        adj[e.i - 1].append(e.j - 1)
        adj[e.j - 1].append(e.i - 1)
    return adj


def is_connected(G: PerturbedGraph) -> bool:
    adj = _adjacency_lists(G)
    seen = [False] * G.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == G.n


def require_connected(G: PerturbedGraph) -> None:
    if not is_connected(G):
        raise Disconnected(f"graph with n={G.n}, m={G.m} is not connected")


def bareiss_determinant(M) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _matrix_tree_count(G: PerturbedGraph) -> int:
    # any principal cofactor of L; zero when G is disconnected
    if G.n == 1:
        return 1
    minor = laplacian(G).standard[1:, 1:]
    det = float(np.linalg.det(minor))
    tau = round(det)
    if abs(det - tau) >= 0.5:
        raise RoundingGuardFailed(f"cofactor {det!r} is not near an integer")
    if G.n <= BAREISS_MAX_N:
        exact = bareiss_determinant(minor)
        if exact != tau:
            raise RoundingGuardFailed(
                f"floating cofactor rounds to {tau}, exact value is {exact}")
    return int(tau)


def spanning_tree_count(G: PerturbedGraph) -> int:
    """Number of spanning trees by the matrix-tree theorem."""
    require_connected(G)
    return _matrix_tree_count(G)


def spanning_trees_containing_edge(G: PerturbedGraph, e) -> int:
    """tau(e) = tau(G) - tau(G - e)."""
    require_connected(G)
    i, j = (e.i, e.j) if isinstance(e, Edge) else e[:2]
    G.edge(i, j)
    return _matrix_tree_count(G) - _matrix_tree_count(G.without_edge(i, j))


# -- text format ----------------------------------------------------------------

def parse_graph(text: str) -> PerturbedGraph:
    """Parse the ``n m`` header + ``i j a_hat`` edge-line format.

    Blank lines and lines starting with ``#`` are ignored.
    """
    header = None
    triples = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise ParseError("header must be 'n m'", lineno)
            try:
                header = (int(fields[0]), int(fields[1]))
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            if header[0] < 1 or header[1] < 0:
                raise ParseError(f"bad header {line!r}", lineno)
            continue
        if len(fields) != 3:
            raise ParseError("edge line must be 'i j a_hat'", lineno)
        try:
            i, j, a = int(fields[0]), int(fields[1]), float(fields[2])
        except ValueError:
            raise ParseError(f"cannot parse edge line {line!r}", lineno) from None
        if not np.isfinite(a):
            raise ParseError(f"a_hat must be finite, got {fields[2]!r}", lineno)
        triples.append((lineno, i, j, a))
        if len(triples) > header[1]:
            raise ParseError(f"more than the declared {header[1]} edges", lineno)
    if header is None:
        raise ParseError("missing 'n m' header")
    if len(triples) != header[1]:
        raise ParseError(f"declared {header[1]} edges, found {len(triples)}")
    # re-run validation edge by edge so errors carry a line number
    seen = set()
    for lineno, i, j, _ in triples:
        try:
            build_graph(header[0], [(i, j, 0.0)])
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
        pair = _canonical(i, j)
        if pair in seen:
            raise ParseError(f"edge {{{pair[0]},{pair[1]}}} appears twice", lineno)
        seen.add(pair)
    return build_graph(header[0], [t[1:] for t in triples])


def load_graph(path) -> PerturbedGraph:
    with open(os.fspath(path), encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(G: PerturbedGraph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines += [f"{e.i} {e.j} {e.a_hat!r}" for e in G.edges]
    return "\n".join(lines) + "\n"


# -- random instances ------------------------------------------------------------

def random_connected_graph(n: int, p: float, rng: np.random.Generator,
                           a_low: float = -1.0, a_high: float = 1.0,
                           max_tries: int = 10_000) -> PerturbedGraph:
    """Erdos-Renyi G(n, p) conditioned on connectivity, a_hat ~ U[a_low, a_high].

    Draws are rejected until a connected graph appears.
    """
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for _ in range(max_tries):
        keep = rng.random(len(pairs)) < p
        chosen = [pr for pr, k in zip(pairs, keep) if k]
        if n > 1 and not chosen:
            continue
        a = rng.uniform(a_low, a_high, size=len(chosen))
        G = build_graph(n, [(i, j, float(x)) for (i, j), x in zip(chosen, a)])
        if is_connected(G):
            return G
    raise ValidationError(f"no connected G({n}, {p}) found in {max_tries} draws")
