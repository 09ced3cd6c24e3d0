"""Multigraphs, divisors, Laplacians and Jacobians."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .intalg import AbelianGroup, Matrix, det, snf

# A divisor is a tuple of chip counts indexed by dense vertex index.
Divisor = tuple[int, ...]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    """Connected loopless multigraph.

    Vertices are opaque labels with dense indices in input order. ``edges[e]``
    holds the endpoint indices of edge ``e``; parallel edges are distinct
    entries.
    """

    labels: tuple[Hashable, ...]
    edges: tuple[tuple[int, int], ...]
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertex(self, v) -> int:
        """Dense index of ``v`` (a label, or already an index)."""
        try:
            return self.index[v]
        except (KeyError, TypeError):
            pass
        if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < self.num_vertices:
            return v
        raise GraphError(f"unknown vertex {v!r}")

    def multiplicity(self) -> Counter:
        """Edge counts keyed by ``(min, max)`` endpoint pairs."""
        return Counter((min(a, b), max(a, b)) for a, b in self.edges)

    def degree(self, v) -> int:
        i = self.vertex(v)
        return sum((a == i) + (b == i) for a, b in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def is_simple(self) -> bool:
        return len(set(self.multiplicity())) == len(self.edges)

    def relabeled(self, order: Sequence[int]) -> "Multigraph":
        """Copy with vertex ``order[i]`` placed at index ``i``."""
        pos = {old: new for new, old in enumerate(order)}
        return Multigraph(
            tuple(self.labels[o] for o in order),
            tuple((pos[a], pos[b]) for a, b in self.edges),
        )


def _is_connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    if n == 0:
        return False
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def build_graph(labels: Sequence[Hashable], edge_pairs: Iterable[Sequence[Hashable]]) -> Multigraph:
    """Validate and build a connected loopless multigraph.

    Edge ids follow the order of ``edge_pairs``.
    """
    labels = tuple(labels)
    index: dict = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise GraphError(f"duplicate vertex label {lab!r}")
        index[lab] = i
    edges = []
    for pair in edge_pairs:
        if len(pair) != 2:
            raise GraphError(f"edge must have two endpoints: {pair!r}")
        u, v = pair
        if u not in index or v not in index:
            missing = u if u not in index else v
            raise GraphError(f"edge {pair!r} has unknown endpoint {missing!r}")
        if u == v:
            raise GraphError(f"loop at {u!r} is not allowed")
        edges.append((index[u], index[v]))
    if not _is_connected(len(labels), edges):
        raise GraphError("graph is disconnected")
    return Multigraph(labels, tuple(edges))


def firing_divisor(G: Multigraph, v) -> Divisor:
    """Chip change when ``v`` fires: ``-deg(v)`` at ``v``, edge counts at neighbours."""
    i = G.vertex(v)
    out = [0] * G.num_vertices
    for a, b in G.edges:
        if a == i:
            out[b] += 1
            out[i] -= 1
        elif b == i:
            out[a] += 1
            out[i] -= 1
    return tuple(out)


def laplacian(G: Multigraph) -> Matrix:
    n = G.num_vertices
    L = [[0] * n for _ in range(n)]
    for a, b in G.edges:
        L[a][a] += 1
        L[b][b] += 1
        L[a][b] -= 1
        L[b][a] -= 1
    return L


def reduced_laplacian(G: Multigraph, q=0) -> Matrix:
    k = G.vertex(q)
    return [[x for j, x in enumerate(row) if j != k] for i, row in enumerate(laplacian(G)) if i != k]


def jacobian(G: Multigraph) -> AbelianGroup:
    """Critical group from the Smith form of the reduced Laplacian."""
    if G.num_vertices == 1:
        return AbelianGroup()
    return AbelianGroup.from_orders(snf(reduced_laplacian(G)))


def spanning_tree_count(G: Multigraph, q=0) -> int:
    """Matrix-tree count: determinant of any reduced Laplacian."""
    if G.num_vertices == 1:
        return 1
    return det(reduced_laplacian(G, q))


def degree(delta: Sequence[int]) -> int:
    return sum(delta)
