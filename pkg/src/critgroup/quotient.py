"""Quotient graphs by subgroups of the dihedral group, and divisor pullback."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .action import DihedralAction, GroupElement
from .graph import Divisor, GraphError, Multigraph, build_graph, firing_divisor

SUBGROUPS = ("sigma1", "sigma2", "tau", "full")


class QuotientError(ValueError):
    pass


def subgroup(action: DihedralAction, which: str) -> list[GroupElement]:
    """Elements of ``<sigma1>``, ``<sigma2>``, ``<tau>`` or the whole group."""
    if which == "full":
        return list(action.elements)
    if which == "tau":
        return list(action.rotations)
    if which in ("sigma1", "sigma2"):
        s = action.sigma1 if which == "sigma1" else action.sigma2
        for g in action.reflections:
            if (g.vertex_perm, g.edge_perm) == (s.vertex_perm, s.edge_perm):
                return [action.elements[0], g]
        raise QuotientError(f"internal: {which} missing from the element table")
    raise QuotientError(f"unknown subgroup {which!r}; choose from {SUBGROUPS}")


@dataclass(frozen=True)
class GraphMorphism:
    """Quotient map ``G -> G/H``.

    ``edge_map[e]`` is ``None`` exactly when both ends of ``e`` land on one
    target vertex.
    """

    source: Multigraph
    target: Multigraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int | None, ...]
    fibers: tuple[tuple[int, ...], ...]
    h_mult: tuple[int, ...]
    group_order: int


def _orbits(perms: Sequence[Sequence[int]], size: int) -> list[tuple[int, ...]]:
    seen = [False] * size
    out = []
    for i in range(size):
        if seen[i]:
            continue
        orbit = sorted({p[i] for p in perms})
        for j in orbit:
            seen[j] = True
        out.append(tuple(orbit))
    return out


def quotient_graph(G: Multigraph, action: DihedralAction, which: str | Sequence[GroupElement]) -> GraphMorphism:
    """Build ``G/H`` and check the horizontal multiplicities edge by edge."""
    H = subgroup(action, which) if isinstance(which, str) else list(which)
    fibers = _orbits([g.vertex_perm for g in H], G.num_vertices)
    vmap = [0] * G.num_vertices
    for w, fib in enumerate(fibers):
        for v in fib:
            vmap[v] = w
    emap: list[int | None] = [None] * G.num_edges
    tedges = []
    for orbit in _orbits([g.edge_perm for g in H], G.num_edges):
        a, b = G.edges[orbit[0]]
        if vmap[a] == vmap[b]:
            continue
        for e in orbit:
            emap[e] = len(tedges)
        tedges.append((vmap[a], vmap[b]))
    labels = ["{" + ",".join(str(G.labels[v]) for v in fib) + "}" for fib in fibers]
    try:
        target = build_graph(labels, [(labels[a], labels[b]) for a, b in tedges])
    except GraphError as exc:
        raise QuotientError(f"quotient is not a valid graph: {exc}") from exc
    if any(len(H) % len(f) for f in fibers):
        raise QuotientError("internal: fiber size does not divide the subgroup order")
    h_mult = tuple(len(H) // len(f) for f in fibers)

    # per-vertex count of source edges over each target edge
    counts = [dict() for _ in range(G.num_vertices)]
    for e, (a, b) in enumerate(G.edges):
        f = emap[e]
        if f is None:
            continue
        counts[a][f] = counts[a].get(f, 0) + 1
        counts[b][f] = counts[b].get(f, 0) + 1
    for f, (wa, wb) in enumerate(tedges):
        for w in (wa, wb):
            for v in fibers[w]:
                if counts[v].get(f, 0) != h_mult[w]:
                    raise QuotientError(
                        f"horizontal multiplicity mismatch at {G.labels[v]!r} over target edge {f}"
                    )
    return GraphMorphism(G, target, tuple(vmap), tuple(emap), tuple(fibers), h_mult, len(H))


def pullback(phi: GraphMorphism, delta: Sequence[int]) -> Divisor:
    """``phi^*(delta)(v) = m(phi(v)) * delta(phi(v))``."""
    if len(delta) != phi.target.num_vertices:
        raise QuotientError("divisor does not live on the target graph")
    return tuple(phi.h_mult[w] * delta[w] for w in phi.vertex_map)


def pullback_firing(phi: GraphMorphism, w) -> Divisor:
    return pullback(phi, firing_divisor(phi.target, w))
