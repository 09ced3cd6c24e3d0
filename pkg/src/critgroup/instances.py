"""Named example graphs with dihedral actions, and a seeded random generator."""

from __future__ import annotations

import random
from typing import Sequence

from .action import (
    ActionError,
    DihedralAction,
    GeneratorPerm,
    compose,
    identity_perm,
    is_harmonic,
    perm_from_cycles,
    validate_action,
)
from .graph import GraphError, Multigraph, build_graph


class InstanceError(ValueError):
    pass


def _with_cycles(G: Multigraph, s1: str, s2: str, n: int) -> tuple[Multigraph, DihedralAction]:
    action = validate_action(G, perm_from_cycles(G, s1), perm_from_cycles(G, s2), n)
    return G, action


def k44() -> tuple[Multigraph, DihedralAction]:
    left = ["z1", "z2", "z3", "z4"]
    right = ["w1", "w2", "x", "y"]
    G = build_graph(left + right, [(a, b) for a in left for b in right])
    return _with_cycles(G, "(z1 z4)(z2 z3)(x y)", "(z2 z4)(w1 w2)(x y)", 4)


def fig1_d3() -> tuple[Multigraph, DihedralAction]:
    labels = ["w1", "w2", "w3", "x1", "y1", "x2", "y2", "x3", "y3"]
    edges = "w1/w2,w2/w3,w3/w1,w1/x1,w1/y1,x1/y3,w2/x2,w2/y2,x2/y1,w3/x3,w3/y3,x3/y2"
    G = build_graph(labels, [e.split("/") for e in edges.split(",")])
    return _with_cycles(G, "(w1 w3)(x1 y3)(y1 x3)(x2 y2)", "(w2 w3)(x1 y1)(y3 x2)(x3 y2)", 3)


def fig1_d4() -> tuple[Multigraph, DihedralAction]:
    labels = [f"{c}{i}" for c in "zwxy" for i in range(1, 5)]
    edges = (
        "x1/y1,y1/x2,x2/y2,y2/x3,x3/y3,y3/x4,x4/y4,y4/x1,z1/w1,w1/z2,z2/w2,w2/z3,z3/w3,w3/z4,z4/w4,w4/z1,"
        "w4/x1,w3/x4,w2/x3,w1/x2,w1/y1,w2/y2,w3/y3,w4/y4"
    )
    G = build_graph(labels, [e.split("/") for e in edges.split(",")])
    return _with_cycles(
        G,
        "(z1 z4)(z2 z3)(w1 w3)(x1 y4)(x2 y3)(x3 y2)(x4 y1)",
        "(z2 z4)(w1 w4)(w2 w3)(x1 y1)(x2 y4)(x3 y3)(x4 y2)",
        4,
    )


def octahedron() -> tuple[Multigraph, DihedralAction]:
    edges = "a/b,b/c,c/d,d/a,x/a,x/b,x/c,x/d,y/a,y/b,y/c,y/d"
    G = build_graph(list("abcdxy"), [e.split("/") for e in edges.split(",")])
    return _with_cycles(G, "(a b)(c d)", "(a d)(b c)", 2)


def wheel(n: int) -> tuple[Multigraph, DihedralAction]:
    """Wheel with ``2n`` rim vertices; the generators reflect through opposite rim edges.

    Vertex 0 is the hub and rim vertex ``i`` (0-based around the cycle) has label ``i + 1``.
    """
    if n < 2:
        raise InstanceError("wheel needs n >= 2")
    r = 2 * n
    labels = list(range(r + 1))
    edges = [(0, i + 1) for i in range(r)] + [(i + 1, (i + 1) % r + 1) for i in range(r)]
    G = build_graph(labels, edges)
    s1 = (0,) + tuple((-1 - i) % r + 1 for i in range(r))
    s2 = (0,) + tuple((1 - i) % r + 1 for i in range(r))
    return G, validate_action(G, s1, s2, n)


def square_web(n: int) -> tuple[Multigraph, DihedralAction]:
    """``n`` concentric squares on four radial lines meeting at the hub ``x``."""
    if n < 1:
        raise InstanceError("square web needs n >= 1")
    labels = ["x"] + [f"{c}{i}" for i in range(1, n + 1) for c in "abcd"]
    edges = []
    for i in range(1, n + 1):
        edges += [(f"a{i}", f"b{i}"), (f"b{i}", f"c{i}"), (f"c{i}", f"d{i}"), (f"d{i}", f"a{i}")]
    for c in "abcd":
        edges.append((f"{c}1", "x"))
        edges += [(f"{c}{i + 1}", f"{c}{i}") for i in range(1, n)]
    G = build_graph(labels, edges)
    s1 = "".join(f"(a{i} b{i})(c{i} d{i})" for i in range(1, n + 1))
    s2 = "".join(f"(a{i} d{i})(b{i} c{i})" for i in range(1, n + 1))
    return _with_cycles(G, s1, s2, 2)


def k23_d3() -> tuple[Multigraph, DihedralAction]:
    G = build_graph(["x", "y", "a", "b", "c"], [(u, v) for u in "abc" for v in "xy"])
    return _with_cycles(G, "(x y)(a b)", "(x y)(a c)", 3)


GALLERY = {
    "k44": k44,
    "fig1-d3": fig1_d3,
    "fig1-d4": fig1_d4,
    "octahedron": octahedron,
    "wheel": wheel,
    "squareweb": square_web,
    "k23-d3": k23_d3,
}
PARAMETRIC = {"wheel", "squareweb"}


def gallery(name: str, n: int | None = None) -> tuple[Multigraph, DihedralAction]:
    """Look up a named example; ``wheel`` and ``squareweb`` take the size ``n``."""
    if name not in GALLERY:
        raise InstanceError(f"unknown gallery entry {name!r}; choose from {sorted(GALLERY)}")
    if name in PARAMETRIC:
        if n is None:
            raise InstanceError(f"{name} needs a size parameter n")
        return GALLERY[name](n)
    if n is not None:
        raise InstanceError(f"{name} takes no parameters")
    return GALLERY[name]()


def _formal_orbits(n: int, orbit_spec: Sequence[tuple[str, int]]):
    """Vertex labels and generator images for orbits with the standard labeling."""
    labels: list[str] = []
    s1: list[int] = []
    s2: list[int] = []
    for j, (kind, k) in enumerate(orbit_spec):
        kind = str(kind).upper()
        if k < 1 or n % k:
            raise InstanceError(f"index {k} does not divide n = {n}")
        m = n // k
        base = len(labels)
        if kind == "I":
            labels += [f"o{j}z{i}" for i in range(1, m + 1)]
            s1 += [base + (m - 1 - i) % m for i in range(m)]
            s2 += [base + (m - i) % m for i in range(m)]
        elif kind == "II":
            if n % 2 or m % 2:
                raise InstanceError(f"Type II orbit needs n and n/k even (n = {n}, k = {k})")
            labels += [f"o{j}w{i}" for i in range(1, m + 1)]
            s1 += [base + (m - 2 - i) % m for i in range(m)]
            s2 += [base + (m - 1 - i) % m for i in range(m)]
        elif kind == "III":
            labels += [f"o{j}x{i}" for i in range(1, m + 1)] + [f"o{j}y{i}" for i in range(1, m + 1)]
            # x_i -> y_{m+1-i}, y_j -> x_{m+1-j} and the shifted versions for sigma2
            s1 += [base + m + (m - i - 1) % m for i in range(m)] + [base + (m - i - 1) % m for i in range(m)]
            s2 += [base + m + (m - i) % m for i in range(m)] + [base + (m - i) % m for i in range(m)]
        else:
            raise InstanceError(f"unknown orbit type {kind!r}")
    return labels, tuple(s1), tuple(s2)


def random_harmonic(
    n: int, orbit_spec: Sequence[tuple[str, int]], edge_orbit_count: int, seed: int, max_tries: int = 200
) -> tuple[Multigraph, DihedralAction]:
    """Random connected graph with a harmonic action having the given orbits.

    Each edge orbit is generated from a random vertex pair whose pointwise
    stabilizer is trivial, which makes the action harmonic. More edge orbits
    than requested are added if needed for connectivity.

    Args:
        n: half the group order.
        orbit_spec: ``(type, index)`` pairs with type in ``I``, ``II``, ``III``.
        edge_orbit_count: number of edge orbits to sample before connecting.
        seed: RNG seed; equal inputs give equal outputs.
    """
    if n < 2:
        raise InstanceError("n must be at least 2")
    labels, s1, s2 = _formal_orbits(n, orbit_spec)
    N = len(labels)
    if N < 2:
        raise InstanceError("need at least two vertices")
    tau = compose(s1, s2)
    elements = [identity_perm(N)]
    for _ in range(n - 1):
        elements.append(compose(tau, elements[-1]))
    elements += [compose(g, s1) for g in elements[:n]]
    if len(set(elements)) != 2 * n:
        raise InstanceError("orbit spec gives a non-faithful action")

    candidates = [
        (u, v)
        for u in range(N)
        for v in range(u + 1, N)
        if not any(g[u] == u and g[v] == v for g in elements[1:])
    ]
    if not candidates:
        raise InstanceError("no vertex pair has a trivial stabilizer")
    rng = random.Random(seed)
    orbits: list[list[tuple[int, int]]] = []
    parent = list(range(N))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def add_orbit(u, v):
        pairs = []
        seen = set()
        for g in elements:
            a, b = sorted((g[u], g[v]))
            if (a, b) not in seen:
                seen.add((a, b))
                pairs.append((a, b))
                parent[find(a)] = find(b)
        orbits.append(pairs)

    for _ in range(edge_orbit_count):
        add_orbit(*rng.choice(candidates))
    tries = 0
    while len({find(v) for v in range(N)}) > 1:
        bridging = [(u, v) for u, v in candidates if find(u) != find(v)]
        if not bridging or tries >= max_tries:
            raise InstanceError("could not connect the graph")
        add_orbit(*rng.choice(bridging))
        tries += 1

    edges = [p for orbit in orbits for p in orbit]
    where = {}
    for o, orbit in enumerate(orbits):
        for p in orbit:
            where[(o, p)] = len(where)

    def edge_perm(s):
        out = []
        for o, orbit in enumerate(orbits):
            for a, b in orbit:
                out.append(where[(o, tuple(sorted((s[a], s[b]))))])
        return tuple(out)

    try:
        G = build_graph(labels, [(labels[a], labels[b]) for a, b in edges])
        action = validate_action(G, GeneratorPerm(s1, edge_perm(s1)), GeneratorPerm(s2, edge_perm(s2)), n)
    except (ActionError, GraphError) as exc:
        raise InstanceError(f"generated instance failed validation: {exc}") from exc
    check = is_harmonic(G, action)
    if not check.ok:
        raise InstanceError(f"generated instance is not harmonic: {check.witness}")
    return G, action
