"""Dihedral actions on multigraphs: validation, harmonicity, orbits and labeling.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i``. Products
compose right to left, so ``tau = sigma1 * sigma2`` maps ``v`` to
``sigma1(sigma2(v))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .graph import Multigraph
from .intalg import lcm

Perm = tuple[int, ...]


class ActionError(ValueError):
    pass


class GeneratorPerm(NamedTuple):
    vertex_perm: Perm
    edge_perm: Perm


@dataclass(frozen=True)
class GroupElement:
    """The element ``tau^rotation * sigma1^reflection`` with its permutations."""

    word: str
    vertex_perm: Perm
    edge_perm: Perm
    rotation: int = 0
    reflection: bool = False

    @property
    def is_identity(self) -> bool:
        return self.rotation == 0 and not self.reflection


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p * q``: apply ``q`` first, then ``p``."""
    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def perm_order(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    out = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out = lcm([out, length])
    return out


def _check_perm(p: Sequence[int], size: int, what: str) -> Perm:
    p = tuple(p)
    if len(p) != size or sorted(p) != list(range(size)):
        raise ActionError(f"{what} is not a permutation of {size} points")
    return p


def _word(n: int, r: int, s: bool) -> str:
    if not s:
        return "e" if r == 0 else ("t" if r == 1 else f"t^{r}")
    if r == 0:
        return "s1"
    if r == n - 1:
        return "s2"
    return ("t" if r == 1 else f"t^{r}") + " s1"


@dataclass(frozen=True)
class DihedralAction:
    """A validated action of the dihedral group of order ``2n``."""

    graph: Multigraph = field(repr=False)
    n: int
    sigma1: GeneratorPerm
    sigma2: GeneratorPerm
    elements: tuple[GroupElement, ...] = field(repr=False)
    swapped: bool = False

    @property
    def tau(self) -> GroupElement:
        return self.elements[1 % self.n] if self.n > 1 else self.elements[0]

    @property
    def rotations(self) -> tuple[GroupElement, ...]:
        return self.elements[: self.n]

    @property
    def reflections(self) -> tuple[GroupElement, ...]:
        return self.elements[self.n :]

    def element(self, word: str) -> GroupElement:
        for g in self.elements:
            if g.word == word:
                return g
        raise KeyError(word)

    def swap(self) -> "DihedralAction":
        """Same group with the roles of the two generators exchanged."""
        return validate_action(
            self.graph, self.sigma2, self.sigma1, self.n, allow_degenerate=self.n == 1, _swapped=not self.swapped
        )


def derive_edge_perm(G: Multigraph, vertex_perm: Sequence[int]) -> Perm:
    """Edge permutation induced by a vertex automorphism of a simple graph."""
    vertex_perm = _check_perm(vertex_perm, G.num_vertices, "vertex permutation")
    if not G.is_simple():
        raise ActionError("graph has parallel edges; supply explicit edge permutations")
    lookup = {frozenset(e): i for i, e in enumerate(G.edges)}
    out = []
    for a, b in G.edges:
        image = frozenset((vertex_perm[a], vertex_perm[b]))
        if image not in lookup:
            raise ActionError("vertex permutation is not a graph automorphism")
        out.append(lookup[image])
    return tuple(out)


def _as_generator(G: Multigraph, sigma, name: str) -> GeneratorPerm:
    if isinstance(sigma, GeneratorPerm):
        vp = _check_perm(sigma.vertex_perm, G.num_vertices, f"{name} vertex permutation")
        ep = _check_perm(sigma.edge_perm, G.num_edges, f"{name} edge permutation")
    else:
        vp = _check_perm(sigma, G.num_vertices, f"{name} vertex permutation")
        ep = derive_edge_perm(G, vp)
    for e, (a, b) in enumerate(G.edges):
        c, d = G.edges[ep[e]]
        if {vp[a], vp[b]} != {c, d}:
            raise ActionError(f"{name}: edge permutation incompatible with vertex permutation at edge {e}")
    return GeneratorPerm(vp, ep)


def validate_action(
    G: Multigraph, sigma1, sigma2, n: int, allow_degenerate: bool = False, _swapped: bool = False
) -> DihedralAction:
    """Check the dihedral relations on vertices and edges and enumerate the group.

    Args:
        G: host graph.
        sigma1, sigma2: ``GeneratorPerm`` values, or bare vertex permutations
            of a simple graph (edge permutations are then derived).
        n: required order of ``tau = sigma1 * sigma2``.
        allow_degenerate: accept ``n = 1``, where the generators coincide.

    Raises:
        ActionError: on any violated relation or a non-faithful action.
    """
    if n < 1:
        raise ActionError("n must be positive")
    if n == 1 and not allow_degenerate:
        raise ActionError("n = 1 is degenerate; pass allow_degenerate to accept it")
    s1 = _as_generator(G, sigma1, "sigma1")
    s2 = _as_generator(G, sigma2, "sigma2")
    idv, ide = identity_perm(G.num_vertices), identity_perm(G.num_edges)
    for name, s in (("sigma1", s1), ("sigma2", s2)):
        if compose(s.vertex_perm, s.vertex_perm) != idv or compose(s.edge_perm, s.edge_perm) != ide:
            raise ActionError(f"{name} is not an involution")
    tv = compose(s1.vertex_perm, s2.vertex_perm)
    te = compose(s1.edge_perm, s2.edge_perm)
    order = lcm([perm_order(tv), perm_order(te)])
    if order != n:
        raise ActionError(f"tau has order {order}, expected {n}")

    rotations = [(idv, ide)]
    for _ in range(n - 1):
        v, e = rotations[-1]
        rotations.append((compose(tv, v), compose(te, e)))
    elements = [GroupElement(_word(n, r, False), v, e, r, False) for r, (v, e) in enumerate(rotations)]
    elements += [
        GroupElement(_word(n, r, True), compose(v, s1.vertex_perm), compose(e, s1.edge_perm), r, True)
        for r, (v, e) in enumerate(rotations)
    ]
    if n > 1 and len({(g.vertex_perm, g.edge_perm) for g in elements}) != 2 * n:
        raise ActionError("action is not faithful")
    return DihedralAction(G, n, s1, s2, tuple(elements), _swapped)


class HarmonicCheck(NamedTuple):
    ok: bool
    witness: tuple[str, int] | None


def is_harmonic(G: Multigraph, action: DihedralAction | Iterable[GroupElement]) -> HarmonicCheck:
    """Every element fixing an edge must swap its endpoints.

    Returns:
        ``(True, None)``, or ``(False, (word, edge))`` for the first offender.
    """
    elements = action.elements if isinstance(action, DihedralAction) else action
    for g in elements:
        if g.is_identity:
            continue
        for e, (a, b) in enumerate(G.edges):
            if g.edge_perm[e] == e and not (g.vertex_perm[a] == b and g.vertex_perm[b] == a):
                return HarmonicCheck(False, (g.word, e))
    return HarmonicCheck(True, None)


@dataclass(frozen=True)
class OrbitInfo:
    """A vertex orbit with its type, index and canonical labeling.

    ``labeling`` is ``(z,)`` for Type I, ``(w,)`` for Type II and ``(x, y)``
    for Type III; each sequence is 0-based storage of the 1-based labels.
    """

    vertices: tuple[int, ...]
    orbit_type: str
    index: int
    labeling: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        """Length ``n/k`` of each labeling sequence."""
        return len(self.labeling[0])

    @property
    def inertial(self) -> bool:
        return self.orbit_type != "III"

    def seq(self, i: int, which: int = 0) -> int:
        """Vertex carrying label ``i`` (1-based, read mod ``m``)."""
        return self.labeling[which][(i - 1) % self.m]

    def name(self, G: Multigraph) -> str:
        return "{" + ",".join(str(G.labels[v]) for v in self.vertices) + "}"


@dataclass(frozen=True)
class ActionSummary:
    action: DihedralAction
    orbits: tuple[OrbitInfo, ...]
    t1: int
    t2: int
    t3: int
    kappa: int
    t_tilde: int
    parity: str
    swapped: bool
    tilde_ambiguous: bool

    @property
    def n(self) -> int:
        return self.action.n

    @property
    def graph(self) -> Multigraph:
        return self.action.graph

    def orbit_of(self, v: int) -> OrbitInfo:
        for o in self.orbits:
            if v in o.vertices:
                return o
        raise KeyError(v)


PARITY_ODD = "n odd"
PARITY_EVEN_KODD = "n even, kappa odd"
PARITY_EVEN_KEVEN = "n even, kappa even"


def vertex_orbits(action: DihedralAction) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for v in range(action.graph.num_vertices):
        if v in seen:
            continue
        orbit = sorted({g.vertex_perm[v] for g in action.elements})
        seen.update(orbit)
        out.append(tuple(orbit))
    return out


def canonical_labeling(orbit: Sequence[int], orbit_type: str, action: DihedralAction) -> tuple[tuple[int, ...], ...]:
    """Labels per the standard relabeling of an orbit, with all identities asserted."""
    s1, s2 = action.sigma1.vertex_perm, action.sigma2.vertex_perm
    tau = action.tau.vertex_perm
    tinv = inverse(tau)
    orbit = sorted(orbit)
    if orbit_type == "I":
        start = min(v for v in orbit if s2[v] == v)
        m = len(orbit)
        z = [start]
        for _ in range(m - 1):
            z.append(tinv[z[-1]])
        lab = (tuple(z),)
    elif orbit_type == "II":
        start = min(v for v in orbit if s1[v] == v)
        m = len(orbit)
        w = [0] * m
        w[m - 1] = start
        for i in range(m - 1, 0, -1):
            w[i - 1] = tau[w[i]]
        lab = (tuple(w),)
    else:
        m = len(orbit) // 2
        x = [orbit[0]]
        for _ in range(m - 1):
            x.append(tinv[x[-1]])
        y = [s1[x[m - j]] for j in range(1, m + 1)]
        lab = (tuple(x), tuple(y))
    _verify_labeling(lab, orbit_type, orbit, s1, s2)
    return lab


def _verify_labeling(lab, orbit_type, orbit, s1, s2) -> None:
    m = len(lab[0])
    flat = sorted(v for seq in lab for v in seq)
    if flat != sorted(orbit):
        raise ActionError("internal: labeling does not cover the orbit exactly")

    def at(seq, i):
        return seq[(i - 1) % m]

    for i in range(1, m + 1):
        if orbit_type == "I":
            z = lab[0]
            ok = s1[at(z, i)] == at(z, m + 1 - i) and s2[at(z, i)] == at(z, m + 2 - i)
        elif orbit_type == "II":
            w = lab[0]
            ok = s1[at(w, i)] == at(w, m - i) and s2[at(w, i)] == at(w, m + 1 - i)
        else:
            x, y = lab
            ok = s1[at(x, i)] == at(y, m + 1 - i) and s2[at(x, i)] == at(y, m + 2 - i)
        if not ok:
            raise ActionError(f"internal: Type {orbit_type} labeling identity fails at i={i}")


def _classify(action: DihedralAction) -> list[OrbitInfo]:
    n = action.n
    s1, s2 = action.sigma1.vertex_perm, action.sigma2.vertex_perm
    out = []
    for orbit in vertex_orbits(action):
        if any(s2[v] == v for v in orbit):
            kind = "I"
        elif any(s1[v] == v for v in orbit):
            kind = "II"
        else:
            kind = "III"
        total = n if kind != "III" else 2 * n
        if total % len(orbit) or (kind == "III" and len(orbit) % 2):
            raise ActionError(f"internal: orbit of size {len(orbit)} inconsistent with Type {kind}")
        out.append(OrbitInfo(orbit, kind, total // len(orbit), canonical_labeling(orbit, kind, action)))
    return out


def classify_orbits(G: Multigraph, action: DihedralAction) -> ActionSummary:
    """Type and index every orbit, normalizing generators so Type I precedes Type II.

    If there are Type II orbits but no Type I orbits, the generators are
    exchanged and everything is reclassified. ``t_tilde`` uses
    ``max(t1 - 1, 0) + max(t2 - 1, 0)`` and is forced to 0 for odd ``n``.
    """
    if action.graph is not G and action.graph != G:
        raise ActionError("action belongs to a different graph")
    orbits = _classify(action)
    counts = {t: sum(o.orbit_type == t for o in orbits) for t in ("I", "II", "III")}
    if counts["II"] > 0 and counts["I"] == 0:
        action = action.swap()
        orbits = _classify(action)
        counts = {t: sum(o.orbit_type == t for o in orbits) for t in ("I", "II", "III")}
    t1, t2, t3 = counts["I"], counts["II"], counts["III"]
    n = action.n
    kappa = lcm(o.index for o in orbits)
    if n % 2:
        if t2:
            raise ActionError("internal: Type II orbit for odd n")
        parity, t_tilde = PARITY_ODD, 0
    else:
        parity = PARITY_EVEN_KODD if kappa % 2 else PARITY_EVEN_KEVEN
        t_tilde = max(t1 - 1, 0) + max(t2 - 1, 0)
    ambiguous = n % 2 == 0 and (t1 == 0 or t2 == 0)
    return ActionSummary(action, tuple(orbits), t1, t2, t3, kappa, t_tilde, parity, action.swapped, ambiguous)


_CYCLE = re.compile(r"\(([^()]*)\)")


def perm_from_cycles(G: Multigraph, text: str) -> Perm:
    """Parse cycle notation such as ``"(z1 z4)(z2 z3)(x y)"``; fixed points may be omitted."""
    p = list(range(G.num_vertices))
    rest = _CYCLE.sub("", text).strip()
    if rest:
        raise ActionError(f"cannot parse cycle notation near {rest!r}")
    seen: set[int] = set()
    for body in _CYCLE.findall(text):
        items = [G.vertex(tok) for tok in _tokens(G, body)]
        for v in items:
            if v in seen:
                raise ActionError(f"vertex {G.labels[v]!r} appears twice in {text!r}")
            seen.add(v)
        for a, b in zip(items, items[1:] + items[:1]):
            p[a] = b
    return tuple(p)


def _tokens(G: Multigraph, body: str) -> list:
    out = []
    for tok in body.replace(",", " ").split():
        if tok in G.index:
            out.append(tok)
        elif tok.lstrip("-").isdigit() and int(tok) in G.index:
            out.append(int(tok))
        else:
            raise ActionError(f"unknown vertex {tok!r} in cycle notation")
    return out


def perm_from_mapping(G: Multigraph, mapping: Mapping) -> Perm:
    """Vertex permutation from a label map; unmapped vertices are fixed."""
    p = list(range(G.num_vertices))
    for a, b in mapping.items():
        p[_lookup(G, a)] = _lookup(G, b)
    return _check_perm(p, G.num_vertices, "vertex map")


def _lookup(G: Multigraph, lab) -> int:
    if lab in G.index:
        return G.index[lab]
    if isinstance(lab, str) and lab.lstrip("-").isdigit() and int(lab) in G.index:
        return G.index[int(lab)]
    raise ActionError(f"unknown vertex {lab!r}")


def perm_to_cycles(G: Multigraph, p: Sequence[int]) -> str:
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(G.labels[v]) for v in cyc) + ")")
    return "".join(parts) or "()"
