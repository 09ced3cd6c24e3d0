"""Divisor lattices attached to a dihedral action, orbit functionals and membership criteria.

Lattices are stored by their row Hermite basis, which is canonical, so two
lattices are equal exactly when their bases are. Criteria that characterize
membership in closed form are implemented alongside raw lattice membership so
the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .action import ActionSummary, DihedralAction, OrbitInfo, PARITY_EVEN_KEVEN, PARITY_ODD, classify_orbits
from .graph import Divisor, Multigraph, firing_divisor
from .intalg import AbelianGroup, hnf, hnf_basis, snf, xgcd_list
from .quotient import GraphMorphism, pullback, quotient_graph


class LatticeError(ValueError):
    pass


class ConstructionError(LatticeError):
    """A closed-form decomposition produced a divisor outside its target lattice."""


@dataclass(frozen=True)
class DivisorLattice:
    """Integer span of divisors on a fixed vertex set."""

    dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, rows: Iterable[Sequence[int]], dim: int) -> "DivisorLattice":
        rows = [tuple(r) for r in rows]
        if any(len(r) != dim for r in rows):
            raise LatticeError("generator has the wrong length")
        return cls(dim, tuple(hnf_basis(rows, dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(b) if x) for b in self.basis)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of ``v`` in the basis, or ``None`` if ``v`` is not in the lattice."""
        if len(v) != self.dim:
            raise LatticeError("divisor has the wrong length")
        v = list(v)
        coords = []
        for b, j in zip(self.basis, self.pivots):
            if any(v[:j]):
                return None
            q, r = divmod(v[j], b[j])
            if r:
                return None
            coords.append(q)
            if q:
                v[j:] = [x - q * y for x, y in zip(v[j:], b[j:])]
        return coords if not any(v) else None

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def issubset(self, other: "DivisorLattice") -> bool:
        return all(b in other for b in self.basis)


def member(L: DivisorLattice, delta: Sequence[int]) -> bool:
    return delta in L


def lattice_sum(*lattices: DivisorLattice) -> DivisorLattice:
    dim = lattices[0].dim
    if any(L.dim != dim for L in lattices):
        raise LatticeError("ambient dimensions differ")
    return DivisorLattice.span([b for L in lattices for b in L.basis], dim)


def lattice_intersection(A: DivisorLattice, B: DivisorLattice) -> DivisorLattice:
    """``A ∩ B`` from the left kernel of the stacked bases ``[A; -B]``."""
    if A.dim != B.dim:
        raise LatticeError("ambient dimensions differ")
    if not A.basis or not B.basis:
        return DivisorLattice(A.dim, ())
    M = [list(r) for r in A.basis] + [[-x for x in r] for r in B.basis]
    H, U = hnf(M)
    ra = A.rank
    rows = []
    for h, u in zip(H, U):
        if any(h):
            continue
        rows.append([sum(c * a[j] for c, a in zip(u[:ra], A.basis)) for j in range(A.dim)])
    return DivisorLattice.span(rows, A.dim)


def lattice_quotient(sub: DivisorLattice, sup: DivisorLattice) -> tuple[int, AbelianGroup]:
    """``sup/sub`` as (free rank, torsion group); ``sub`` must lie in ``sup``."""
    coords = []
    for b in sub.basis:
        c = sup.coordinates(b)
        if c is None:
            raise LatticeError("sub is not contained in sup")
        coords.append(c)
    if not coords:
        return sup.rank, AbelianGroup()
    inv = [d for d in snf(coords) if d]
    return sup.rank - len(inv), AbelianGroup.from_orders(inv)


def finite_quotient(sub: DivisorLattice, sup: DivisorLattice) -> AbelianGroup:
    free, tors = lattice_quotient(sub, sup)
    if free:
        raise LatticeError(f"quotient has free rank {free}")
    return tors


# -- lattices of a graph and action ---------------------------------------------


def unit(dim: int, i: int) -> Divisor:
    out = [0] * dim
    out[i] = 1
    return tuple(out)


def build_D(G: Multigraph) -> DivisorLattice:
    N = G.num_vertices
    return DivisorLattice.span([tuple(1 if j == v else -1 if j == 0 else 0 for j in range(N)) for v in range(1, N)], N)


def build_L(G: Multigraph) -> DivisorLattice:
    return DivisorLattice.span([firing_divisor(G, v) for v in range(G.num_vertices)], G.num_vertices)


def _pulled_degree_zero(phi: GraphMorphism) -> DivisorLattice:
    T = phi.target.num_vertices
    rows = [pullback(phi, tuple(1 if j == w else -1 if j == 0 else 0 for j in range(T))) for w in range(1, T)]
    return DivisorLattice.span(rows, phi.source.num_vertices)


class LatticeContext:
    """A graph with a normalized harmonic action and its lattices, built lazily.

    ``phi[1..3]`` are the quotient maps by ``<sigma1>``, ``<sigma2>`` and
    ``<tau>``; ``phi[0]`` is the quotient by the whole group.
    """

    def __init__(self, G: Multigraph, action: DihedralAction, summary: ActionSummary | None = None):
        self.summary = summary or classify_orbits(G, action)
        self.G = G
        self.action = self.summary.action
        self.n = self.action.n
        self.dim = G.num_vertices

    @cached_property
    def phi(self) -> dict[int, GraphMorphism]:
        names = {0: "full", 1: "sigma1", 2: "sigma2", 3: "tau"}
        return {i: quotient_graph(self.G, self.action, w) for i, w in names.items()}

    @cached_property
    def D(self) -> DivisorLattice:
        return build_D(self.G)

    @cached_property
    def L(self) -> DivisorLattice:
        return build_L(self.G)

    @cached_property
    def Lprime(self) -> DivisorLattice:
        rows = [
            pullback(self.phi[i], firing_divisor(self.phi[i].target, w))
            for i in (1, 2, 3)
            for w in range(self.phi[i].target.num_vertices)
        ]
        Lp = DivisorLattice.span(rows, self.dim)
        if not Lp.issubset(self.L):
            raise LatticeError("internal: L' is not contained in L")
        return Lp

    def Pi(self, i: int) -> DivisorLattice:
        return self._P[i]

    @cached_property
    def _P(self) -> dict[int, DivisorLattice]:
        return {i: _pulled_degree_zero(self.phi[i]) for i in range(4)}

    @cached_property
    def P12(self) -> DivisorLattice:
        return lattice_sum(self.Pi(1), self.Pi(2))

    @cached_property
    def P(self) -> DivisorLattice:
        return lattice_sum(self.Pi(1), self.Pi(2), self.Pi(3))

    @cached_property
    def Q(self) -> DivisorLattice:
        return DivisorLattice.span([delta_orbit(self, o) for o in self.summary.orbits], self.dim)

    @cached_property
    def gamma(self) -> Divisor:
        return find_gamma(self)

    def lattice(self, name: str) -> DivisorLattice:
        """Lookup by name: ``D``, ``L``, ``Lprime``, ``P``, ``P12``, ``P0``..``P3``, ``Q``."""
        if name in ("P0", "P1", "P2", "P3"):
            return self.Pi(int(name[1]))
        if name in ("D", "L", "Lprime", "P", "P12", "Q"):
            return getattr(self, name)
        raise LatticeError(f"unknown lattice {name!r}")


def build_Lprime(G: Multigraph, action: DihedralAction) -> DivisorLattice:
    return LatticeContext(G, action).Lprime


def build_Pi(G: Multigraph, action: DihedralAction, i: int) -> DivisorLattice:
    return LatticeContext(G, action).Pi(i)


def build_P(G: Multigraph, action: DihedralAction) -> DivisorLattice:
    return LatticeContext(G, action).P


def build_Q(G: Multigraph, action: DihedralAction) -> DivisorLattice:
    return LatticeContext(G, action).Q


# -- structural descriptions used as independent oracles ---------------------------


def in_Pi_structural(ctx: LatticeContext, delta: Sequence[int], i: int) -> bool:
    """Membership in ``P_i`` from symmetry and divisibility, without lattices.

    ``P_1``/``P_2``: degree 0, invariant under the generator, even at its fixed points.
    ``P_3``: degree 0, constant on each ``tau``-orbit with values divisible by the index.
    ``P_0``: degree 0, constant on each orbit with values divisible by ``2n/|O|``.
    """
    if sum(delta) != 0:
        return False
    if i in (1, 2):
        s = (ctx.action.sigma1 if i == 1 else ctx.action.sigma2).vertex_perm
        return all(delta[s[v]] == delta[v] and (s[v] != v or delta[v] % 2 == 0) for v in range(ctx.dim))
    for o in ctx.summary.orbits:
        parts = o.labeling if (i == 3 and not o.inertial) else (o.vertices,)
        step = o.index if i == 3 else 2 * ctx.n // o.size
        for part in parts:
            vals = {delta[v] for v in part}
            if len(vals) != 1 or vals.pop() % step:
                return False
    return True


# -- orbit functionals -------------------------------------------------------------


def F_orbit(delta: Sequence[int], orbit: OrbitInfo) -> int:
    m = orbit.m
    if orbit.orbit_type == "I":
        return sum(2 * i * delta[orbit.seq(i)] for i in range(1, m + 1))
    if orbit.orbit_type == "II":
        return sum((2 * i + 1) * delta[orbit.seq(i)] for i in range(1, m + 1))
    return sum(2 * i * (delta[orbit.seq(i, 0)] + delta[orbit.seq(i, 1)]) for i in range(1, m + 1))


def F_total(delta: Sequence[int], summary: ActionSummary) -> int:
    return sum(F_orbit(delta, o) for o in summary.orbits)


def A_orbit(delta: Sequence[int], orbit: OrbitInfo) -> int:
    """Orbit sum for inertial orbits; ``sum x - sum y`` for Type III (not reduced)."""
    if orbit.inertial:
        return sum(delta[v] for v in orbit.vertices)
    return sum(delta[v] for v in orbit.labeling[0]) - sum(delta[v] for v in orbit.labeling[1])


def orbit_sum(delta: Sequence[int], orbit: OrbitInfo) -> int:
    return sum(delta[v] for v in orbit.vertices)


# -- the lattice Q and gamma ---------------------------------------------------------


def delta_orbit(ctx: LatticeContext, orbit: OrbitInfo) -> Divisor:
    """1 on a Type III orbit, 2 on an inertial orbit, 0 elsewhere; degree ``2n/k``."""
    out = [0] * ctx.dim
    for v in orbit.vertices:
        out[v] = 2 if orbit.inertial else 1
    return tuple(out)


def gamma_coefficients(ctx: LatticeContext) -> list[int]:
    """Integers ``s_O`` with ``sum s_O * 2n/k_O = 2n/kappa``."""
    orbits = ctx.summary.orbits
    kappa = ctx.summary.kappa
    for j, o in enumerate(orbits):
        if o.index == kappa:
            return [int(i == j) for i in range(len(orbits))]
    degrees = [2 * ctx.n // o.index for o in orbits]
    coeffs, g = xgcd_list(degrees)
    if g != 2 * ctx.n // kappa:
        raise LatticeError(f"internal: gcd of orbit degrees is {g}, expected {2 * ctx.n // kappa}")
    return coeffs


def find_gamma(ctx: LatticeContext) -> Divisor:
    """Element of ``Q`` of degree ``2n/kappa``."""
    out = [0] * ctx.dim
    for s, o in zip(gamma_coefficients(ctx), ctx.summary.orbits):
        if s:
            for v, x in enumerate(delta_orbit(ctx, o)):
                out[v] += s * x
    return tuple(out)


def gamma_orbit(ctx: LatticeContext, orbit: OrbitInfo) -> Divisor:
    """``delta_O - (kappa/k_O) * gamma``: degree 0, in ``P_1 ∩ P_2``."""
    c = ctx.summary.kappa // orbit.index
    return tuple(a - c * b for a, b in zip(delta_orbit(ctx, orbit), ctx.gamma))


# -- membership criteria and constructive splits ----------------------------------


def in_P12_criterion(ctx: LatticeContext, delta: Sequence[int]) -> bool:
    """Closed-form test for ``P_1 + P_2``: even orbit sums, balanced Type III halves, F condition."""
    s = ctx.summary
    if sum(delta) != 0:
        return False
    for o in s.orbits:
        if orbit_sum(delta, o) % 2:
            return False
        if not o.inertial and A_orbit(delta, o) != 0:
            return False
    return F_total(delta, s) % (2 * ctx.n // s.kappa) == 0


def _hat_divisors(ctx: LatticeContext, delta: Sequence[int]) -> tuple[list[int], list[int]]:
    h1 = [0] * ctx.dim
    h2 = [0] * ctx.dim
    for o in ctx.summary.orbits:
        m = o.m
        if o.orbit_type == "III":
            x, y = o.labeling

            def d1(i):
                return sum(delta[x[j - 1]] for j in range(1, i + 1)) - sum(delta[y[j - 1]] for j in range(m + 2 - i, m + 1))

            def d2(i):
                return sum(delta[y[j - 1]] for j in range(m + 2 - i, m + 1)) - sum(delta[x[j - 1]] for j in range(1, i))

            for i in range(1, m + 1):
                h1[x[i - 1]] = d1(i)
                h2[x[i - 1]] = d2(i)
                h1[y[i - 1]] = d1(m + 1 - i)
                h2[y[i - 1]] = d2((m + 1 - i) % m + 1)
        else:
            # On (w_m, ..., w_1) the generators act like sigma2, sigma1 on a
            # Type I orbit, so Type II reuses the Type I sums with roles swapped.
            z = o.labeling[0] if o.orbit_type == "I" else o.labeling[0][::-1]
            first, second = (h1, h2) if o.orbit_type == "I" else (h2, h1)
            for i in range(1, m + 1):
                tail = sum(delta[z[j - 1]] for j in range(m + 2 - i, m + 1))
                first[z[i - 1]] = sum(delta[z[j - 1]] for j in range(1, i + 1)) - tail
                second[z[i - 1]] = tail - sum(delta[z[j - 1]] for j in range(1, i))
    return h1, h2


def split_P12(ctx: LatticeContext, delta: Sequence[int]) -> tuple[Divisor, Divisor]:
    """Write ``delta`` as ``delta1 + delta2`` with ``delta_i`` in ``P_i``.

    Uses the partial-sum divisors, then moves their degree into a multiple
    of ``gamma``.

    Raises:
        LatticeError: ``delta`` fails the criterion.
        ConstructionError: a produced part is not in its lattice.
    """
    if not in_P12_criterion(ctx, delta):
        raise LatticeError("divisor is not in P1 + P2")
    h1, h2 = _hat_divisors(ctx, delta)
    if any(a + b != d for a, b, d in zip(h1, h2, delta)):
        raise ConstructionError("internal: partial-sum divisors do not add up")
    deg = sum(h1)
    gdeg = 2 * ctx.n // ctx.summary.kappa
    if deg % gdeg:
        raise ConstructionError(f"partial-sum degree {deg} is not a multiple of {gdeg}")
    c = deg // gdeg
    d1 = tuple(a - c * g for a, g in zip(h1, ctx.gamma))
    d2 = tuple(b + c * g for b, g in zip(h2, ctx.gamma))
    for i, d in ((1, d1), (2, d2)):
        if not in_Pi_structural(ctx, d, i):
            raise ConstructionError(f"constructed part is not in P{i}")
    return d1, d2


def P_modulus(summary: ActionSummary, refined: bool = False) -> int:
    """Modulus for the ``F`` condition of the ``P`` criterion.

    The refined value doubles ``n/kappa`` when ``n`` is even and there is no
    Type II orbit, since ``F`` is then always even.
    """
    n, kappa = summary.n, summary.kappa
    if summary.parity == PARITY_EVEN_KEVEN or (refined and n % 2 == 0 and summary.t2 == 0):
        return 2 * n // kappa
    return n // kappa


def in_P_criterion(ctx: LatticeContext, delta: Sequence[int], refined: bool = False) -> bool:
    """Closed-form test for ``P`` according to the parity case.

    With ``refined=False`` this is the published statement, which accepts
    some non-members when ``n`` is even and ``t2 = 0``. The refined test
    uses :func:`P_modulus` and, when every orbit is Type III and ``n`` is
    even, also asks that ``sum_O A_O / n`` be even.
    """
    s = ctx.summary
    n = ctx.n
    if sum(delta) != 0:
        return False
    for o in s.orbits:
        if o.inertial:
            if n % 2 == 0 and orbit_sum(delta, o) % 2:
                return False
        elif A_orbit(delta, o) % n:
            return False
    if F_total(delta, s) % P_modulus(s, refined):
        return False
    if refined and n % 2 == 0 and s.t1 == 0 and s.t2 == 0:
        return sum(A_orbit(delta, o) // n for o in s.orbits) % 2 == 0
    return True


def construct_delta3(ctx: LatticeContext, delta: Sequence[int]) -> Divisor:
    """The ``P_3`` part chosen so that ``delta - delta3`` meets the ``P_1 + P_2`` criterion."""
    s = ctx.summary
    n = ctx.n
    out = [0] * ctx.dim
    a = {}
    for o in s.orbits:
        if not o.inertial:
            a[o.vertices] = A_orbit(delta, o) // n
            for v in o.labeling[0]:
                out[v] = o.index * a[o.vertices]
    alpha = sum(a.values())
    type1 = [o for o in s.orbits if o.orbit_type == "I"]
    type2 = [o for o in s.orbits if o.orbit_type == "II"]

    def fill(o, value):
        for v in o.vertices:
            out[v] = value

    if not type1:
        if type2:
            raise ConstructionError("internal: Type II orbits without Type I after normalization")
        omega = s.orbits[0]
        if alpha % 2:
            raise ConstructionError("all orbits are Type III and alpha is odd; alpha/2 is not an integer")
        x, y = omega.labeling
        for v in x:
            out[v] = omega.index * (a[omega.vertices] - alpha // 2)
        for v in y:
            out[v] = -omega.index * (alpha // 2)
        return tuple(out)
    omega = type1[0]
    if s.parity == PARITY_ODD:
        odd = [o for o in type1[1:] if orbit_sum(delta, o) % 2]
        for o in odd:
            fill(o, o.index)
        fill(omega, -omega.index * (alpha + len(odd)))
    elif s.parity == PARITY_EVEN_KEVEN or F_total(delta, s) % (2 * n // s.kappa) == 0:
        fill(omega, -omega.index * alpha)
    else:
        if not type2:
            raise ConstructionError("F is an odd multiple of n/kappa but there is no Type II orbit")
        theta = type2[0]
        fill(theta, theta.index)
        fill(omega, -omega.index * (alpha + 1))
    return tuple(out)


def split_P(ctx: LatticeContext, delta: Sequence[int]) -> tuple[Divisor, Divisor]:
    """Write ``delta`` as ``delta12 + delta3`` with parts in ``P_1 + P_2`` and ``P_3``.

    Membership is decided by the refined criterion, under which the
    construction succeeds for every member.

    Raises:
        LatticeError: ``delta`` fails the criterion.
        ConstructionError: the closed-form construction does not apply.
    """
    if not in_P_criterion(ctx, delta, refined=True):
        raise LatticeError("divisor is not in P")
    d3 = construct_delta3(ctx, delta)
    if not in_Pi_structural(ctx, d3, 3):
        raise ConstructionError("constructed part is not in P3")
    rest = tuple(a - b for a, b in zip(delta, d3))
    if not in_P12_criterion(ctx, rest):
        raise ConstructionError("remainder after removing the P3 part is not in P1 + P2")
    return rest, d3
