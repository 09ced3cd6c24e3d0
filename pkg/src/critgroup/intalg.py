"""Exact integer linear algebra and finite abelian groups.

Matrices are plain ``list[list[int]]``; Python integers are arbitrary
precision, so no overflow handling is needed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

Matrix = list[list[int]]


class IntAlgError(ValueError):
    pass


class NotASummandError(IntAlgError):
    """Raised when a group is not a direct summand of another."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def xgcd_list(values: Sequence[int]) -> tuple[list[int], int]:
    """Bezout coefficients for a list: ``sum(c*v) == gcd(values)``."""
    coeffs: list[int] = []
    g = 0
    for v in values:
        x, y, g_new = xgcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs.append(y)
        g = g_new
    return coeffs, g


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)]


def det(M: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


# -- Hermite normal form ------------------------------------------------------


def hnf(M: Matrix) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form with transform.

    Returns ``(H, U)`` with ``U`` unimodular and ``H == U @ M``. Pivots are
    positive, entries above a pivot lie in ``[0, pivot)``, zero rows are last.
    """
    m = len(M)
    ncols = len(M[0]) if m else 0
    H = [list(row) for row in M]
    U = identity(m)
    r = 0
    pivots: list[tuple[int, int]] = []
    for j in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][j]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            a = H[r][j]
            done = True
            for i in range(r + 1, m):
                b = H[i][j]
                if b:
                    q = b // a
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][j]:
                        done = False
            if done:
                break
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        pivots.append((r, j))
        r += 1
    for r, j in pivots:
        a = H[r][j]
        for i in range(r):
            q = H[i][j] // a
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
    return H, U


def hnf_basis(rows: Iterable[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """HNF basis of the row lattice, zero rows removed.

    Same normal form as :func:`hnf` without tracking the transform. Column
    elimination with minimum-|entry| pivots keeps intermediate growth small.
    """
    active = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    cols: list[int] = []
    for j in range(ncols):
        if not active:
            break
        while True:
            nz = [r for r in active if r[j]]
            if not nz:
                break
            p = min(nz, key=lambda r: abs(r[j]))
            a = p[j]
            rest = []
            clean = True
            for r in active:
                if r is p:
                    continue
                b = r[j]
                if b:
                    q = b // a
                    r = [x - q * y for x, y in zip(r, p)]
                    if r[j]:
                        clean = False
                if any(r):
                    rest.append(r)
            active = [p] + rest
            if clean:
                break
        if not nz:
            continue
        p = active.pop(0)
        if p[j] < 0:
            p = [-x for x in p]
        basis.append(p)
        cols.append(j)
    for i in range(len(basis)):
        c = cols[i]
        row_i = basis[i]
        a = row_i[c]
        for k in range(i):
            q = basis[k][c] // a
            if q:
                row_k = basis[k]
                row_k[c:] = [x - q * y for x, y in zip(row_k[c:], row_i[c:])]
    return [tuple(b) for b in basis]


def _next_nonzero(v: list[int], start: int) -> int | None:
    for j in range(start, len(v)):
        if v[j]:
            return j
    return None


# -- Smith normal form --------------------------------------------------------


def _diagonalize(M: Matrix) -> list[int]:
    """Nonzero diagonal of an equivalent diagonal matrix (no divisibility)."""
    A = [list(row) for row in M]
    diag: list[int] = []
    while A and A[0]:
        m, n = len(A), len(A[0])
        best = None
        for i in range(m):
            row = A[i]
            for j in range(n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        A[0], A[pi] = A[pi], A[0]
        for row in A:
            row[0], row[pj] = row[pj], row[0]
        while True:
            a = A[0][0]
            dirty = False
            # clear column 0 with row operations
            r0 = A[0]
            for i in range(1, m):
                b = A[i][0]
                if b:
                    q = b // a
                    if q:
                        row = A[i]
                        A[i] = [x - q * y for x, y in zip(row, r0)]
                    if A[i][0]:
                        dirty = True
            # clear row 0 with column operations
            for j in range(1, n):
                b = r0[j]
                if b:
                    q = b // a
                    if q:
                        for row in A:
                            row[j] -= q * row[0]
                    if r0[j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest remaining entry of row/column 0 into the pivot
            cand = [(abs(A[i][0]), i, 0) for i in range(1, m) if A[i][0]]
            cand += [(abs(r0[j]), 0, j) for j in range(1, n) if r0[j]]
            _, ci, cj = min(cand)
            if cj == 0:
                A[0], A[ci] = A[ci], A[0]
                r0 = A[0]
            else:
                for row in A:
                    row[0], row[cj] = row[cj], row[0]
        diag.append(abs(A[0][0]))
        A = [row[1:] for row in A[1:]]
    return diag


def canonical_factors(orders: Iterable[int]) -> list[int]:
    """Invariant factors (dropping 1s) of a direct sum of cyclic groups.

    Uses pairwise gcd/lcm exchange, so no factorization is required. A zero
    order (infinite cyclic) is rejected.
    """
    vals = []
    for d in orders:
        d = abs(int(d))
        if d == 0:
            raise IntAlgError("infinite cyclic summand")
        if d != 1:
            vals.append(d)
    vals.sort()
    k = len(vals)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = vals[i], vals[j]
            if b % a:
                g = math.gcd(a, b)
                vals[i], vals[j] = g, a // g * b
        # vals[i] now divides everything after it
    return [d for d in vals if d != 1]


def snf(M: Matrix) -> list[int]:
    """Nonzero Smith invariants ``d1 | d2 | ...`` of ``M`` (1s included)."""
    diag = _diagonalize(M)
    nontrivial = canonical_factors(diag)
    return [1] * (len(diag) - len(nontrivial)) + nontrivial


def smith_via_minors(M: Matrix) -> list[int]:
    """Smith invariants from gcds of k x k minors. Only for tiny matrices."""
    from itertools import combinations

    m = len(M)
    n = len(M[0]) if m else 0
    out: list[int] = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = math.gcd(g, det([[M[i][j] for j in cols] for i in rows]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# -- primes -------------------------------------------------------------------

FACTOR_LIMIT = 10**7


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def factorize(n: int, limit: int = FACTOR_LIMIT) -> dict[int, int]:
    """Trial-division factorization.

    Raises IntAlgError if ``n`` keeps a cofactor that cannot be certified
    prime using trial divisors up to ``limit``.
    """
    if n < 1:
        raise IntAlgError(f"cannot factor {n}")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        if f > limit:
            raise IntAlgError(f"{n} has no prime factor below {limit}")
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def coprime_base(values: Iterable[int]) -> list[int]:
    """Pairwise coprime numbers > 1 such that every value is a product of
    their powers (factor refinement). Lets Sylow-style comparisons run on
    orders too large to factor."""
    base: list[int] = []
    for v in values:
        v = abs(v)
        if v <= 1:
            continue
        base.append(v)
        while True:
            pair = next(
                ((i, j) for i in range(len(base)) for j in range(i + 1, len(base))
                 if math.gcd(base[i], base[j]) > 1),
                None,
            )
            if pair is None:
                break
            i, j = pair
            a, b = base[i], base[j]
            g = math.gcd(a, b)
            base = [x for k, x in enumerate(base) if k not in pair]
            base.extend(x for x in (a // g, g, b // g) if x > 1)
    return sorted(base)


def _valuation(x: int, q: int) -> int:
    e = 0
    while x % q == 0:
        x //= q
        e += 1
    return e


# -- finite abelian groups ----------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group in invariant-factor form ``d1 | d2 | ... | dk``.

    The trivial group has no factors. Construct through :meth:`from_orders`
    unless the factors are already canonical.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in fs):
            raise IntAlgError(f"invariant factors must be >= 2: {fs}")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise IntAlgError(f"not a divisibility chain: {fs}")
        object.__setattr__(self, "invariant_factors", fs)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "AbelianGroup":
        return cls(tuple(canonical_factors(orders)))

    @classmethod
    def cyclic(cls, m: int) -> "AbelianGroup":
        return cls.from_orders([m])

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return direct_sum(self, other)

    def __mul__(self, k: int) -> "AbelianGroup":
        return direct_sum(*([self] * k))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)

    def to_list(self) -> list[int]:
        return list(self.invariant_factors)


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    return AbelianGroup.from_orders(d for g in groups for d in g.invariant_factors)


def order(A: AbelianGroup) -> int:
    return A.order


def p_sylow(A: AbelianGroup, p: int) -> AbelianGroup:
    if not is_prime(p):
        raise IntAlgError(f"{p} is not prime")
    return AbelianGroup.from_orders(p ** _valuation(d, p) for d in A.invariant_factors)


def _strip(d: int, m: int) -> int:
    g = math.gcd(d, m)
    while g > 1:
        d //= g
        g = math.gcd(d, g)
    return d


def coprime_part(A: AbelianGroup, m: int) -> AbelianGroup:
    """The product of the p-Sylow subgroups of ``A`` over primes ``p`` not dividing ``m``."""
    return AbelianGroup.from_orders(_strip(d, m) for d in A.invariant_factors)


def primary_part(A: AbelianGroup, m: int) -> AbelianGroup:
    """Complement of :func:`coprime_part`: the part at primes dividing ``m``."""
    return AbelianGroup.from_orders(d // _strip(d, m) for d in A.invariant_factors)


def is_isomorphic(A: AbelianGroup, B: AbelianGroup) -> bool:
    return A.invariant_factors == B.invariant_factors


def m_equivalent(A: AbelianGroup, B: AbelianGroup, m: int) -> bool:
    """Equal p-Sylow orders for every p, isomorphic p-Sylows for p not dividing m.

    Equal p-orders for all p is the same as equal orders, so nothing has to
    be factored.
    """
    if m < 1:
        raise IntAlgError("m must be positive")
    return A.order == B.order and coprime_part(A, m) == coprime_part(B, m)


def elementary_divisors(A: AbelianGroup) -> list[int]:
    """Prime-power elementary divisors, sorted. Needs trial-division factoring."""
    out = []
    for d in A.invariant_factors:
        out.extend(p**e for p, e in factorize(d).items())
    return sorted(out)


def from_elementary_divisors(powers: Iterable[int]) -> AbelianGroup:
    return AbelianGroup.from_orders(powers)


def _exponent_profiles(groups: Sequence[AbelianGroup]) -> tuple[list[int], list[dict[int, list[int]]]]:
    base = coprime_base(d for g in groups for d in g.invariant_factors)
    profiles = []
    for g in groups:
        prof = {}
        for q in base:
            es = sorted((_valuation(d, q) for d in g.invariant_factors), reverse=True)
            prof[q] = [e for e in es if e]
        profiles.append(prof)
    return base, profiles


def subtract_summand(A: AbelianGroup, B: AbelianGroup) -> AbelianGroup:
    """Return ``C`` with ``C + B == A``.

    Works on the multiset of (pseudo-)prime-power exponents over a coprime
    base, which coincides with elementary-divisor subtraction.
    """
    base, (pa, pb) = _exponent_profiles([A, B])
    columns: list[list[int]] = []
    for q in base:
        remaining = list(pa[q])
        for e in pb[q]:
            try:
                remaining.remove(e)
            except ValueError:
                raise NotASummandError(f"{B} is not a direct summand of {A}") from None
        columns.append([q**e for e in remaining])
    return AbelianGroup.from_orders(x for col in columns for x in col)


def group_of_matrix(M: Matrix) -> tuple[int, AbelianGroup]:
    """Cokernel of the row lattice of ``M`` inside ``Z^cols``: (free rank, torsion)."""
    ncols = len(M[0]) if M else 0
    inv = snf(M) if M else []
    return ncols - len(inv), AbelianGroup.from_orders(inv)


def lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)
