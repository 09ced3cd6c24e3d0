"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
"acceptance criteria" section of the terminal summary.
"""

from __future__ import annotations

import functools
import json
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field

import pytest

from corpus import brute_force_tree_count, harmonic_corpus, random_lattice_vector, small_connected_graphs
from critgroup.cli import run
from critgroup.decomp import FAIL, PASS, Decomposition, all_checks, dp_group, exact_sequence_checks, k_group
from critgroup.decomp import fast_jacobian_coprime_part, main_sides, main_record, verify_klein, verify_main
from critgroup.graph import build_graph, jacobian
from critgroup.instances import gallery, k44, octahedron, wheel
from critgroup.intalg import AbelianGroup, coprime_part, is_isomorphic, m_equivalent, smith_via_minors, snf
from critgroup.lattices import (
    F_orbit,
    F_total,
    finite_quotient,
    in_P12_criterion,
    in_P_criterion,
    lattice_intersection,
    lattice_sum,
    split_P,
    split_P12,
)

G_ = AbelianGroup.from_orders


def fib(k: int) -> int:
    a, b = 1, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def recurrence(first: int, second: int, c: int, k: int) -> int:
    a, b = first, second
    for _ in range(k):
        a, b = b, c * b - a
    return a


def test_criterion_01_jacobian_k44(criterion):
    J = jacobian(k44()[0])
    ok = J == G_([4, 4, 4, 4, 16])
    criterion(1, ok, f"Jac(K4,4) = {J}")
    assert ok


def test_criterion_02_k44_quotients(criterion):
    ctx = Decomposition(*k44())
    H = ctx.jac_H
    hat = ctx.phi[0].target
    tree = hat.num_edges == hat.num_vertices - 1
    ok = H[1] == H[2] == G_([4, 8]) and H[3] == G_([2]) and H[0] == G_([]) and tree
    criterion(2, ok, f"H1 {H[1]}, H2 {H[2]}, H3 {H[3]}, G^ tree: {tree}")
    assert ok


def test_criterion_03_k44_dp_and_orders(criterion):
    ctx = Decomposition(*k44())
    formula, lattice = dp_group(ctx.G, ctx)
    same_L = ctx.L == ctx.Lprime
    pl = finite_quotient(ctx.Lprime, ctx.P).order
    # second exact sequence: |(P∩L)/L'|·|Jac| = |P/L'|·|D/(P+L)|
    a = finite_quotient(ctx.Lprime, lattice_intersection(ctx.P, ctx.L)).order
    d = finite_quotient(lattice_sum(ctx.P, ctx.L), ctx.D).order
    jac_order = pl * d // a
    seq_ok = all(r.verdict == PASS for r in exact_sequence_checks(ctx.G, ctx))
    ok = formula == lattice == G_([4, 2]) and same_L and pl == 2**9 and jac_order == 2**12 and seq_ok
    criterion(3, ok, f"D/P formula {formula}, lattice {lattice}; L = L': {same_L}; |P/L'| = {pl}; |Jac| = {jac_order}")
    assert ok


def test_criterion_04_k44_K(criterion):
    ctx = Decomposition(*k44())
    K, order_ok = k_group(ctx.G, ctx)
    pl = finite_quotient(ctx.Lprime, ctx.P).order
    prod = math.prod(ctx.jac_H[i].order for i in (1, 2, 3))
    ok = K == G_([2, 2]) and order_ok and K.order * pl == prod
    criterion(4, ok, f"K = {K}; |K|·|P/L'| = {K.order * pl} vs prod |Jac(H_i)| = {prod}")
    assert ok


def test_criterion_05_main_theorem_k44(criterion):
    m = verify_main(*k44()).main
    odd_free = all(x & (x - 1) == 0 for x in (m.lhs.order, m.rhs.order))
    ok = m.verdict == PASS and m.lhs.order == m.rhs.order == 2**13 and odd_free
    criterion(5, ok, f"|LHS| = {m.lhs.order}, |RHS| = {m.rhs.order}, odd primes: {not odd_free}")
    assert ok


def test_criterion_06_octahedron(criterion):
    ctx = Decomposition(*octahedron())
    J, H = ctx.jac_G, ctx.jac_H
    klein = verify_klein(ctx.G, ctx)
    ok = (
        is_isomorphic(J, G_([3, 2, 8, 8]))
        and H[1] == H[2] == G_([8])
        and H[3] == G_([12])
        and klein.verdict == PASS
        and klein.formula_value == 8 - 2 - 0 + 1
    )
    criterion(6, ok, f"Jac {J}; H {H[1]}, {H[2]}, {H[3]}; Klein exponent {klein.formula_value} vs {klein.lattice_value}")
    assert ok


def _wheel_row(n: int):
    G, a = wheel(n)
    ctx = Decomposition(G, a)
    main_ok = verify_main(G, ctx).main.verdict == PASS
    fast = fast_jacobian_coprime_part(G, ctx)
    direct = coprime_part(jacobian(G), 2 * n)
    return ctx.jac_H, main_ok, fast == direct, fast


def test_criterion_07_wheels(criterion):
    H8, main8, fast8, g8 = _wheel_row(4)
    H12, main12, fast12, g12 = _wheel_row(6)
    ok8 = H8[1] == H8[2] == G_([fib(7)]) == G_([21]) and H8[3] == G_([5]) and main8 and fast8
    ok12 = H12[1] == H12[2] == G_([fib(11)]) and main12 and fast12
    h3_flag = "Z/5 claim holds" if H12[3] == G_([5]) else f"Z/5 claim FAILS: {H12[3]}"
    ok = ok8 and ok12
    criterion(
        7,
        ok,
        f"W8: H1 {H8[1]}, H3 {H8[3]}, odd part {g8}; W12: H1 {H12[1]}, odd part {g12}, H3 {h3_flag}",
    )
    assert ok


def test_criterion_08_square_webs(criterion):
    a_seq = [recurrence(1, 3, 4, k) for k in range(5)]
    b_seq = [recurrence(1, 5, 6, k) for k in range(5)]
    ok = a_seq[:4] == [1, 3, 11, 41] and b_seq[:4] == [1, 5, 29, 169]
    found = []
    for n in (2, 3):
        ctx = Decomposition(*gallery("squareweb", n))
        a, b = a_seq[n], b_seq[n]
        ok &= ctx.jac_G == G_([a, a, b]) and ctx.jac_H[1] == G_([a]) and ctx.jac_H[3] == G_([b])
        found.append(f"SW{n}: {ctx.jac_G}")
    criterion(8, ok, f"a = {a_seq}, b = {b_seq}; " + "; ".join(found))
    assert ok


def test_criterion_09_k23(criterion):
    ctx = Decomposition(*gallery("k23-d3"))
    lhs, rhs = main_sides(ctx)
    ok = ctx.jac_G == G_([2, 6]) and m_equivalent(lhs, rhs, 6) and is_isomorphic(lhs, rhs)
    ok &= main_record(lhs, rhs, 6).verdict == PASS
    criterion(9, ok, f"Jac {ctx.jac_G}; LHS {lhs}, RHS {rhs}")
    assert ok


# -- criterion 10 --------------------------------------------------------------------------


@dataclass
class Sweep:
    instances: int = 0
    ns: Counter = field(default_factory=Counter)
    max_vertices: int = 0
    seconds: float = 0.0
    verdicts: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)
    published_mismatch: list = field(default_factory=list)


def _probe(rng, ctx, lattice):
    p = list(random_lattice_vector(rng, lattice))
    if rng.random() < 0.5:
        u, v = rng.sample(range(ctx.dim), 2)
        c = rng.randint(1, 3)
        p[u] += c
        p[v] -= c
    return tuple(p)


def _add(*vs):
    return tuple(map(sum, zip(*vs)))


def _check_instance(rng, seed, ctx, out: Sweep, probes: int = 6) -> None:
    s = ctx.summary
    n, kappa = ctx.n, s.kappa

    def fail(what):
        out.failures.append((seed, what))

    for r in all_checks(ctx):
        out.verdicts[r.verdict] += 1
        if r.verdict == FAIL:
            fail(r.name)
    lhs, rhs = main_sides(ctx)
    if main_record(lhs, rhs, 2 * n).verdict != PASS:
        fail("main theorem")
    for _ in range(probes):
        d = _probe(rng, ctx, ctx.P12)
        if in_P12_criterion(ctx, d) != (d in ctx.P12):
            fail("P1+P2 criterion")
        d = _probe(rng, ctx, ctx.P)
        actual = d in ctx.P
        if in_P_criterion(ctx, d, refined=True) != actual:
            fail("P criterion [refined]")
        if in_P_criterion(ctx, d) != actual:
            out.published_mismatch.append((seed, n, s.t1, s.t2, actual))
    for i in (1, 2):
        d = random_lattice_vector(rng, ctx.Pi(i))
        if F_total(d, s) % (2 * n // kappa):
            fail(f"F divisibility on P{i}")
    d = random_lattice_vector(rng, ctx.Pi(3))
    for o in s.orbits:
        k, m = o.index, n // o.index
        if o.orbit_type == "III":
            expected = n * (d[o.labeling[0][0]] // k + d[o.labeling[1][0]] // k) * (m + 1)
        else:
            expected = n * (d[o.vertices[0]] // k) * (m + (1 if o.orbit_type == "I" else 2))
        if F_orbit(d, o) != expected:
            fail("F closed form on P3")
    d = _add(random_lattice_vector(rng, ctx.Pi(1)), random_lattice_vector(rng, ctx.Pi(2)))
    d1, d2 = split_P12(ctx, d)
    if not (d1 in ctx.Pi(1) and d2 in ctx.Pi(2) and _add(d1, d2) == d):
        fail("split P1+P2")
    d = _add(d, random_lattice_vector(rng, ctx.Pi(3)))
    d12, d3 = split_P(ctx, d)
    if not (d12 in ctx.P12 and d3 in ctx.Pi(3) and _add(d12, d3) == d):
        fail("split P")


@functools.lru_cache(maxsize=None)
def property_sweep(count: int = 200, start: int = 10_000) -> Sweep:
    out = Sweep()
    rng = random.Random(start)
    t0 = time.perf_counter()
    for seed, (n, _), G, a in harmonic_corpus(count, start, max_vertices=60):
        out.instances += 1
        out.ns[n] += 1
        out.max_vertices = max(out.max_vertices, G.num_vertices)
        _check_instance(rng, seed, Decomposition(G, a), out)
    out.seconds = time.perf_counter() - t0
    return out


def test_criterion_10_property_suite(criterion):
    sw = property_sweep()
    ok = not sw.failures and not sw.published_mismatch
    detail = (
        f"{sw.instances} instances, n in {sorted(sw.ns)}, <= {sw.max_vertices} vertices, {sw.seconds:.1f}s; "
        f"records {dict(sw.verdicts)}; other failures {len(sw.failures)}; "
        f"published P criterion wrong on {len(sw.published_mismatch)} probes "
        f"({len({m[0] for m in sw.published_mismatch})} instances, all with n even and t2 = 0)"
    )
    criterion(10, ok, detail)
    # What does hold: every check other than the published P criterion, within budget.
    assert sw.instances >= 200 and set(sw.ns) <= set(range(2, 9)) and sw.max_vertices <= 60
    assert sw.seconds < 300
    assert not sw.failures, sw.failures[:5]
    assert all(n % 2 == 0 and t2 == 0 and not actual for _, n, _, t2, actual in sw.published_mismatch)


@pytest.mark.xfail(
    strict=True,
    reason="the published P criterion accepts non-members when n is even and there is no Type II orbit",
)
def test_criterion_10_published_P_criterion():
    assert not property_sweep().published_mismatch


# -- criteria 11 and 12 ------------------------------------------------------------------


def test_criterion_11_snf_and_matrix_tree(criterion):
    rng = random.Random(2024)
    bad = 0
    for _ in range(1000):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        bad += snf(M) != smith_via_minors(M)
    graphs = 0
    tree_bad = 0
    for n, edges in small_connected_graphs(6):
        graphs += 1
        tree_bad += jacobian(build_graph(list(range(n)), edges)).order != brute_force_tree_count(n, edges)
    single = jacobian(build_graph(["v"], [])).order == 1
    ok = bad == 0 and tree_bad == 0 and graphs == 142 and single
    criterion(11, ok, f"SNF vs minors: {1000 - bad}/1000; |Jac| = trees on {graphs - tree_bad}/{graphs} graphs + K1")
    assert ok


def test_criterion_12_benchmark(criterion, capsys):
    code = run(["--json", "bench", "wheel", "4..12"])
    rows = json.loads(capsys.readouterr().out)
    ok = code == 0 and [r["n"] for r in rows] == list(range(4, 13)) and all(r["agree"] for r in rows)
    ratios = ", ".join(f"n={r['n']}: {r['ratio']:.2f}" for r in rows)
    criterion(12, ok, f"direct/decomposed ratios {ratios}")
    assert ok
