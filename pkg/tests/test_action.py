from __future__ import annotations

import pytest

from corpus import harmonic_corpus
from critgroup.action import (
    PARITY_EVEN_KEVEN,
    PARITY_ODD,
    ActionError,
    GeneratorPerm,
    GroupElement,
    classify_orbits,
    compose,
    derive_edge_perm,
    identity_perm,
    inverse,
    is_harmonic,
    perm_from_cycles,
    perm_from_mapping,
    perm_order,
    perm_to_cycles,
    validate_action,
)
from critgroup.graph import build_graph
from critgroup.instances import GALLERY, fig1_d3, fig1_d4, gallery, k44, octahedron, wheel

GALLERY_CASES = [(name, None) for name in sorted(GALLERY) if name not in ("wheel", "squareweb")] + [
    ("wheel", 2),
    ("wheel", 3),
    ("wheel", 4),
    ("squareweb", 2),
]


def _labels(G, seq):
    return [G.labels[v] for v in seq]


def _check_identities(orbit, s1, s2):
    m = orbit.m

    def at(seq, i):
        return seq[(i - 1) % m]

    for i in range(1, m + 1):
        if orbit.orbit_type == "I":
            z = orbit.labeling[0]
            assert s1[at(z, i)] == at(z, m + 1 - i)
            assert s2[at(z, i)] == at(z, m + 2 - i)
        elif orbit.orbit_type == "II":
            w = orbit.labeling[0]
            assert s1[at(w, i)] == at(w, m - i)
            assert s2[at(w, i)] == at(w, m + 1 - i)
        else:
            x, y = orbit.labeling
            assert s1[at(x, i)] == at(y, m + 1 - i)
            assert s2[at(x, i)] == at(y, m + 2 - i)


def test_compose_applies_right_factor_first():
    p, q = (1, 2, 0), (0, 2, 1)
    assert compose(p, q) == (1, 0, 2)
    assert compose(p, inverse(p)) == identity_perm(3)
    assert perm_order((1, 2, 0, 4, 3)) == 6


def test_validate_k44():
    G, a = k44()
    assert a.n == 4 and len(a.elements) == 8
    # tau = sigma1 sigma2 is a 4-cycle on the z's and swaps w1, w2
    assert perm_to_cycles(G, a.tau.vertex_perm) == "(z1 z4 z3 z2)(w1 w2)"
    assert perm_order(a.tau.vertex_perm) == 4
    # the reverse product is the inverse rotation, also of order 4
    assert perm_to_cycles(G, compose(a.sigma2.vertex_perm, a.sigma1.vertex_perm)) == "(z1 z2 z3 z4)(w1 w2)"
    assert len({g.vertex_perm for g in a.elements}) == 8


def test_validate_rejects_degenerate_n1():
    G, _ = k44()
    ident = identity_perm(G.num_vertices)
    with pytest.raises(ActionError, match="degenerate"):
        validate_action(G, ident, ident, 1)
    a = validate_action(G, ident, ident, 1, allow_degenerate=True)
    assert a.n == 1


def test_validate_rejects_non_involution():
    G = build_graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    rot = perm_from_cycles(G, "(a b c)")
    with pytest.raises(ActionError, match="involution"):
        validate_action(G, rot, identity_perm(3), 3)


def test_validate_rejects_wrong_order():
    G, a = k44()
    with pytest.raises(ActionError, match="order"):
        validate_action(G, a.sigma1, a.sigma2, 2)


def test_validate_rejects_unfaithful():
    # sigma1 = tau, so the 4 group elements collapse to 2 permutations
    G = build_graph(["a", "b"], [("a", "b")])
    with pytest.raises(ActionError, match="faithful"):
        validate_action(G, perm_from_cycles(G, "(a b)"), identity_perm(2), 2)


def test_derive_edge_perm_k44():
    G, a = k44()
    ep = derive_edge_perm(G, a.sigma1.vertex_perm)
    assert sorted(ep) == list(range(16))
    vp = a.sigma1.vertex_perm
    for e, (u, v) in enumerate(G.edges):
        assert {vp[u], vp[v]} == set(G.edges[ep[e]])


def test_derive_edge_perm_identity():
    G, _ = k44()
    assert derive_edge_perm(G, identity_perm(8)) == identity_perm(16)


def test_derive_edge_perm_four_cycle_rotation():
    G = build_graph("abcd", ["ab", "bc", "cd", "da"])
    ep = derive_edge_perm(G, perm_from_cycles(G, "(a b c d)"))
    assert ep == (1, 2, 3, 0)


def test_derive_edge_perm_errors():
    G = build_graph(["u", "v"], [("u", "v"), ("u", "v")])
    with pytest.raises(ActionError, match="parallel"):
        derive_edge_perm(G, (1, 0))
    P = build_graph("abc", ["ab", "bc"])
    with pytest.raises(ActionError):
        derive_edge_perm(P, perm_from_cycles(P, "(a b)"))


def test_harmonic_k44_and_octahedron():
    for G, a in (k44(), octahedron()):
        assert is_harmonic(G, a) == (True, None)


def test_harmonic_witness_on_path():
    G = build_graph("uvw", ["uv", "vw"])
    s = GroupElement("s", identity_perm(3), identity_perm(2), 0, True)
    ok, witness = is_harmonic(G, [s])
    assert not ok and witness == ("s", 0)


@pytest.mark.parametrize("name, n", GALLERY_CASES)
def test_harmonic_generator_order_independent(name, n):
    G, a = gallery(name, n)
    assert is_harmonic(G, a).ok == is_harmonic(G, a.swap()).ok


def test_classify_k44():
    G, a = k44()
    s = classify_orbits(G, a)
    got = [(o.orbit_type, o.index, sorted(_labels(G, o.vertices))) for o in s.orbits]
    assert got == [
        ("I", 1, ["z1", "z2", "z3", "z4"]),
        ("II", 2, ["w1", "w2"]),
        ("III", 4, ["x", "y"]),
    ]
    assert (s.t1, s.t2, s.t3, s.kappa, s.t_tilde) == (1, 1, 1, 4, 0)
    assert s.parity == PARITY_EVEN_KEVEN and not s.swapped and not s.tilde_ambiguous


def test_classify_odd_n_has_no_type_two():
    for G, a in (fig1_d3(), gallery("k23-d3")):
        s = classify_orbits(G, a)
        assert s.t2 == 0 and s.parity == PARITY_ODD and s.t_tilde == 0


def test_classify_wheel_w8():
    # 2n = 8 rim vertices form a single Type III orbit of index 2n/8 = 1
    G, a = wheel(4)
    s = classify_orbits(G, a)
    got = [(o.orbit_type, o.index, o.size) for o in s.orbits]
    assert got == [("I", 4, 1), ("III", 1, 8)]
    assert s.kappa == 4


def test_classify_swaps_generators_when_only_type_two():
    # on a 4-cycle, sigma2 fixes nothing and sigma1 fixes p and r
    G = build_graph("pqrs", ["pq", "qr", "rs", "sp"])
    a = validate_action(G, perm_from_cycles(G, "(q s)"), perm_from_cycles(G, "(p q)(r s)"), 4)
    s = classify_orbits(G, a)
    assert s.swapped and s.action.swapped
    assert [(o.orbit_type, o.index) for o in s.orbits] == [("I", 1)]
    assert s.action.sigma1.vertex_perm == a.sigma2.vertex_perm
    assert s.tilde_ambiguous


def test_canonical_labeling_k44():
    G, a = k44()
    s = classify_orbits(G, a)
    z = s.orbits[0]
    assert _labels(G, z.labeling[0]) == ["z1", "z2", "z3", "z4"]
    assert a.sigma2.vertex_perm[z.labeling[0][0]] == z.labeling[0][0]
    _check_identities(z, a.sigma1.vertex_perm, a.sigma2.vertex_perm)


def test_canonical_labeling_fixed_point():
    G, a = wheel(4)
    hub = classify_orbits(G, a).orbits[0]
    assert hub.labeling == ((0,),) and hub.m == 1


def test_canonical_labeling_fig1_d3():
    G, a = fig1_d3()
    s = classify_orbits(G, a)
    x, y = s.orbits[1].labeling
    assert _labels(G, x) == ["x1", "x2", "x3"]
    assert _labels(G, y) == ["y1", "y2", "y3"]


def test_fig1_orbit_counts():
    assert [o.index for o in classify_orbits(*fig1_d3()).orbits] == [1, 1]
    s = classify_orbits(*fig1_d4())
    assert [(o.orbit_type, o.index) for o in s.orbits] == [("I", 1), ("II", 1), ("III", 1)]


@pytest.mark.parametrize("name, n", GALLERY_CASES)
def test_gallery_orbit_invariants(name, n):
    G, a = gallery(name, n)
    _check_summary(G, a)


def test_random_orbit_invariants():
    for _, _, G, a in harmonic_corpus(60, 1000):
        _check_summary(G, a)


def _check_summary(G, a):
    s = classify_orbits(G, a)
    act = s.action
    n = act.n
    s1, s2 = act.sigma1.vertex_perm, act.sigma2.vertex_perm
    tau = act.tau.vertex_perm
    assert s.t1 + s.t2 + s.t3 == len(s.orbits)
    assert n % s.kappa == 0
    assert sorted(v for o in s.orbits for v in o.vertices) == list(range(G.num_vertices))
    for o in s.orbits:
        if o.inertial:
            assert o.size * o.index == n
            assert {tau[v] for v in o.vertices} == set(o.vertices)
            start = o.vertices[0]
            reach, v = {start}, tau[start]
            while v != start:
                reach.add(v)
                v = tau[v]
            assert reach == set(o.vertices)
        else:
            assert o.size * o.index == 2 * n
            for half in o.labeling:
                assert {tau[v] for v in half} == set(half)
        if n % 2 == 0 and (n // o.index) % 2:
            assert o.orbit_type != "II"
        _check_identities(o, s1, s2)


def test_cycle_parsing_round_trip():
    G, a = k44()
    p = perm_from_cycles(G, "(z1 z4)(z2 z3)(x y)")
    assert p == a.sigma1.vertex_perm
    assert perm_from_cycles(G, perm_to_cycles(G, p)) == p
    assert perm_to_cycles(G, identity_perm(8)) == "()"
    assert perm_from_mapping(G, {"z2": "z4", "z4": "z2", "w1": "w2", "w2": "w1", "x": "y", "y": "x"}) == (
        a.sigma2.vertex_perm
    )


@pytest.mark.parametrize("text", ["(z1 z4", "(z1 q)", "(z1 z2)(z2 z3)", "z1 z2"])
def test_cycle_parsing_errors(text):
    G, _ = k44()
    with pytest.raises((ActionError, ValueError)):
        perm_from_cycles(G, text)


def test_mapping_must_be_bijective():
    G, _ = k44()
    with pytest.raises(ActionError):
        perm_from_mapping(G, {"z1": "z2"})


def test_explicit_edge_perms_for_multigraph():
    # digon u = v doubled, sigma1 swaps the endpoints and fixes both edges
    G = build_graph(["u", "v"], [("u", "v"), ("u", "v")])
    s1 = GeneratorPerm((1, 0), (0, 1))
    s2 = GeneratorPerm((1, 0), (1, 0))
    a = validate_action(G, s1, s2, 2)
    assert is_harmonic(G, a).ok
