import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from ribbonpoly.compose import (
    F_MAP,
    G_MAP,
    MonomialMapSpec,
    apply_map,
    brylawski,
    brylawski_br,
    compose_br_general,
    compose_br_planar,
    compose_tutte,
    tensor_z_br,
    tensor_z_tutte,
)
from ribbonpoly.core import MarkedPiece, PieceSlot, TwoDecomposition, assemble, bouquet, cycle_graph, make_graph, single_edge, tensor
from ribbonpoly.core.generate import eta_ddot1_pieces, random_decomposition, random_graph, random_piece
from ribbonpoly.core.io import load_decomposition
from ribbonpoly.errors import ConstructionError, PlanarityError, RibbonPolyError
from ribbonpoly.poly import MultiPoly, RationalFn, parse_poly
from ribbonpoly.statesum import br_polynomial, parallel_piece, path_piece, phi_sums, tutte, z_polynomial

DATA = Path(__file__).resolve().parents[1] / "src" / "ribbonpoly" / "data" / "graphs"
P = parse_poly
a, b = MultiPoly.var("a"), MultiPoly.var("b")
alpha, beta = MultiPoly.var("α"), MultiPoly.var("β")

SMALL_G = {
    "C2": cycle_graph(2),
    "C3": cycle_graph(3),
    "bouquet": bouquet(2),
    "bouquet_interlaced": bouquet(2, interlaced=True),
}


def brute_z(g):
    return z_polynomial(g, "b", False, False)


def path_template():
    t = make_graph({"x": ["f.0"], "y": ["f.1", "g.0"], "z": ["g.1"]}, {"f": ("f.0", "f.1"), "g": ("g.0", "g.1")})
    return TwoDecomposition(t, {"f": PieceSlot(parallel_piece(2)), "g": PieceSlot(path_piece(2))})


# worked values ---------------------------------------------------------------------------


def test_path_template_phi_sums():
    d = path_template()
    s = phi_sums(d.piece("f"))
    assert (s["phi1"], s["phi2"]) == (b ** 2 + 2 * b, P("1"))
    s = phi_sums(d.piece("g"))
    assert (s["phi1"], s["phi2"]) == (b ** 2, a + 2 * b)


def test_path_template_value():
    d = path_template()
    # the uncollected sum ab^4 + 2ab^3 + a^2b^2 + 2a^2b^3 + a^3b^2 + 4a^2b^2 + 2a^3b + 2a^3b + a^4
    want = P("a*b^4 + 2*a*b^3 + a^2*b^2 + 2*a^2*b^3 + a^3*b^2 + 4*a^2*b^2 + 2*a^3*b + 2*a^3*b + a^4")
    assert compose_tutte(d) == want
    assert brute_z(assemble(d)) == want


def test_shipped_path_template_matches_builder():
    d = load_decomposition(DATA / "path_template_decomposition.json")
    assert compose_tutte(d) == compose_tutte(path_template())


@pytest.mark.parametrize("name", sorted(SMALL_G))
def test_tensor_with_triangle_z(name):
    g = SMALL_G[name]
    p = path_piece(2)
    brute = RationalFn(brute_z(tensor(g, p)))
    e = g.num_edges()
    explicit = RationalFn(a + 2 * b) ** e * brute_z(g).subs({"b": RationalFn(b ** 2, a + 2 * b)})
    assert explicit == brute
    assert tensor_z_tutte(g, p) == brute


@pytest.mark.parametrize("name", sorted(SMALL_G))
def test_tensor_with_triangle_br(name):
    g = SMALL_G[name]
    p = path_piece(2)
    res = brylawski_br(g, p)
    assert res.h == RationalFn(alpha + 1)
    assert res.h_prime == RationalFn(1)
    brute = br_polynomial(tensor(g, p))
    assert res.value == brute
    n = g.num_edges() - g.num_vertices() + 1
    explicit = RationalFn(alpha + 1) ** n * br_polynomial(g).subs(
        {"α": RationalFn(alpha ** 2), "β": RationalFn(beta, alpha + 1)})
    assert explicit == RationalFn(brute)


@pytest.mark.parametrize("name", sorted(SMALL_G))
def test_brylawski_tutte_triangle(name):
    g = SMALL_G[name]
    assert brylawski(g, path_piece(2)).value == tutte(tensor(g, path_piece(2)))


def test_tensor_z_br_planar_piece():
    for g in SMALL_G.values():
        p = path_piece(3)
        assert tensor_z_br(g, p) == RationalFn(z_polynomial(tensor(g, p), "b", True, False))


# monomial maps -----------------------------------------------------------------------------


def _one_edge_spec(variant, bar1, ddot1, ddot2):
    return MonomialMapSpec(variant, {"e": {"eta_bar1": bar1, "eta_ddot1": ddot1, "eta_ddot2": ddot2}},
                           {"e": ("f_e", "g_e")})


def test_apply_map_cases():
    f, g, c = MultiPoly.var("f_e"), MultiPoly.var("g_e"), MultiPoly.var("c")
    spec = _one_edge_spec(F_MAP, P("2"), P("3"), P("5"))
    assert apply_map(spec, f * g) == RationalFn(P("3"))
    assert apply_map(spec, g) == RationalFn(P("2"))
    assert apply_map(spec, f) == RationalFn(P("5"))
    spec = _one_edge_spec(G_MAP, P("2"), P("3"), 2 * c)
    assert apply_map(spec, f * c) == RationalFn(P("c"))
    with pytest.raises(RibbonPolyError):
        apply_map(_one_edge_spec("H", P("1"), P("1"), P("1")), f)


# oracle equivalence ------------------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_compose_tutte_random(seed):
    rng = random.Random(seed)
    d = random_decomposition(rng, rng.randint(1, 4), 10)
    assert compose_tutte(d) == brute_z(assemble(d))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_compose_planar_random(seed):
    rng = random.Random(seed)
    d = random_decomposition(rng, rng.randint(1, 3), 9, planar=True)
    assert compose_br_planar(d) == z_polynomial(assemble(d), "b", True, False)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_compose_general_random(seed):
    rng = random.Random(seed)
    d = random_decomposition(rng, rng.randint(1, 3), 9)
    assert compose_br_general(d) == z_polynomial(assemble(d), "b", True, False)


def test_general_with_interlaced_pieces():
    t = bouquet(2, interlaced=True)
    for p in eta_ddot1_pieces()[:4]:
        d = TwoDecomposition.uniform(t, p)
        assert compose_br_general(d) == z_polynomial(assemble(d), "b", True, False)


def test_planar_rejects_positive_genus_piece():
    d = load_decomposition(DATA / "interlaced_piece_decomposition.json")
    with pytest.raises(PlanarityError):
        compose_br_planar(d)
    assert compose_br_general(d) == z_polynomial(assemble(d), "b", True, False)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_brylawski_random_joined(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 3), rng.randint(2, 3))
    p = random_piece(rng, 3, 3, joined=True)
    res = brylawski(g, p)
    assert res.epsilon == 0
    assert res.value == tutte(tensor(g, p))


# bridge pieces -------------------------------------------------------------------------------


def test_bridge_piece_variant_degenerates():
    # u and w in different components of H: e is a bridge of A, h' vanishes
    # and the substituted y-argument is identically 1
    piece = MarkedPiece(make_graph({"u": ["l.0", "l.1"], "w": []}, {"l": ("l.0", "l.1")}), "u", "w", 0, 0)
    g = cycle_graph(3)
    res = brylawski(g, piece)
    assert res.epsilon == 1
    assert res.h_prime == RationalFn(0)
    truth = tutte(piece.graph) ** g.num_edges()
    assert tutte(tensor(g, piece)) == truth
    assert res.value != truth


def test_brylawski_br_requires_planar():
    with pytest.raises(PlanarityError):
        brylawski_br(cycle_graph(2), eta_ddot1_pieces()[0])
