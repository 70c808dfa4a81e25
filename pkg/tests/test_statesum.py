import random

import pytest
from hypothesis import given, settings, strategies as st

from ribbonpoly.compose import F_MAP, apply_map, eta_map_spec
from ribbonpoly.core import MarkedPiece, assemble, bouquet, build_gtilde, cycle_graph, make_graph, single_edge, single_vertex
from ribbonpoly.core.decomposition import TwoDecomposition
from ribbonpoly.core.generate import random_graph, random_piece
from ribbonpoly.errors import BudgetExceededError, PlanarityError
from ribbonpoly.poly import MultiPoly, RationalFn, parse_poly
from ribbonpoly.statesum import (
    _br_direct,
    _br_via_z,
    br_polynomial,
    eta_sums_full,
    eta_sums_planar,
    interlaced_piece,
    parallel_piece,
    path_piece,
    phi_gtilde,
    phi_sums,
    pqr_direct,
    pqr_multivariate,
    solve_eta_planar,
    solve_phi,
    solve_pqr_twisted,
    specialize_b,
    tutte,
    tutte_deletion_contraction,
    tutte_from_br,
    z_multivariate,
    z_polynomial,
)

P = parse_poly
a, b, c = (MultiPoly.var(v) for v in "abc")
ac = a * c


def edge_piece():
    return MarkedPiece(single_edge("s"), "u", "w", 0, 0)


# Z, R, T on small graphs -------------------------------------------------------------------


def test_z_small():
    assert z_multivariate(single_vertex()) == ac
    assert z_multivariate(single_edge()) == P("a^2*c^2 + a*c*x_e")
    assert z_multivariate(bouquet(1, twisted=[0])) == P("a*c + a*c*d*x_e0")


def test_br_small():
    assert br_polynomial(single_vertex()) == P("1")
    assert br_polynomial(bouquet(1)) == P("1 + β")
    assert br_polynomial(bouquet(2, interlaced=True)) == P("β^2*γ^2 + 2*β + 1")
    assert br_polynomial(single_edge()) == P("α")


def test_tutte_triangle():
    want = P("x^2 + x + y")
    assert tutte(cycle_graph(3)) == want
    assert tutte_deletion_contraction(cycle_graph(3)) == want
    assert tutte_from_br(br_polynomial(cycle_graph(3))) == want


def test_budget(monkeypatch):
    g = cycle_graph(5)
    with pytest.raises(BudgetExceededError):
        z_polynomial(g, budget=4)
    monkeypatch.setenv("RIBBONPOLY_BUDGET", "3")
    with pytest.raises(BudgetExceededError):
        br_polynomial(g)


def test_parallel_chunks_agree():
    g = random_graph(random.Random(4), 3, 13, twist_prob=0.3)
    assert z_polynomial(g, workers=2) == z_polynomial(g)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_br_routes_and_tutte(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 4), rng.randint(1, 7), twist_prob=0.4 * rng.random(), connected=False)
    assert _br_direct(g) == _br_via_z(g)
    assert tutte_from_br(br_polynomial(g)) == tutte(g)
    assert tutte_deletion_contraction(g) == tutte(g)


# partition sums ----------------------------------------------------------------------------


def test_phi_sums_named_pieces():
    s = phi_sums(path_piece(2))
    assert (s["phi1"], s["phi2"]) == (b ** 2, a + 2 * b)
    s = phi_sums(parallel_piece(2))
    assert (s["phi1"], s["phi2"]) == (b ** 2 + 2 * b, P("1"))
    s = phi_sums(edge_piece())
    assert (s["phi1"], s["phi2"]) == (b, P("1"))


def test_eta_sums_triangle_piece():
    s = eta_sums_full(path_piece(2))
    assert s["eta_bar1"] == b ** 2
    assert s["eta_ddot1"].is_zero()
    assert s["eta_ddot2"] == ac + 2 * b
    s = eta_sums_planar(path_piece(2))
    assert (s["eta1"], s["eta2"]) == (b ** 2, ac + 2 * b)


def test_interlaced_piece_has_eta_ddot1():
    p = interlaced_piece()
    s = eta_sums_full(p)
    assert s["eta_ddot1"] == b ** 2
    with pytest.raises(PlanarityError):
        eta_sums_planar(p)


def test_phi_gtilde_class_counts():
    for g, n in ((single_edge(), 3), (cycle_graph(2), 9)):
        phi = phi_gtilde(build_gtilde(g))
        ones = {v: 1 for v in phi.variables()}
        assert phi.evaluate(ones) == n


def test_f_map_of_phi_is_z():
    t = make_graph({"x": ["f.0"], "y": ["f.1", "g.0"], "z": ["g.1"]}, {"f": ("f.0", "f.1"), "g": ("g.0", "g.1")})
    d = TwoDecomposition.uniform(t, path_piece(2))
    spec, phi = eta_map_spec(d, F_MAP)
    assert apply_map(spec, phi) == RationalFn(z_polynomial(assemble(d), "b", True, False))


# solved weights ----------------------------------------------------------------------------


def test_solve_phi():
    s = solve_phi(path_piece(2))
    assert (s["f"], s["g"]) == (RationalFn(b ** 2), RationalFn(a + 2 * b))
    s = solve_phi(edge_piece())
    assert (s["f"], s["g"]) == (RationalFn(b), RationalFn(1))
    s = solve_phi(parallel_piece(2))
    assert (s["f"], s["g"]) == (RationalFn(b ** 2 + 2 * b), RationalFn(1))


def test_solve_eta_planar_specializes_to_phi():
    for p in (path_piece(2), edge_piece(), parallel_piece(3)):
        eta = solve_eta_planar(p)
        phi = solve_phi(p)
        for key in ("f", "g"):
            assert eta[key].subs({"c": 1}) == RationalFn(a) * phi[key]


def test_pqr_direct_triangle_piece():
    p, q, r = pqr_direct(path_piece(2))
    assert p == ac * b ** 2
    assert q == ac * (ac + 2 * b)
    assert r.is_zero()


def test_twisted_system_on_interlaced_piece():
    res = solve_pqr_twisted(interlaced_piece())
    assert not res.r.is_zero()
    assert res.corrected["row_holds"] and res.corrected["matches_direct"]
    assert not res.printed["row_holds"]


def test_pqr_multivariate_triangle_piece():
    p, q, r = pqr_multivariate(path_piece(2))
    x0, x1 = MultiPoly.var("x_p0"), MultiPoly.var("x_p1")
    assert p == ac * x0 * x1
    assert q == ac * (ac + x0 + x1)
    assert r.is_zero()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pqr_multivariate_specializes(seed):
    rng = random.Random(seed)
    piece = random_piece(rng, 3, 6)
    labels = piece.graph.labels()
    got = tuple(specialize_b(x, labels) for x in pqr_multivariate(piece))
    assert got == pqr_direct(piece)
