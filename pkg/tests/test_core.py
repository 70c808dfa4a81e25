import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ribbonpoly.core import (
    ENDS_SWAP,
    BAR1,
    DDOT1,
    DDOT2,
    Edge,
    MarkedPiece,
    RibbonGraph,
    SpanningState,
    TwoDecomposition,
    assemble,
    boundary_components,
    build_gtilde,
    close_piece,
    contract_nonloop,
    cycle_graph,
    bouquet,
    delete,
    flip_vertex,
    genus,
    insert_edge,
    make_graph,
    mark_relation,
    single_edge,
    single_vertex,
    split_state,
    tensor,
    two_sum,
    untwist,
    validate,
)
from ribbonpoly.core.generate import all_small_graphs, random_decomposition, random_graph, random_piece
from ribbonpoly.core.io import decomposition_from_dict, graph_from_dict, graph_to_dict, piece_from_dict, piece_to_dict
from ribbonpoly.core.states import StateEngine, engine
from ribbonpoly.errors import (
    GraphFormatError,
    InvalidArcError,
    LoopContractionError,
    OrientabilityError,
    UnknownIdError,
)
from ribbonpoly.statesum import br_polynomial, path_piece, z_polynomial


def full(g):
    return SpanningState.full(g)


# validation -------------------------------------------------------------------------


def test_validate_clean_and_broken():
    assert validate(single_vertex()) == []
    dup = RibbonGraph([("u", ["h1", "h2"]), ("w", ["h1"])], [Edge("e", ("h1", "h2"))])
    problems = validate(dup)
    assert len(problems) == 1 and "h1" in problems[0]
    ghost = RibbonGraph([("u", ["h1"])], [Edge("e", ("h1", "h9"))])
    assert len(validate(ghost)) == 1


def test_unknown_ids():
    g = single_edge()
    with pytest.raises(UnknownIdError):
        g.edge("nope")
    with pytest.raises(UnknownIdError):
        flip_vertex(g, "nope")


# boundary walks and counts -------------------------------------------------------------


def test_boundary_counts():
    assert full(single_vertex()).boundary == 1
    assert full(bouquet(1)).boundary == 2
    assert full(bouquet(1, twisted=[0])).boundary == 1
    assert full(bouquet(2, interlaced=True)).boundary == 1


def test_state_counts():
    c3 = cycle_graph(3)
    s = SpanningState.empty(c3)
    assert (s.k, s.r, s.n, s.t) == (3, 0, 0, 0)
    s = full(c3)
    assert (s.k, s.r, s.n) == (1, 2, 1)
    assert full(bouquet(1, twisted=[0])).t == 1


def test_genus():
    assert genus(cycle_graph(4)) == 0
    assert genus(bouquet(2, interlaced=True)) == 1
    with pytest.raises(OrientabilityError):
        genus(bouquet(1, twisted=[0]))


def test_boundary_walk_labels_cover_gaps():
    g = bouquet(2, interlaced=True)
    count, walks = boundary_components(full(g))
    assert count == 1
    assert set(walks) == {("v", i) for i in range(4)}


# contraction, deletion, insertion --------------------------------------------------------


def test_contract_single_edge():
    g = contract_nonloop(single_edge(), "e")
    assert g.num_vertices() == 1 and g.num_edges() == 0


def test_contract_triangle_gives_digon():
    g = contract_nonloop(cycle_graph(3), "e0")
    assert g.num_vertices() == 2 and g.num_edges() == 2
    assert full(g).boundary == 2


def test_contract_twisted_edge_matches_states_with_e():
    g = make_graph({"u": ["e.0", "a.0", "a.1"], "w": ["e.1", "b.0", "b.1"]},
                   {"e": ("e.0", "e.1"), "a": ("a.0", "a.1"), "b": ("b.0", "b.1")}, twisted={"e"})
    h = contract_nonloop(g, "e")
    assert h.num_vertices() == 1
    z = z_polynomial(g)
    with_e = z.coefficient("x_e", 1)
    assert z_polynomial(h) == with_e


def test_loop_contraction_rejected():
    with pytest.raises(LoopContractionError):
        contract_nonloop(bouquet(1), "e0")


def test_insert_edge_rebuilds():
    g = RibbonGraph([("u", ()), ("w", ())])
    g = insert_edge(g, ("u", 0), ("w", 0), eid="e")
    assert g.num_edges() == 1 and validate(g) == []
    assert z_polynomial(g) == z_polynomial(single_edge())
    with pytest.raises(InvalidArcError):
        insert_edge(g, ("u", 5), ("w", 0))


def test_close_piece():
    p = path_piece(2)
    a, _ = close_piece(p)
    assert br_polynomial(a) == br_polynomial(cycle_graph(3))
    tw, _ = close_piece(p, twisted=True)
    assert full(tw).t == 1


def test_flip_and_untwist():
    g = cycle_graph(3)
    h = flip_vertex(g, "v0")
    assert sum(e.twisted for e in h.edges) == 2
    assert untwist(h).is_untwisted()
    assert z_polynomial(untwist(h)) == z_polynomial(g)
    with pytest.raises(OrientabilityError):
        untwist(bouquet(1, twisted=[0]))


# 2-sums and assembly ---------------------------------------------------------------------


def test_two_sum_digon_with_triangle_piece():
    g = two_sum(cycle_graph(2), "e0", path_piece(2))
    # one digon edge survives, the piece adds two: a triangle
    assert g.num_vertices() == 3 and g.num_edges() == 3
    assert validate(g) == []
    assert z_polynomial(g, "b") == z_polynomial(cycle_graph(3), "b")


def test_two_sum_on_loop():
    # both ends of the path land on the loop's vertex: a digon
    g = two_sum(bouquet(1), "e0", path_piece(2))
    assert validate(g) == []
    assert g.num_vertices() == 2 and g.num_edges() == 2
    assert z_polynomial(g, "b") == z_polynomial(cycle_graph(2), "b")


def test_two_sum_flip_keeps_r():
    rng = random.Random(3)
    for _ in range(10):
        g = random_graph(rng, 2, 3)
        p = random_piece(rng, 3, 3)
        vals = {br_polynomial(two_sum(g, "e0", p, ends, flip))
                for ends in ("default", "swap") for flip in (False, True)}
        assert len(vals) == 1


def test_assemble_empty_template():
    t = single_vertex()
    assert assemble(TwoDecomposition(t, {})) == t


def test_tensor_triangle():
    g = tensor(cycle_graph(3), path_piece(2))
    assert g.num_vertices() == 6 and g.num_edges() == 6
    assert "x_e0_1" in g.labels()


def test_tensor_identity_piece():
    p = MarkedPiece(single_edge("s"), "u", "w", 0, 0)
    g = bouquet(2, interlaced=True)
    assert br_polynomial(tensor(g, p, relabel=False)) == br_polynomial(g)


def test_gtilde_single_edge():
    gt = build_gtilde(single_edge())
    g = gt.graph
    assert g.num_vertices() == 2 and g.num_edges() == 2
    assert sum(g.is_loop(e) for e in g.edge_ids) == 1


def test_split_state_extremes():
    rng = random.Random(5)
    d = random_decomposition(rng, 3, 9)
    hat = assemble(d)
    s = split_state(d, hat.edge_ids)
    joined = {e for e in d.template.edge_ids
              if mark_relation(d.piece(e).graph, engine(d.piece(e).graph).full_mask, d.piece(e).m, d.piece(e).n)[0]}
    assert s.template_state == frozenset(joined)
    assert {s.tags[e] for e in joined} <= {BAR1, DDOT1}
    s = split_state(d, [])
    assert s.template_state == frozenset()
    assert set(s.tags.values()) == {DDOT2}


# component and boundary counts for decompositions ------------------------------------------


def _k_and_boundary_counts(d):
    hat = assemble(d)
    eng = engine(hat)
    teng = engine(d.template)
    planar = all(full(close_piece(d.piece(e))[0]).euler_genus() == 0 for e in d.template.edge_ids)
    for mask in eng.all_masks():
        sp = split_state(d, eng.edges_of(mask))
        tmask = teng.mask_of(sp.template_state)
        k_sum = teng.k(tmask)
        bd_sum = teng.boundary(tmask)[0]
        for e in d.template.edge_ids:
            p = d.piece(e)
            pe = engine(p.graph)
            pm = pe.mask_of(sp.piece_states[e])
            k_sum += pe.k(pm) - (1 if sp.tags[e] != DDOT2 else 2)
            bd = pe.boundary(pm)[0]
            bd_sum += bd - (1 if sp.tags[e] == BAR1 else 2)
        assert eng.k(mask) == k_sum
        if planar:
            assert eng.boundary(mask)[0] == bd_sum


def test_component_and_boundary_counts_random():
    rng = random.Random(11)
    for i in range(25):
        _k_and_boundary_counts(random_decomposition(rng, rng.randint(1, 3), 9, planar=(i % 2 == 0)))


# exhaustive bijections -----------------------------------------------------------------------


def _contraction_bijection(g):
    eng = StateEngine(g)
    for j, e in enumerate(g.edges):
        if g.is_loop(e.id):
            continue
        h = contract_nonloop(g, e.id)
        he = StateEngine(h)
        idx = [eng.eindex[x.id] for x in h.edges]
        for m in he.all_masks():
            big = 1 << j
            for i, t in enumerate(idx):
                if m >> i & 1:
                    big |= 1 << t
            assert (he.k(m), he.boundary(m)[0], he.t(m)) == (eng.k(big), eng.boundary(big)[0], eng.t(big))
        gd = delete(g, e.id)
        assert 2 ** gd.num_edges() * 2 == 2 ** g.num_edges()


def test_contraction_bijection_untwisted_four_edges():
    for g in all_small_graphs(4, 3, twisted=False):
        _contraction_bijection(g)


def test_contraction_bijection_twisted_three_edges():
    for g in all_small_graphs(3, 3, twisted=True):
        _contraction_bijection(g)


# io ----------------------------------------------------------------------------------------------


def test_json_round_trip(tmp_path):
    rng = random.Random(2)
    g = random_graph(rng, 3, 4, twist_prob=0.5)
    assert graph_from_dict(json.loads(json.dumps(graph_to_dict(g)))) == g
    p = random_piece(rng)
    assert piece_from_dict(piece_to_dict(p)) == p


def test_bad_json():
    with pytest.raises(GraphFormatError):
        graph_from_dict({"edges": []})
    with pytest.raises(GraphFormatError):
        decomposition_from_dict({"template": 3, "pieces": {}})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_graphs_validate(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 4), rng.randint(3, 6), twist_prob=0.3)
    assert validate(g) == []
    s = full(g)
    assert s.k == 1
    assert s.boundary >= 1
    # Euler characteristic of the closed surface is at most 2
    assert s.euler_genus() >= 0
