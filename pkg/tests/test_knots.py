import time

import pytest
from hypothesis import given, settings, strategies as st

from ribbonpoly.core import SpanningState
from ribbonpoly.errors import BudgetExceededError, PDParseError
from ribbonpoly.knots import (
    A,
    LOOP,
    OrientationError,
    add_kink,
    all_a_state,
    bracket_oracle,
    braid_closure,
    components,
    corpus,
    corpus_jones,
    crossing_signs,
    format_t,
    jones,
    jones_literal,
    kauffman_bracket,
    mirror,
    num_components,
    parse_pd,
    parse_t,
    ribbon_of_diagram,
    writhe,
)
from ribbonpoly.poly import ONE, MultiPoly

CORPUS = corpus()
JONES = corpus_jones()


# parsing ----------------------------------------------------------------------------------


def test_parse_formats_agree():
    a = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)")
    b = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]")
    c = parse_pd("# comment\nX[1,5,2,4], X[3,1,4,6]\nX[5,3,6,2]")
    assert a == b == c
    assert len(a) == 3


def test_parse_empty_is_unknot():
    d = parse_pd("")
    assert len(d) == 0
    assert kauffman_bracket(d) == ONE


@pytest.mark.parametrize("text", ["X(1,2,3)", "X(1,1,2,2) X(2,3,3,4)", "X(1,2,2,1) junk", "X(1,,2,2)"])
def test_parse_errors(text):
    with pytest.raises(PDParseError):
        parse_pd(text)


def test_orientation_error():
    # two outgoing under-strands joined head to head
    with pytest.raises(OrientationError):
        crossing_signs(parse_pd("X(1,3,2,4) X(1,4,2,3)"))


def test_round_trip_text():
    for d in CORPUS.values():
        assert parse_pd(d.to_text()) == d


# bracket and Jones --------------------------------------------------------------------------


def test_hopf_bracket():
    assert kauffman_bracket(CORPUS["hopf"]) == -A ** 4 - A ** -4


def test_unlink_bracket():
    assert kauffman_bracket(CORPUS["unlink_r2"]) == LOOP


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_bracket_matches_oracle(name):
    d = CORPUS[name]
    assert kauffman_bracket(d) == bracket_oracle(d)


@pytest.mark.parametrize("name", sorted(JONES))
def test_jones_reference(name):
    assert jones(CORPUS[name]) == JONES[name]


def test_kt_and_conway_agree():
    kt, co = CORPUS["kinoshita_terasaka"], CORPUS["conway"]
    assert len(kt) == len(co) == 11
    assert kauffman_bracket(kt) == kauffman_bracket(co)
    assert jones(kt) == jones(co)


def test_jones_groupings():
    # the two groupings differ by a sign exactly when the writhe is even
    for name, d in CORPUS.items():
        same = jones(d) == jones_literal(d)
        assert same == (writhe(d) % 2 == 1), name


def test_trefoils_and_writhe():
    right, left = CORPUS["trefoil"], CORPUS["trefoil_left"]
    assert writhe(right) == 3 and writhe(left) == -3
    assert len(all_a_state(right).circles) == 2
    assert len(all_a_state(left).circles) == 3
    assert jones(mirror(right)) == jones(left)


def test_num_components():
    assert num_components(CORPUS["hopf"]) == 2
    assert num_components(CORPUS["link_4a1"]) == 2
    assert num_components(CORPUS["figure_eight"]) == 1
    assert len(components(CORPUS["trefoil"])) == 1


def test_format_t():
    assert format_t(jones(CORPUS["hopf"])) == "-t^(5/2) - t^(1/2)"
    assert format_t(jones(CORPUS["trefoil"])) == "-t^4 + t^3 + t"
    assert parse_t("t^(1/2) + 2*t^-1") == MultiPoly.var("q", 2) + 2 * MultiPoly.var("q", -4)


def test_oracle_budget():
    with pytest.raises(BudgetExceededError):
        bracket_oracle(CORPUS["conway"], limit=5)


# Reidemeister moves and mirror ------------------------------------------------------------


@pytest.mark.parametrize("pattern", range(4))
def test_kink_multiplies_bracket(pattern):
    d = CORPUS["figure_eight"]
    k = add_kink(d, 0, 2, pattern)
    sign = 1 if pattern in (0, 3) else -1
    assert writhe(k) == writhe(d) + sign
    assert kauffman_bracket(k) == kauffman_bracket(d) * (-A ** (3 * sign))
    assert jones(k) == jones(d)


def test_braid_moves():
    trefoil = jones(braid_closure([1, 1, 1]))
    assert trefoil == jones(CORPUS["trefoil"])
    # R2: σ1 σ1^-1 inserted
    assert jones(braid_closure([1, 1, -1, 1, 1])) == trefoil
    # R3: σ1σ2σ1 = σ2σ1σ2
    assert kauffman_bracket(braid_closure([1, 2, 1])) == kauffman_bracket(braid_closure([2, 1, 2]))
    assert jones(braid_closure([1, -2, 1, -2])) == jones(CORPUS["figure_eight"])


def test_mirror_inverts_a():
    for name in ("trefoil", "knot_5_2", "hopf"):
        d = CORPUS[name]
        assert kauffman_bracket(mirror(d)) == kauffman_bracket(d).subs_poly({"A": A ** -1})
        assert writhe(mirror(d)) == -writhe(d)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=7))
def test_random_braids(word):
    n = max(abs(g) for g in word) + 1
    if any(i not in {abs(g) for g in word} for i in range(1, n)):
        return
    d = braid_closure(word, n)
    assert kauffman_bracket(d) == bracket_oracle(d)
    assert writhe(d) == sum(1 if g > 0 else -1 for g in word)
    assert sorted(crossing_signs(d)) == sorted(1 if g > 0 else -1 for g in word)


def test_all_a_ribbon_graph_is_orientable():
    for d in CORPUS.values():
        g = ribbon_of_diagram(d)
        s = SpanningState.full(g)
        assert s.t == 0
        assert g.num_vertices() == len(all_a_state(d).circles)


def test_corpus_timing():
    start = time.time()
    for d in CORPUS.values():
        assert kauffman_bracket(d) == bracket_oracle(d)
    assert time.time() - start < 120
