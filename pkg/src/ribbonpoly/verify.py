"""Seeded oracle-equivalence suites shared by ``ribbonpoly verify`` and the
acceptance tests.  Each suite returns ``(name, passed, detail)``."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Tuple

from .compose import brylawski, brylawski_br, compose_br_general, compose_br_planar, compose_tutte
from .core.decomposition import ENDS_DEFAULT, ENDS_SWAP, PieceSlot, TwoDecomposition
from .core.generate import (
    all_small_graphs,
    eta_ddot1_pieces,
    random_decomposition,
    random_eta_ddot1_pieces,
    random_graph,
    random_piece,
)
from .core.graph import bouquet
from .core.states import SpanningState, all_states, engine
from .core.surgery import assemble, contract_nonloop, delete, tensor, two_sum
from .poly import MultiPoly
from .statesum import (
    _br_direct,
    _br_via_z,
    br_polynomial,
    eta_sums_full,
    solve_pqr_twisted,
    tutte,
    tutte_from_br,
    z_polynomial,
)

Result = Tuple[str, bool, str]


def _genus(g) -> int:
    s = SpanningState.full(g)
    return -1 if s.t else s.euler_genus() // 2


# composition suites ------------------------------------------------------------------


def suite_tutte(rng: random.Random, count: int = 80) -> Result:
    bad = 0
    for _ in range(count):
        d = random_decomposition(rng, rng.randint(1, 4), 12)
        if compose_tutte(d) != z_polynomial(assemble(d), "b", False, False):
            bad += 1
    return "compose_tutte vs brute force", bad == 0, f"{count - bad}/{count} exact"


def suite_planar(rng: random.Random, count: int = 60) -> Result:
    bad = high = 0
    for i in range(count):
        if i % 3 == 0:
            # force a positive-genus template
            t = bouquet(rng.randint(2, 3), interlaced=True)
            pieces = {e: PieceSlot(random_piece(rng, 3, 3, planar=True),
                                   rng.choice((ENDS_DEFAULT, ENDS_SWAP))) for e in t.edge_ids}
            d = TwoDecomposition(t, pieces)
        else:
            d = random_decomposition(rng, rng.randint(1, 4), 12, planar=True)
        high += _genus(d.template) >= 1
        if compose_br_planar(d) != z_polynomial(assemble(d), "b", True, False):
            bad += 1
    ok = bad == 0 and high > 0
    return "compose_br_planar vs brute force", ok, f"{count - bad}/{count} exact, {high} with template genus >= 1"


def suite_general(rng: random.Random, count: int = 60, min_ddot1: int = 20) -> Result:
    bad = ddot1 = 0
    for i in range(count):
        d = random_decomposition(rng, rng.randint(1, 3), 12)
        if i % 2 == 0:
            e = rng.choice(d.template.edge_ids)
            d.pieces[e] = PieceSlot(random_eta_ddot1_pieces(rng, 1, 4)[0], d.pieces[e].ends)
        if any(not eta_sums_full(d.piece(e))["eta_ddot1"].is_zero() for e in d.template.edge_ids):
            ddot1 += 1
        if compose_br_general(d) != z_polynomial(assemble(d), "b", True, False):
            bad += 1
    ok = bad == 0 and ddot1 >= min(min_ddot1, count // 2)
    return "compose_br_general vs brute force", ok, f"{count - bad}/{count} exact, {ddot1} with nonzero η̈¹"


def suite_brylawski(rng: random.Random, count: int = 40) -> Result:
    bad = 0
    for i in range(count):
        nv = rng.randint(1, 3)
        g = random_graph(rng, nv, rng.randint(max(1, nv - 1), 3))
        if i % 2:
            p = random_piece(rng, 3, 3, joined=True)
            if brylawski(g, p).value != tutte(tensor(g, p)):
                bad += 1
        else:
            p = random_piece(rng, 3, 3, planar=True, joined=True)
            if brylawski_br(g, p).value != br_polynomial(tensor(g, p)):
                bad += 1
    return "brylawski / brylawski_br vs tensor product", bad == 0, f"{count - bad}/{count} exact"


# structural identities -------------------------------------------------------------------


def _identities(g) -> List[str]:
    """Failed identity names for one graph."""
    failed = []
    if _br_direct(g) != _br_via_z(g):
        failed.append("R direct vs via Z")
    r = br_polynomial(g)
    if tutte_from_br(r) != tutte(g):
        failed.append("R(x, y-1, 1) = T")
    z = z_polynomial(g)
    for e in g.edges:
        if g.is_loop(e.id):
            continue
        rhs = z_polynomial(delete(g, e.id)) + MultiPoly.var(e.label) * z_polynomial(contract_nonloop(g, e.id))
        if z != rhs:
            failed.append(f"deletion-contraction at {e.id}")
    if not SpanningState.full(g).t:
        for s in all_states(g):
            if s.t or s.k - s.boundary + s.n != s.euler_genus():
                failed.append("γ exponent = 2 genus")
                break
        if any(dict(m).get("γ", 0) % 2 for m in r.terms):
            failed.append("γ exponents even")
    return failed


def suite_identities_exhaustive(max_edges: int = 3) -> Result:
    n = 0
    bad = []
    for g in all_small_graphs(max_edges):
        n += 1
        f = _identities(g)
        if f:
            bad.append(f)
    return f"structural identities, all graphs <= {max_edges} edges", not bad, f"{n - len(bad)}/{n} graphs clean"


def suite_identities_random(rng: random.Random, count: int = 30, max_edges: int = 10) -> Result:
    bad = 0
    for _ in range(count):
        nv = rng.randint(1, 4)
        g = random_graph(rng, nv, rng.randint(max(nv - 1, 1), max_edges), twist_prob=0.3 * rng.random())
        bad += bool(_identities(g))
    return f"structural identities, random graphs <= {max_edges} edges", bad == 0, f"{count - bad}/{count} clean"


def suite_flip(rng: random.Random, count: int = 30) -> Result:
    """R of a 2-sum is the same for all four gluing choices (ends x flip)."""
    bad = 0
    for _ in range(count):
        nv = rng.randint(1, 3)
        g = random_graph(rng, nv, rng.randint(max(1, nv - 1), 3))
        e = rng.choice(g.edge_ids)
        p = random_piece(rng, 3, 3)
        vals = {br_polynomial(two_sum(g, e, p, ends, flip))
                for ends in (ENDS_DEFAULT, ENDS_SWAP) for flip in (False, True)}
        bad += len(vals) != 1
    return "R invariant under the four 2-sum gluing choices", bad == 0, f"{count - bad}/{count} invariant"


# twisted system ---------------------------------------------------------------------------


def twisted_system_report(pieces) -> Tuple[str, int, int, int]:
    """Count pieces on which p + r and c p + r match Z(A_ẽ/ẽ; d=1) - Z(A_ẽ/ẽ; d=0)."""
    plain = printed = direct_ok = 0
    for p in pieces:
        res = solve_pqr_twisted(p)
        plain += bool(res.corrected["row_holds"])
        printed += bool(res.printed["row_holds"])
        direct_ok += bool(res.corrected["matches_direct"])
    n = len(pieces)
    if plain == n and printed == 0:
        verdict = "p + r holds, c p + r fails"
    elif printed == n and plain == 0:
        verdict = "c p + r holds, p + r fails"
    else:
        verdict = f"mixed: p + r on {plain}/{n}, c p + r on {printed}/{n}"
    return verdict, plain, printed, direct_ok


def suite_twisted(rng: random.Random, count: int = 12) -> Result:
    pieces = eta_ddot1_pieces()
    pieces += random_eta_ddot1_pieces(rng, max(0, count - len(pieces)))
    verdict, plain, printed, direct_ok = twisted_system_report(pieces)
    n = len(pieces)
    ok = n >= 10 and direct_ok == n and (plain == n or printed == n)
    return "twisted-edge system", ok, f"{verdict} ({n} pieces with nonzero η̈¹)"


# knots ------------------------------------------------------------------------------------


def suite_knots() -> Result:
    from .knots import bracket_oracle, corpus, kauffman_bracket

    bad = []
    items = corpus()
    for name, d in items.items():
        if kauffman_bracket(d) != bracket_oracle(d):
            bad.append(name)
    return "kauffman_bracket vs skein oracle on the corpus", not bad, \
        f"{len(items) - len(bad)}/{len(items)} equal" + (f"; failed {bad}" if bad else "")


def run_suite(name: str, rng: random.Random, count: Optional[int] = None) -> Iterator[Result]:
    scale = 1 if name == "full" else 0.25
    n = (lambda default: count if count is not None else max(4, int(default * scale)))
    yield suite_tutte(rng, n(80))
    yield suite_planar(rng, n(60))
    yield suite_general(rng, n(60), 20 if name == "full" else 4)
    yield suite_brylawski(rng, n(40))
    yield suite_flip(rng, n(30))
    yield suite_identities_random(rng, n(30), 12 if name == "full" else 8)
    yield suite_identities_exhaustive(3 if name == "full" else 2)
    yield suite_twisted(rng)
    yield suite_knots()
