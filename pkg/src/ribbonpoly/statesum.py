"""Brute-force state sums: Z, R and T of ribbon graphs, the partition sums of
marked pieces, and the linear systems that determine piece weights.

Variables: ``a`` (components), ``c`` (boundary components), ``d`` (twist
marker, reduced mod ``d^2 - d``), per-edge labels ``x_e`` or a uniform
``b``; ``α β γ δ`` for the Bollobás-Riordan polynomial and ``x y`` for Tutte.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .core.decomposition import MarkedPiece
from .core.graph import RibbonGraph
from .core.states import SpanningState, engine
from .core.surgery import BAR1, DDOT1, DDOT2, GTilde, close_piece, contract_nonloop
from .errors import (
    BudgetExceededError,
    ConstructionError,
    DuplicateLabelError,
    OrientabilityError,
    PlanarityError,
)
from .poly import ONE, ZERO, MultiPoly, RationalFn, d_reduce, mono_from_dict

DEFAULT_BUDGET = 20
RESERVED = frozenset({"a", "b", "c", "d", "α", "β", "γ", "δ", "x", "y", "A", "q", "t"})

a_ = MultiPoly.var("a")
b_ = MultiPoly.var("b")
c_ = MultiPoly.var("c")
d_ = MultiPoly.var("d")
ALPHA, BETA, GAMMA, DELTA = (MultiPoly.var(v) for v in ("α", "β", "γ", "δ"))
X_, Y_ = MultiPoly.var("x"), MultiPoly.var("y")


def get_budget(budget: Optional[int] = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("RIBBONPOLY_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise BudgetExceededError(f"RIBBONPOLY_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def check_budget(g: RibbonGraph, budget: Optional[int] = None) -> None:
    limit = get_budget(budget)
    if g.num_edges() > limit:
        raise BudgetExceededError(
            f"graph has {g.num_edges()} edges; enumeration budget is {limit} "
            f"(set RIBBONPOLY_BUDGET to raise it)")


def state_records(g: RibbonGraph, budget: Optional[int] = None,
                  lo: int = 0, hi: Optional[int] = None) -> Iterator[Tuple[int, int, int, int]]:
    """Yield ``(mask, k, boundary, t)`` for every state in ``[lo, hi)``."""
    check_budget(g, budget)
    eng = engine(g)
    hi = (1 << eng.ne) if hi is None else hi
    for m in range(lo, hi):
        yield m, eng.k(m), eng.boundary(m)[0], eng.t(m)


# Z ------------------------------------------------------------------------------


def _z_terms(g: RibbonGraph, uniform: Optional[str], with_c: bool, with_d: bool,
             lo: int, hi: int) -> Dict[tuple, int]:
    eng = engine(g)
    labels = g.labels()
    out: Counter = Counter()
    for m, k, bd, t in state_records(g, budget=eng.ne, lo=lo, hi=hi):
        exps: Dict[str, int] = {"a": k}
        if with_c:
            exps["c"] = exps.get("c", 0) + bd
        if with_d and t:
            exps["d"] = 1
        if uniform is not None:
            e = bin(m).count("1")
            exps[uniform] = exps.get(uniform, 0) + e
        else:
            for j in range(eng.ne):
                if m >> j & 1:
                    exps[labels[j]] = exps.get(labels[j], 0) + 1
        out[mono_from_dict(exps)] += 1
    return dict(out)


def _z_chunk(args):
    return _z_terms(*args)


def z_polynomial(g: RibbonGraph, uniform: Optional[str] = None, with_c: bool = True,
                 with_d: bool = True, budget: Optional[int] = None, workers: int = 1) -> MultiPoly:
    """Sum of ``a^k (prod x_e) c^boundary d^t`` over all states.

    ``uniform`` replaces every edge label by one variable; ``with_c`` /
    ``with_d`` set to ``False`` specialize that variable to 1.
    """
    check_budget(g, budget)
    if uniform is None:
        clash = RESERVED.intersection(g.labels()) - {"b"}
        if clash and (clash & {"a", "c", "d"}):
            raise DuplicateLabelError(f"edge labels collide with state-sum variables: {sorted(clash)}")
    total = 1 << g.num_edges()
    if workers > 1 and total >= 1 << 12:
        step = -(-total // workers)
        jobs = [(g, uniform, with_c, with_d, lo, min(lo + step, total)) for lo in range(0, total, step)]
        terms: Counter = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_z_chunk, jobs):
                terms.update(part)
        return d_reduce(MultiPoly(terms))
    return d_reduce(MultiPoly(_z_terms(g, uniform, with_c, with_d, 0, total)))


def z_multivariate(g: RibbonGraph, budget: Optional[int] = None, workers: int = 1) -> MultiPoly:
    """Z(F; a, x, c, d) with per-edge weight labels."""
    return z_polynomial(g, None, True, True, budget, workers)


def z_br(g: RibbonGraph, budget: Optional[int] = None) -> MultiPoly:
    """Z(F; a, b, c, d) with every edge weighted ``b``."""
    return z_polynomial(g, "b", True, True, budget)


def z_tutte(g: RibbonGraph, budget: Optional[int] = None) -> MultiPoly:
    """Z(F; a, b) = sum of a^k b^e (embedding ignored)."""
    return z_polynomial(g, "b", False, False, budget)


def specialize_b(p: MultiPoly, labels) -> MultiPoly:
    """Set every listed weight label to ``b``."""
    return p.subs_poly({lab: "b" for lab in labels})


# R and T ------------------------------------------------------------------------


def _br_direct(g: RibbonGraph, budget: Optional[int] = None) -> MultiPoly:
    nv = g.num_vertices()
    counts: Counter = Counter()
    rg = None
    for m, k, bd, t in state_records(g, budget):
        e = bin(m).count("1")
        r = nv - k
        n = e - r
        counts[(r, n, k - bd + n, t)] += 1
        if m == (1 << g.num_edges()) - 1:
            rg = r
    am1 = ALPHA - 1
    out = ZERO
    for (r, n, gexp, t), cnt in counts.items():
        term = am1 ** (rg - r) * MultiPoly.monomial({"β": n, "γ": gexp, "δ": t}, cnt)
        out = out + term
    return out


def _br_via_z(g: RibbonGraph, budget: Optional[int] = None) -> MultiPoly:
    z = z_br(g, budget)
    sub = z.subs({
        "a": (ALPHA - 1) * BETA * GAMMA ** 2,
        "b": BETA * GAMMA,
        "c": GAMMA ** -1,
        "d": DELTA,
    }).to_poly()
    kg = SpanningState.full(g).k
    sub = sub.shift(((("β", -g.num_vertices()), ("γ", -g.num_vertices()))))
    return sub.exact_div((ALPHA - 1) ** kg)


def br_polynomial(g: RibbonGraph, budget: Optional[int] = None) -> MultiPoly:
    """R(G; α, β, γ, δ) from its definition, cross-checked through Z."""
    direct = _br_direct(g, budget)
    via_z = _br_via_z(g, budget)
    if direct != via_z:
        raise ConstructionError(f"R cross-check failed: direct {direct} vs via Z {via_z}")
    return direct


def tutte(g: RibbonGraph, budget: Optional[int] = None) -> MultiPoly:
    """T(G; x, y) as the rank-nullity state sum."""
    nv = g.num_vertices()
    counts: Counter = Counter()
    full = (1 << g.num_edges()) - 1
    rg = 0
    for m, k, _, _ in state_records(g, budget):
        e = bin(m).count("1")
        r = nv - k
        counts[(r, e - r)] += 1
        if m == full:
            rg = r
    out = ZERO
    for (r, n), cnt in counts.items():
        out = out + (X_ - 1) ** (rg - r) * (Y_ - 1) ** n * cnt
    return out


def tutte_from_br(r: MultiPoly) -> MultiPoly:
    """R(G; x, y-1, 1) with δ set to 1."""
    return r.subs_poly({"α": X_, "β": Y_ - 1, "γ": 1, "δ": 1})


def tutte_deletion_contraction(g: RibbonGraph) -> MultiPoly:
    """Independent Tutte oracle by deletion-contraction on the abstract multigraph."""
    verts = {v: i for i, v in enumerate(g.vertex_ids)}
    edges = tuple(sorted(tuple(sorted((verts[a], verts[b]))) for a, b in (g.endpoints(e) for e in g.edge_ids)))
    return _tdc(edges)


def _bridge(edges, idx) -> bool:
    u, w = edges[idx]
    adj: Dict[int, List[int]] = {}
    for j, (a, b) in enumerate(edges):
        if j == idx:
            continue
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen, stack = {u}, [u]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return w not in seen


def _tdc(edges) -> MultiPoly:
    if not edges:
        return ONE
    u, w = edges[0]
    rest = edges[1:]
    if u == w:
        return Y_ * _tdc(rest)
    contracted = tuple(sorted(tuple(sorted((u if a == w else a, u if b == w else b))) for a, b in rest))
    if _bridge(edges, 0):
        return X_ * _tdc(contracted)
    return _tdc(rest) + _tdc(contracted)


# partition sums of marked pieces ------------------------------------------------


@dataclass(frozen=True)
class PartitionSums:
    variant: str
    values: Dict[str, MultiPoly]

    def __getitem__(self, key: str) -> MultiPoly:
        return self.values[key]


def closure(p: MarkedPiece, twisted: bool = False) -> Tuple[RibbonGraph, str]:
    return close_piece(p, twisted)


def closure_contracted(p: MarkedPiece, twisted: bool = False) -> RibbonGraph:
    """A/e (or A_ẽ/ẽ when twisted)."""
    g, eid = close_piece(p, twisted)
    return contract_nonloop(g, eid)


def _piece_states(p: MarkedPiece, budget: Optional[int] = None):
    """Yield ``(mask, e, k, boundary, tag)`` for every state of the piece."""
    g = p.graph
    check_budget(g, budget)
    eng = engine(g)
    mi = eng.mark_index(*p.m)
    ni = eng.mark_index(*p.n)
    for m in eng.all_masks():
        comps = eng.components(m)
        bd, (b1, b2) = eng.boundary(m, [mi, ni])
        if comps[mi[0]] != comps[ni[0]]:
            tag = DDOT2
        elif b1 == b2:
            tag = BAR1
        else:
            tag = DDOT1
        yield m, bin(m).count("1"), len(set(comps)), bd, tag


def phi_sums(p: MarkedPiece, budget: Optional[int] = None) -> PartitionSums:
    p.checked()
    phi1, phi2 = Counter(), Counter()
    for _, e, k, _, tag in _piece_states(p, budget):
        if tag == DDOT2:
            phi2[mono_from_dict({"a": k - 2, "b": e})] += 1
        else:
            phi1[mono_from_dict({"a": k - 1, "b": e})] += 1
    return PartitionSums("tutte-phi", {"phi1": MultiPoly(phi1), "phi2": MultiPoly(phi2)})


def require_orientable(g: RibbonGraph, what: str) -> None:
    if SpanningState.full(g).t:
        raise OrientabilityError(f"{what} is non-orientable")


def piece_genus(p: MarkedPiece) -> int:
    a, _ = close_piece(p)
    s = SpanningState.full(a)
    if s.t:
        raise OrientabilityError("closure of the piece is non-orientable")
    return s.euler_genus() // 2


def require_planar(p: MarkedPiece) -> None:
    gen = piece_genus(p)
    if gen:
        raise PlanarityError(f"piece closure has genus {gen}; planar composition needs genus 0")


def eta_sums_planar(p: MarkedPiece, budget: Optional[int] = None) -> PartitionSums:
    p.checked()
    require_planar(p)
    eta1, eta2 = Counter(), Counter()
    for _, e, k, bd, tag in _piece_states(p, budget):
        if tag == DDOT2:
            eta2[mono_from_dict({"a": k - 2, "b": e, "c": bd - 2})] += 1
        else:
            eta1[mono_from_dict({"a": k - 1, "b": e, "c": bd - 1})] += 1
    return PartitionSums("planar-eta", {"eta1": MultiPoly(eta1), "eta2": MultiPoly(eta2)})


def eta_sums_full(p: MarkedPiece, budget: Optional[int] = None) -> PartitionSums:
    p.checked()
    require_orientable(p.graph, "piece")
    sums = {BAR1: Counter(), DDOT1: Counter(), DDOT2: Counter()}
    for _, e, k, bd, tag in _piece_states(p, budget):
        if tag == BAR1:
            mono = {"a": k - 1, "b": e, "c": bd - 1}
        elif tag == DDOT1:
            mono = {"a": k - 1, "b": e, "c": bd - 2}
        else:
            mono = {"a": k - 2, "b": e, "c": bd - 2}
        sums[tag][mono_from_dict(mono)] += 1
    return PartitionSums("full-eta", {
        "eta_bar1": MultiPoly(sums[BAR1]),
        "eta_ddot1": MultiPoly(sums[DDOT1]),
        "eta_ddot2": MultiPoly(sums[DDOT2]),
    })


def phi_gtilde(gt: GTilde, budget: Optional[int] = None) -> MultiPoly:
    """Sum over ~-classes of G-tilde states at the representative with fewest edges.

    A representative never contains f_e without g_e.
    """
    g = gt.graph
    eng = engine(g)
    pairs = [(eng.eindex[f], eng.eindex[gg]) for f, gg in gt.edge_ids.values()]
    labels = g.labels()
    terms: Counter = Counter()
    for m, k, bd, _ in state_records(g, budget):
        if any(m >> fi & 1 and not m >> gi & 1 for fi, gi in pairs):
            continue
        exps = {"a": k, "c": bd}
        for j in range(eng.ne):
            if m >> j & 1:
                exps[labels[j]] = exps.get(labels[j], 0) + 1
        terms[mono_from_dict(exps)] += 1
    return MultiPoly(terms)


# solved piece weights -------------------------------------------------------------


@dataclass
class SolvedWeights:
    kind: str
    values: Dict[str, RationalFn]
    notes: Dict[str, object] = field(default_factory=dict)

    def __getitem__(self, key: str) -> RationalFn:
        return self.values[key]


def solve_phi(p: MarkedPiece, budget: Optional[int] = None) -> SolvedWeights:
    """f, g with a(f + a g) = Z(H; a, b) and a(f + g) = Z(A/e; a, b)."""
    zh = RationalFn(z_tutte(p.graph, budget))
    za = RationalFn(z_tutte(closure_contracted(p), budget))
    a = RationalFn(a_)
    g = (zh - za) / (a * (a - 1))
    f = za / a - g
    if a * (f + a * g) != zh or a * (f + g) != za:
        raise ConstructionError("phi system residual is nonzero")
    sums = phi_sums(p, budget)
    if f != sums["phi1"] or g != sums["phi2"]:
        raise ConstructionError("phi system solution disagrees with the partition sums")
    return SolvedWeights("phi", {"f": f, "g": g})


def z_piece_br(p: MarkedPiece, budget: Optional[int] = None) -> Tuple[MultiPoly, MultiPoly]:
    """(Z(H; a, b, c), Z(A/e; a, b, c)) for an orientable piece."""
    return (z_polynomial(p.graph, "b", True, False, budget),
            z_polynomial(closure_contracted(p), "b", True, False, budget))


def solve_eta_planar(p: MarkedPiece, budget: Optional[int] = None) -> SolvedWeights:
    """f, g with a c g + f = Z(H; a, b, c) and g + c f = Z(A/e; a, b, c)."""
    require_planar(p)
    zh_p, za_p = z_piece_br(p, budget)
    zh, za = RationalFn(zh_p), RationalFn(za_p)
    a, c = RationalFn(a_), RationalFn(c_)
    det = 1 - a * c * c
    f = (zh - a * c * za) / det
    g = (za - c * zh) / det
    if a * c * g + f != zh or g + c * f != za:
        raise ConstructionError("planar eta system residual is nonzero")
    return SolvedWeights("eta-planar", {"f": f, "g": g})


@dataclass
class PQR:
    p: MultiPoly
    q: MultiPoly
    r: MultiPoly
    printed: Optional[Dict[str, object]] = None
    corrected: Optional[Dict[str, object]] = None


def pqr_direct(p: MarkedPiece, budget: Optional[int] = None) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """p = ac·η̄¹, q = ac·η̈², r = ac·η̈¹ from the direct partition sums."""
    sums = eta_sums_full(p, budget)
    ac = a_ * c_
    return ac * sums["eta_bar1"], ac * sums["eta_ddot2"], ac * sums["eta_ddot1"]


def solve_pqr_twisted(p: MarkedPiece, budget: Optional[int] = None) -> PQR:
    """Piece weights for the general composition, with a residual report.

    The direct partition sums are normative.  The twisted-edge linear
    system is solved both as printed (``c p + r`` on the difference row)
    and with coefficient 1 on ``p``; each is compared with the direct
    route and the outcome is recorded in ``printed`` / ``corrected``.
    """
    require_orientable(p.graph, "piece")
    pp, qq, rr = pqr_direct(p, budget)
    zh = z_polynomial(p.graph, "b", True, False, budget)
    ztw = z_br(closure_contracted(p, twisted=True), budget)
    z0 = ztw.subs_poly({"d": 0})
    z1 = ztw.subs_poly({"d": 1})
    diff = RationalFn(z1 - z0)
    if qq != z0:
        raise ConstructionError("q differs from Z(A_ẽ/ẽ; d=0)")
    rhs = RationalFn(zh) - RationalFn(a_ * c_ * z0)
    c = RationalFn(c_)
    # printed system: c p + r = diff ; p + c r = rhs
    p_pr = (c * diff - rhs) / (c * c - 1)
    r_pr = diff - c * p_pr
    # coefficient-1 system: p + r = diff ; p + c r = rhs
    r_co = (rhs - diff) / (c - 1)
    p_co = diff - r_co
    printed = {
        "row_holds": RationalFn(c_ * pp + rr) == diff,
        "matches_direct": p_pr == pp and r_pr == rr,
        "p": p_pr, "r": r_pr,
    }
    corrected = {
        "row_holds": RationalFn(pp + rr) == diff,
        "matches_direct": p_co == pp and r_co == rr,
        "p": p_co, "r": r_co,
    }
    if RationalFn(pp + c_ * rr) != rhs:
        raise ConstructionError("second row p + c r = Z(H) - ac q fails for the direct sums")
    return PQR(pp, qq, rr, printed, corrected)


def pqr_multivariate(p: MarkedPiece, budget: Optional[int] = None) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Division-free p, q, r in the piece's edge labels, by term comparison.

    Each state s of H gives one term a^k x^s c^∂ of Z(H) and one term of
    Z(A/e); the shift in (k, ∂) between them identifies the class of s.
    """
    labels = p.graph.labels()
    if len(set(labels)) != len(labels):
        raise DuplicateLabelError("pqr_multivariate needs distinct edge weight labels")
    if RESERVED.intersection(labels):
        raise DuplicateLabelError(f"edge labels collide with reserved variables: "
                                  f"{sorted(RESERVED.intersection(labels))}")
    zh = z_polynomial(p.graph, None, True, False, budget)
    za = z_polynomial(closure_contracted(p), None, True, False, budget)

    def by_state(z: MultiPoly) -> Dict[tuple, Tuple[int, int]]:
        out = {}
        for m, coeff in z.items():
            if coeff != 1:
                raise ConstructionError("repeated state monomial; labels are not distinct")
            d = dict(m)
            k, bd = d.pop("a", 0), d.pop("c", 0)
            out[tuple(sorted(d.items()))] = (k, bd)
        return out

    h_terms, a_terms = by_state(zh), by_state(za)
    pp, qq, rr = Counter(), Counter(), Counter()
    for xs, (k, bd) in h_terms.items():
        k2, bd2 = a_terms[xs]
        shift = (k2 - k, bd2 - bd)
        xd = dict(xs)
        if shift == (0, 1):
            pp[mono_from_dict({**xd, "a": k, "c": bd})] += 1
        elif shift == (0, -1):
            rr[mono_from_dict({**xd, "a": k, "c": bd - 1})] += 1
        elif shift == (-1, -1):
            qq[mono_from_dict({**xd, "a": k - 1, "c": bd - 1})] += 1
        else:
            raise ConstructionError(f"unexpected (k, ∂) shift {shift} under contraction")
    P, Q, R = MultiPoly(pp), MultiPoly(qq), MultiPoly(rr)
    if c_ * P + Q + R != za or P + a_ * c_ * Q + c_ * R != zh:
        raise ConstructionError("multivariate p, q, r fail their defining equations")
    return P, Q, R


# small named pieces ----------------------------------------------------------------


def path_piece(length: int = 2) -> MarkedPiece:
    """Path u - ... - w with ``length`` edges (the C_{length+1} piece)."""
    from .core.graph import Edge

    verts = []
    edges = []
    names = ["u"] + [f"m{i}" for i in range(1, length)] + ["w"]
    for i in range(length):
        edges.append(Edge(f"p{i}", (f"p{i}.0", f"p{i}.1")))
    for i, v in enumerate(names):
        rot = []
        if i > 0:
            rot.append(f"p{i - 1}.1")
        if i < length:
            rot.append(f"p{i}.0")
        verts.append((v, rot))
    g = RibbonGraph(verts, edges)
    return MarkedPiece(g, "u", "w", len(g.rotation("u")), 0)


def parallel_piece(k: int = 2) -> MarkedPiece:
    """u and w joined by ``k`` parallel edges, drawn in the plane."""
    from .core.graph import Edge

    edges = [Edge(f"q{i}", (f"q{i}.0", f"q{i}.1")) for i in range(k)]
    u_rot = [f"q{i}.0" for i in range(k)]
    w_rot = [f"q{i}.1" for i in reversed(range(k))]
    g = RibbonGraph([("u", u_rot), ("w", w_rot)], edges)
    return MarkedPiece(g, "u", "w", k, 0)


def interlaced_piece() -> MarkedPiece:
    """Two interlaced loops at u plus an edge u - w, u's mark between the loop ends.

    States holding ``s`` and one loop put the marks on different boundary
    walks of one component, so η̈¹ = b².
    """
    from .core.graph import make_graph

    g = make_graph(
        {"u": ["l0.0", "l1.0", "l0.1", "l1.1", "s.0"], "w": ["s.1"]},
        {"l0": ("l0.0", "l0.1"), "l1": ("l1.0", "l1.1"), "s": ("s.0", "s.1")},
    )
    return MarkedPiece(g, "u", "w", 1, 0)
