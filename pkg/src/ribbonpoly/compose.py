"""Composition formulas: Z, R and T of an assembled graph from its template
and per-edge piece weights, plus the Brylawski tensor-product corollaries."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

from .core.decomposition import MarkedPiece, TwoDecomposition
from .core.graph import RibbonGraph
from .core.states import SpanningState, engine
from .core.surgery import build_gtilde, close_piece, contract_nonloop, tensor, untwist
from .errors import ConstructionError, RibbonPolyError
from .poly import ONE, ZERO, MultiPoly, RationalFn, mono_from_dict
from .statesum import (
    ALPHA,
    BETA,
    X_,
    Y_,
    a_,
    b_,
    c_,
    br_polynomial,
    check_budget,
    closure_contracted,
    eta_sums_full,
    eta_sums_planar,
    phi_sums,
    pqr_direct,
    require_orientable,
    require_planar,
    solve_eta_planar,
    solve_phi,
    tutte,
    z_polynomial,
)

F_MAP = "F"
G_MAP = "G"


@dataclass(frozen=True)
class MonomialMapSpec:
    """Per-template-edge η̄¹, η̈¹, η̈² values and the f/g labels they replace."""

    variant: str
    weights: Mapping[str, Mapping[str, object]]
    labels: Mapping[str, Tuple[str, str]]


def apply_map(m: MonomialMapSpec, poly: MultiPoly) -> RationalFn:
    """Linear extension of the 𝓕 or 𝓖 monomial map on polynomials in f_e, g_e.

    Per edge with exponents (α_e, β_e) of (f_e, g_e): (1,1) gives η̈¹,
    (0,1) gives η̄¹ and β_e = 0 gives η̈² (𝓕) or ½η̈²·c^{-α_e} (𝓖).
    """
    if m.variant not in (F_MAP, G_MAP):
        raise RibbonPolyError(f"unknown map variant {m.variant!r}")
    half = RationalFn(ONE, MultiPoly.const(2))
    cinv = RationalFn(ONE, c_)
    owner = {}
    for e, (fl, gl) in m.labels.items():
        owner[fl] = (e, 0)
        owner[gl] = (e, 1)
    total = RationalFn(ZERO)
    for mono, coeff in poly.items():
        rest = []
        pattern = {e: [0, 0] for e in m.labels}
        for v, x in mono:
            if v in owner:
                if x not in (0, 1):
                    raise RibbonPolyError(f"exponent {x} of {v} outside {{0, 1}}")
                e, slot = owner[v]
                pattern[e][slot] = x
            else:
                rest.append((v, x))
        term = RationalFn(MultiPoly({tuple(rest): coeff}))
        for e, (al, be) in pattern.items():
            w = m.weights[e]
            if al and be:
                term = term * RationalFn.coerce(w["eta_ddot1"])
            elif be:
                term = term * RationalFn.coerce(w["eta_bar1"])
            elif m.variant == F_MAP:
                term = term * RationalFn.coerce(w["eta_ddot2"])
            else:
                term = term * half * RationalFn.coerce(w["eta_ddot2"])
                if al:
                    term = term * cinv
        total = total + term
    return total


def _template_states(g: RibbonGraph, with_c: bool):
    check_budget(g)
    eng = engine(g)
    for mask in eng.all_masks():
        yield mask, eng.k(mask), eng.boundary(mask)[0] if with_c else 0


def compose_tutte(d: TwoDecomposition, verify: bool = False) -> MultiPoly:
    """Z(Ĝ; a, b) = Σ_s a^{k(s)} Π_{e∈s} φ¹_e Π_{e∉s} φ²_e over template states."""
    d.checked()
    g = d.template
    weights = {}
    for e in g.edge_ids:
        sums = phi_sums(d.piece(e))
        weights[e] = (sums["phi1"], sums["phi2"])
        if verify:
            solve_phi(d.piece(e))
    edges = g.edge_ids
    total = ZERO
    for mask, k, _ in _template_states(g, False):
        term = MultiPoly.var("a", k)
        for j, e in enumerate(edges):
            term = term * weights[e][0 if mask >> j & 1 else 1]
        total = total + term
    return total


def compose_br_planar(d: TwoDecomposition, verify: bool = False) -> MultiPoly:
    """Z(Ĝ; a, b, c) for genus-0 pieces: Σ_s a^k c^∂ Π η¹_e Π η²_e."""
    d.checked()
    g = untwist(d.template)
    weights = {}
    for e in g.edge_ids:
        p = d.piece(e)
        require_planar(p)
        sums = eta_sums_planar(p)
        weights[e] = (sums["eta1"], sums["eta2"])
        if verify:
            sol = solve_eta_planar(p)
            ac = a_ * c_
            if sol["f"] != ac * sums["eta1"] or sol["g"] != ac * sums["eta2"]:
                raise ConstructionError(f"planar system for edge {e!r} disagrees with the η sums")
    edges = g.edge_ids
    total = ZERO
    for mask, k, bd in _template_states(g, True):
        term = MultiPoly.monomial({"a": k, "c": bd})
        for j, e in enumerate(edges):
            term = term * weights[e][0 if mask >> j & 1 else 1]
        total = total + term
    return total


def compose_br_general(d: TwoDecomposition) -> MultiPoly:
    """Z(Ĝ; a, b, c) = 𝓖(Z(G̃; a, x, c)) for orientable template and pieces.

    Division-free: each per-edge factor of 𝓖 is scaled by 2ac so that the
    pattern (f,g) -> 2r, (-,g) -> 2p, (-,-) -> q, (f,-) -> q/c; the product
    is then divided exactly by (2ac)^{|E|}.
    """
    d.checked()
    require_orientable(d.template, "template")
    gt = build_gtilde(d.template)
    pqr = {}
    for e in d.template.edge_ids:
        p = d.piece(e)
        require_orientable(p.graph, f"piece {e!r}")
        pqr[e] = pqr_direct(p)
    z = z_polynomial(gt.graph, None, True, False)
    owner = {}
    for e, (fl, gl) in gt.labels.items():
        owner[fl] = (e, 0)
        owner[gl] = (e, 1)
    edges = d.template.edge_ids
    grouped: Dict[tuple, Dict[tuple, int]] = defaultdict(dict)
    for mono, coeff in z.items():
        pat = {e: [0, 0] for e in edges}
        rest = []
        for v, x in mono:
            if v in owner:
                e, slot = owner[v]
                pat[e][slot] = x
            else:
                rest.append((v, x))
        key = tuple((pat[e][0], pat[e][1]) for e in edges)
        grouped[key][tuple(rest)] = coeff
    cinv = MultiPoly.var("c", -1)

    def factor(e: str, al: int, be: int) -> MultiPoly:
        p, q, r = pqr[e]
        if al and be:
            return r * 2
        if be:
            return p * 2
        return q * cinv if al else q

    total = ZERO
    for key, rest in grouped.items():
        term = MultiPoly(rest)
        for e, (al, be) in zip(edges, key):
            term = term * factor(e, al, be)
        total = total + term
    n = len(edges)
    total = total.shift(mono_from_dict({"a": -n, "c": -n}))
    try:
        total = total.scale_div(2 ** n)
    except ArithmeticError:
        raise ConstructionError("𝓖 image has non-integral coefficients") from None
    if any(x < 0 for m in total.terms for _, x in m):
        raise ConstructionError("𝓖 image is not a polynomial")
    return total


def eta_map_spec(d: TwoDecomposition, variant: str = G_MAP) -> Tuple[MonomialMapSpec, MultiPoly]:
    """Map spec from full η sums, together with Z(G̃; a, x, c) (or Φ for 𝓕)."""
    from .statesum import phi_gtilde

    gt = build_gtilde(d.template)
    weights = {e: eta_sums_full(d.piece(e)).values for e in d.template.edge_ids}
    spec = MonomialMapSpec(variant, weights, gt.labels)
    if variant == F_MAP:
        return spec, phi_gtilde(gt)
    return spec, z_polynomial(gt.graph, None, True, False)


# tensor products and Brylawski --------------------------------------------------------


def _subs_rational(p: MultiPoly, bindings) -> RationalFn:
    return p.subs(bindings)


def tensor_z_tutte(g: RibbonGraph, piece: MarkedPiece) -> RationalFn:
    """(g)^{e(G)} Z(G; a, f/g) with f, g from the φ system."""
    sol = solve_phi(piece)
    f, gg = sol["f"], sol["g"]
    zg = z_polynomial(g, "b", False, False)
    return gg ** g.num_edges() * _subs_rational(zg, {"b": f / gg})


def tensor_z_br(g: RibbonGraph, piece: MarkedPiece) -> RationalFn:
    """(ac)^{-e(G)} g^{e(G)} Z(G; a, f/g, c) with f, g from the planar η system."""
    sol = solve_eta_planar(piece)
    f, gg = sol["f"], sol["g"]
    zg = z_polynomial(untwist(g), "b", True, False)
    ac = RationalFn(a_ * c_)
    return (gg / ac) ** g.num_edges() * _subs_rational(zg, {"b": f / gg})


@dataclass(frozen=True)
class BrylawskiResult:
    value: object  # MultiPoly, or RationalFn when the ε = 1 variant does not clear
    h: RationalFn
    h_prime: RationalFn
    epsilon: int


def brylawski(g: RibbonGraph, piece: MarkedPiece) -> BrylawskiResult:
    """T(G ⊗ A; x, y) = h^{n(G)} h'^{r(G)} T(G; T(H)/h', T(A/e)/((x-1)^ε h)).

    h, h' solve (x-1)h + h' = T(H) and (x-1)^ε (h + (y-1)h') = T(A/e),
    with ε = k(H) - k(A/e); ε = 0 is the ordinary case.  For ε = 1 (e a
    bridge of A) the system forces h' = 0 and the variant is evaluated
    literally, as the limit of its termwise expansion; the value is then
    generally not T(G ⊗ A) and may not even be a polynomial.
    """
    piece.checked()
    th = RationalFn(tutte(piece.graph))
    a_e = closure_contracted(piece)
    ta = RationalFn(tutte(a_e))
    eps = SpanningState.full(piece.graph).k - SpanningState.full(a_e).k
    xm1 = RationalFn(X_ - 1)
    ym1 = RationalFn(Y_ - 1)
    scale = xm1 ** eps
    # (x-1)h + h' = th ; h + (y-1)h' = ta / scale
    ta_s = ta / scale
    det = 1 - xm1 * ym1
    h = (ta_s - ym1 * th) / det
    hp = th - xm1 * h
    if xm1 * h + hp != th or scale * (h + ym1 * hp) != ta:
        raise ConstructionError("Brylawski system residual is nonzero")
    s = SpanningState.full(g)
    # expand T(G) termwise so that no power of h or h' lands in a denominator;
    # when e is a bridge of A (ε = 1) h' vanishes and only x^{r(G)} terms survive
    ya = ta / scale
    val = RationalFn(ZERO)
    for mono, coeff in tutte(g).items():
        ex = dict(mono)
        i, j = ex.get("x", 0), ex.get("y", 0)
        val = val + coeff * th ** i * hp ** (s.r - i) * ya ** j * h ** (s.n - j)
    val = val.reduced()
    return BrylawskiResult(val.to_poly() if val.is_polynomial() else val, h.reduced(), hp.reduced(), eps)


def brylawski_br(g: RibbonGraph, piece: MarkedPiece) -> BrylawskiResult:
    """R(G ⊗ A) = h^{n(G)} h'^{r(G)} R(G; R(H)/h', βh'/h, γ) for genus-0 A.

    h, h' solve h + βh' = R(A/e) and (α-1)h + h' = R(H).
    """
    piece.checked()
    require_planar(piece)
    rh = RationalFn(br_polynomial(piece.graph))
    ra = RationalFn(br_polynomial(closure_contracted(piece)))
    am1 = RationalFn(ALPHA - 1)
    beta = RationalFn(BETA)
    det = 1 - beta * am1
    h = (ra - beta * rh) / det
    hp = rh - am1 * h
    if h + beta * hp != ra or am1 * h + hp != rh:
        raise ConstructionError("Brylawski BR system residual is nonzero")
    gu = untwist(g)
    s = SpanningState.full(gu)
    rg = br_polynomial(gu)
    val = h ** s.n * hp ** s.r * rg.subs({"α": rh / hp, "β": beta * hp / h})
    return BrylawskiResult(val.to_poly(), h.reduced(), hp.reduced(), 0)
