"""Surgery on ribbon graphs: deletion, contraction, edge insertion, 2-sums,
decomposition assembly, tensor products and the G-tilde construction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..errors import (
    ConstructionError,
    InvalidArcError,
    LoopContractionError,
    OrientabilityError,
    UnknownIdError,
)
from .decomposition import ENDS_DEFAULT, ENDS_SWAP, MarkedPiece, PieceSlot, TwoDecomposition
from .graph import Edge, RibbonGraph, normalize_gap
from .states import mark_relation

Arc = Tuple[str, int]

BAR1 = "bar1"      # marks share a component and a boundary walk
DDOT1 = "ddot1"    # same component, different boundary walks
DDOT2 = "ddot2"    # different components


def delete(g: RibbonGraph, eid: str) -> RibbonGraph:
    e = g.edge(eid)
    gone = set(e.ends)
    return g.replace(
        vertices=[(v, [h for h in rot if h not in gone]) for v, rot in g.vertices],
        edges=[x for x in g.edges if x.id != eid],
    )


def flip_vertex(g: RibbonGraph, v: str) -> RibbonGraph:
    """Reverse the rotation at ``v`` and toggle edges with exactly one end there."""
    if not g.has_vertex(v):
        raise UnknownIdError(f"unknown vertex id {v!r}")
    edges = []
    for e in g.edges:
        hits = sum(g.half_vertex(h) == v for h in e.ends)
        edges.append(Edge(e.id, e.ends, e.twisted ^ (hits == 1), e.weight))
    verts = [(x, tuple(reversed(rot)) if x == v else rot) for x, rot in g.vertices]
    return g.replace(vertices=verts, edges=edges)


def untwist(g: RibbonGraph) -> RibbonGraph:
    """Remove all twists by vertex flips along spanning trees.

    Raises :class:`OrientabilityError` when ``g`` is non-orientable.
    """
    if g.is_untwisted():
        return g
    adj: Dict[str, List[Tuple[str, bool]]] = {v: [] for v in g.vertex_ids}
    for e in g.edges:
        u, w = g.endpoints(e.id)
        adj[u].append((w, e.twisted))
        adj[w].append((u, e.twisted))
    sign: Dict[str, bool] = {}
    for root in g.vertex_ids:
        if root in sign:
            continue
        sign[root] = False
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, tw in adj[x]:
                if y not in sign:
                    sign[y] = sign[x] ^ tw
                    queue.append(y)
    out = g
    for v in g.vertex_ids:
        if sign[v]:
            out = flip_vertex(out, v)
    if not out.is_untwisted():
        raise OrientabilityError("ribbon graph is non-orientable; twists cannot be removed")
    return out


def contract_nonloop(g: RibbonGraph, eid: str) -> RibbonGraph:
    """Contract a non-loop edge, merging its endpoint rotations at the splice points."""
    e = g.edge(eid)
    u, w = g.endpoints(eid)
    if u == w:
        raise LoopContractionError(
            f"edge {eid!r}: loop contraction unsupported (ribbon surfaces out of scope)")
    if e.twisted:
        g = flip_vertex(g, w)
        e = g.edge(eid)
    hu, hw = e.ends if g.half_vertex(e.ends[0]) == u else e.ends[::-1]
    ru, rw = list(g.rotation(u)), list(g.rotation(w))
    i, j = ru.index(hu), rw.index(hw)
    merged = ru[i + 1:] + ru[:i] + rw[j + 1:] + rw[:j]
    verts = []
    for v, rot in g.vertices:
        if v == u:
            verts.append((v, merged))
        elif v != w:
            verts.append((v, rot))
    return g.replace(vertices=verts, edges=[x for x in g.edges if x.id != eid])


def _fresh(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def insert_edge(g: RibbonGraph, u_arc: Arc, w_arc: Arc, twisted: bool = False,
                eid: Optional[str] = None, weight: Optional[str] = None) -> RibbonGraph:
    """Add a new ribbon between two arc positions on distinct vertices."""
    (u, i), (w, j) = u_arc, w_arc
    for v in (u, w):
        if not g.has_vertex(v):
            raise InvalidArcError(f"unknown vertex {v!r}")
    if u == w:
        raise InvalidArcError("insert_edge needs two distinct vertices")
    i = normalize_gap(g, u, i)
    j = normalize_gap(g, w, j)
    eid = eid if eid is not None else _fresh(g.edge_ids, "e")
    if g.has_edge(eid):
        raise InvalidArcError(f"edge id {eid!r} already present")
    halves = {h for _, rot in g.vertices for h in rot}
    h1 = _fresh(halves, f"{eid}.0")
    h2 = _fresh(halves | {h1}, f"{eid}.1")
    verts = []
    for v, rot in g.vertices:
        rot = list(rot)
        if v == u:
            rot.insert(i, h1)
        elif v == w:
            rot.insert(j, h2)
        verts.append((v, rot))
    return g.replace(vertices=verts, edges=list(g.edges) + [Edge(eid, (h1, h2), twisted, weight)])


def close_piece(p: MarkedPiece, twisted: bool = False, eid: str = "e") -> Tuple[RibbonGraph, str]:
    """Rebuild A (or A with a half-twisted distinguished edge) from a marked piece."""
    eid = _fresh(p.graph.edge_ids, eid)
    return insert_edge(p.graph, (p.u, p.m_arc), (p.w, p.n_arc), twisted, eid), eid


def opened(rot: Sequence[str], gap: int) -> List[str]:
    """The rotation read counterclockwise starting just after ``gap``."""
    if not rot:
        return []
    gap %= len(rot)
    return list(rot[gap:]) + list(rot[:gap])


def two_sum(g: RibbonGraph, e: str, p: MarkedPiece, ends: str = ENDS_DEFAULT,
            flip: bool = False) -> RibbonGraph:
    """Replace edge ``e`` of ``g`` by the marked piece ``p``.

    The first end of ``e`` receives ``u``'s rotation opened at ``m_arc`` and
    the second end ``w``'s rotation opened at ``n_arc`` (``ends="swap"``
    exchanges them).  ``flip`` mirrors the piece first.  Piece ids are
    prefixed with ``"{e}/"``; piece weight labels are kept.
    """
    edge = g.edge(e)
    if edge.twisted:
        raise OrientabilityError(
            f"2-sum along twisted edge {e!r}; untwist the template first")
    if ends not in (ENDS_DEFAULT, ENDS_SWAP):
        raise InvalidArcError(f"ends must be 'default' or 'swap', got {ends!r}")
    pg = p.graph
    pre = f"{e}/"
    seq_u = [pre + h for h in opened(pg.rotation(p.u), normalize_gap(pg, p.u, p.m_arc))]
    seq_w = [pre + h for h in opened(pg.rotation(p.w), normalize_gap(pg, p.w, p.n_arc))]
    if flip:
        seq_u.reverse()
        seq_w.reverse()
    h1, h2 = edge.ends
    if ends == ENDS_SWAP:
        h1, h2 = h2, h1
    repl = {h1: seq_u, h2: seq_w}
    verts = []
    for v, rot in g.vertices:
        new_rot: List[str] = []
        for h in rot:
            new_rot.extend(repl.get(h, (h,)))
        verts.append((v, new_rot))
    for v, rot in pg.vertices:
        if v in (p.u, p.w):
            continue
        rot = [pre + h for h in rot]
        if flip:
            rot.reverse()
        verts.append((pre + v, rot))
    edges = [x for x in g.edges if x.id != e]
    for x in pg.edges:
        edges.append(Edge(pre + x.id, (pre + x.ends[0], pre + x.ends[1]), x.twisted, x.label))
    return RibbonGraph(verts, edges)


def assemble(d: TwoDecomposition, flips: Optional[Mapping[str, bool]] = None) -> RibbonGraph:
    """The graph G-hat: every template edge replaced by its piece."""
    d.checked()
    flips = flips or {}
    out = untwist(d.template)
    for e in d.template.edge_ids:
        slot = d.pieces[e]
        out = two_sum(out, e, slot.piece, slot.ends, bool(flips.get(e, False)))
    return out


def tensor(g: RibbonGraph, p: MarkedPiece, ends: Optional[Mapping[str, str]] = None,
           flips: Optional[Mapping[str, bool]] = None, relabel: bool = True) -> RibbonGraph:
    """Tensor product: every edge of ``g`` replaced by the same piece.

    With ``relabel`` the copy of the j-th piece edge inside edge e gets the
    weight label ``x_{e}_{j}``.
    """
    out = assemble(TwoDecomposition.uniform(g, p, ends), flips)
    if not relabel:
        return out
    idx = {x.id: j for j, x in enumerate(p.graph.edges, start=1)}
    weights = {}
    for x in out.edges:
        e, _, pid = x.id.partition("/")
        if pid in idx and g.has_edge(e):
            weights[x.id] = f"x_{e}_{idx[pid]}"
    return out.with_weights(weights)


# G-tilde ----------------------------------------------------------------------


def gtilde_piece(e: str) -> MarkedPiece:
    """The local piece T - e: a loop f and an edge g with (f, g, f) at the u-side."""
    t = RibbonGraph(
        [("u", ("f.0", "g.0", "f.1")), ("w", ("g.1",))],
        [Edge("f", ("f.0", "f.1"), False, f"f_{e}"), Edge("g", ("g.0", "g.1"), False, f"g_{e}")],
    )
    return MarkedPiece(t, "u", "w", 0, 0)


def check_gtilde_piece(p: MarkedPiece) -> None:
    """Assert the four-configuration invariant of the local G-tilde piece."""
    g = p.graph
    want = {
        ("g",): (True, True),
        ("f", "g"): (True, False),
        ("f",): (False, False),
        (): (False, False),
    }
    from .states import engine

    eng = engine(g)
    for included, (same_comp, same_walk) in want.items():
        got = mark_relation(g, eng.mask_of(included), p.m, p.n)
        if got != (same_comp, same_walk):
            raise ConstructionError(
                f"G-tilde local piece fails the four-configuration invariant for state {included}: {got}")


@dataclass(frozen=True)
class GTilde:
    graph: RibbonGraph
    labels: Dict[str, Tuple[str, str]]   # template edge -> (f label, g label)
    edge_ids: Dict[str, Tuple[str, str]]  # template edge -> (f edge id, g edge id)


def build_gtilde(g: RibbonGraph) -> GTilde:
    out = untwist(g)
    labels, ids = {}, {}
    for e in g.edge_ids:
        piece = gtilde_piece(e)
        check_gtilde_piece(piece)
        out = two_sum(out, e, piece)
        labels[e] = (f"f_{e}", f"g_{e}")
        ids[e] = (f"{e}/f", f"{e}/g")
    return GTilde(out, labels, ids)


# state splitting ----------------------------------------------------------------


def classify(p: MarkedPiece, mask: int) -> str:
    same_comp, same_walk = mark_relation(p.graph, mask, p.m, p.n)
    if not same_comp:
        return DDOT2
    return BAR1 if same_walk else DDOT1


@dataclass(frozen=True)
class SplitState:
    template_state: FrozenSet[str]
    piece_states: Dict[str, FrozenSet[str]]
    tags: Dict[str, str]


def split_state(d: TwoDecomposition, hat_edges: Iterable[str]) -> SplitState:
    """Decompose a state of the assembled graph into template and piece states."""
    hat_edges = set(hat_edges)
    piece_states, tags = {}, {}
    template_state = set()
    from .states import engine

    for e in d.template.edge_ids:
        p = d.piece(e)
        s_e = frozenset(x for x in p.graph.edge_ids if f"{e}/{x}" in hat_edges)
        piece_states[e] = s_e
        tag = classify(p, engine(p.graph).mask_of(s_e))
        tags[e] = tag
        if tag != DDOT2:
            template_state.add(e)
    return SplitState(frozenset(template_state), piece_states, tags)
