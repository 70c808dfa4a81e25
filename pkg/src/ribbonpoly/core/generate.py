"""Seeded random and exhaustive generators for ribbon graphs, marked pieces
and 2-decompositions.  Used by the test suites and ``verify``."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Sequence, Tuple

from .decomposition import ENDS_DEFAULT, ENDS_SWAP, MarkedPiece, PieceSlot, TwoDecomposition
from .graph import Edge, RibbonGraph


def _connected(n: int, pairs: Sequence[Tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)}) == 1


def _build(rng: random.Random, n_vertices: int, pairs: Sequence[Tuple[int, int]],
           twist_prob: float, prefix: str = "") -> RibbonGraph:
    darts: List[List[str]] = [[] for _ in range(n_vertices)]
    edges = []
    for i, (a, b) in enumerate(pairs):
        eid = f"{prefix}e{i}"
        h0, h1 = f"{eid}.0", f"{eid}.1"
        darts[a].append(h0)
        darts[b].append(h1)
        edges.append(Edge(eid, (h0, h1), rng.random() < twist_prob))
    for rot in darts:
        rng.shuffle(rot)
    return RibbonGraph([(f"{prefix}v{i}", rot) for i, rot in enumerate(darts)], edges)


def random_graph(rng: random.Random, n_vertices: int, n_edges: int, twist_prob: float = 0.0,
                 connected: bool = True, loop_prob: float = 0.2, prefix: str = "") -> RibbonGraph:
    """Random signed rotation system; loops appear with probability ``loop_prob`` per edge."""
    if connected and n_vertices > 1 and n_edges < n_vertices - 1:
        raise ValueError("too few edges for a connected graph")
    for _ in range(1000):
        pairs = []
        for _ in range(n_edges):
            a = rng.randrange(n_vertices)
            if n_vertices == 1 or rng.random() < loop_prob:
                b = a
            else:
                b = rng.choice([x for x in range(n_vertices) if x != a])
            pairs.append((a, b))
        if not connected or _connected(n_vertices, pairs):
            return _build(rng, n_vertices, pairs, twist_prob, prefix)
    raise RuntimeError("could not sample a connected graph")


def random_piece(rng: random.Random, max_vertices: int = 3, max_edges: int = 3,
                 twist_prob: float = 0.0, planar: Optional[bool] = None,
                 min_edges: int = 0, joined: Optional[bool] = None) -> MarkedPiece:
    """Random marked piece whose closure A = H + e is connected.

    ``planar=True`` keeps only genus-0 closures, ``False`` only positive genus.
    ``joined=True`` keeps u and w in one component of H (as tensor products
    require), ``False`` only pieces where e is a bridge of A.
    """
    from .states import SpanningState
    from .surgery import close_piece

    for _ in range(5000):
        nv = rng.randint(2, max(2, max_vertices))
        ne = rng.randint(max(min_edges, 0), max_edges)
        pairs = [(rng.randrange(nv), rng.randrange(nv)) for _ in range(ne)]
        if not _connected(nv, pairs + [(0, 1)]):
            continue
        if joined is not None and joined != _connected(nv, pairs):
            continue
        g = _build(rng, nv, pairs, twist_prob)
        u, w = "v0", "v1"
        p = MarkedPiece(g, u, w, rng.randint(0, len(g.rotation(u))), rng.randint(0, len(g.rotation(w))))
        if planar is not None:
            s = SpanningState.full(close_piece(p)[0])
            if s.t:
                continue
            if planar != (s.euler_genus() == 0):
                continue
        return p
    raise RuntimeError("could not sample a piece with the requested properties")


def random_decomposition(rng: random.Random, template_edges: int = 3, max_total: int = 12,
                         template_vertices: Optional[int] = None, planar: Optional[bool] = None,
                         piece_edges: int = 3, swap_prob: float = 0.25,
                         template_loop_prob: float = 0.2) -> TwoDecomposition:
    """Random decomposition with at most ``max_total`` piece edges in all."""
    nv = template_vertices or rng.randint(1, template_edges + 1)
    nv = max(1, min(nv, template_edges + 1))
    template = random_graph(rng, nv, template_edges, loop_prob=template_loop_prob, prefix="t")
    budget = max_total
    pieces = {}
    left = template_edges
    for e in template.edge_ids:
        left -= 1
        cap = max(0, min(piece_edges, budget - left))
        p = random_piece(rng, 3, cap, planar=planar)
        budget -= p.graph.num_edges()
        ends = ENDS_SWAP if rng.random() < swap_prob else ENDS_DEFAULT
        pieces[e] = PieceSlot(p, ends)
    return TwoDecomposition(template, pieces)


def all_small_graphs(max_edges: int, max_vertices: int = 3, twisted: bool = True) -> Iterator[RibbonGraph]:
    """Every labeled signed rotation system with up to ``max_edges`` edges.

    Darts are distributed over 1..max_vertices ordered vertices (empty
    vertices allowed only as the sole vertex), each vertex rotation is a
    cyclic order with its smallest dart first, and every twist pattern is
    produced when ``twisted`` is set.
    """
    yield RibbonGraph([("v0", ())])
    for ne in range(1, max_edges + 1):
        darts = list(range(2 * ne))
        for nv in range(1, max_vertices + 1):
            for assign in itertools.product(range(nv), repeat=2 * ne):
                if len(set(assign)) != nv:
                    continue
                groups = [[d for d in darts if assign[d] == v] for v in range(nv)]
                # canonical vertex order: by smallest dart
                if [g[0] for g in groups] != sorted(g[0] for g in groups):
                    continue
                cyclic = [[(g[0],) + rest for rest in itertools.permutations(g[1:])] for g in groups]
                for rots in itertools.product(*cyclic):
                    twist_sets = itertools.product((False, True), repeat=ne) if twisted else [(False,) * ne]
                    for tw in twist_sets:
                        verts = [(f"v{i}", [f"h{d}" for d in rot]) for i, rot in enumerate(rots)]
                        edges = [Edge(f"e{i}", (f"h{2 * i}", f"h{2 * i + 1}"), tw[i]) for i in range(ne)]
                        yield RibbonGraph(verts, edges)


def eta_ddot1_pieces() -> List[MarkedPiece]:
    """Deterministic pieces with η̈¹ ≠ 0 (marks in one component, on different walks)."""
    from ..statesum import eta_sums_full, interlaced_piece, parallel_piece, path_piece

    out = [interlaced_piece()]
    for k in (2, 3, 4):
        base = parallel_piece(k)
        for m in range(1, k):
            out.append(MarkedPiece(base.graph, "u", "w", m, 0))
    for length in (2, 3):
        base = path_piece(length)
        # a loop at u separating the two sides of the mark
        g = base.graph
        rot = list(g.rotation("u"))
        verts = [(v, (["l.0"] + rot + ["l.1"]) if v == "u" else r) for v, r in g.vertices]
        lg = RibbonGraph(verts, list(g.edges) + [Edge("l", ("l.0", "l.1"))])
        out.append(MarkedPiece(lg, "u", "w", 1, 0))
    return [p for p in out if not eta_sums_full(p)["eta_ddot1"].is_zero()]


def random_eta_ddot1_pieces(rng: random.Random, count: int, max_edges: int = 5) -> List[MarkedPiece]:
    from ..statesum import eta_sums_full

    out = []
    while len(out) < count:
        p = random_piece(rng, 3, max_edges, min_edges=2)
        if not eta_sums_full(p)["eta_ddot1"].is_zero():
            out.append(p)
    return out
