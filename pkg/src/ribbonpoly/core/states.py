"""Spanning states and their topological counts k, e, r, n, boundary and t.

Boundary walks are traced on "side points": every included half-edge ``h``
has a start point ``h-`` and an end point ``h+`` in counterclockwise order
around its vertex.  The disk boundary joins ``h+`` to ``next(h)-`` (next
included half-edge at the vertex) and each ribbon joins its two ends,
side-preserving when untwisted (``h1+``-``h2-``, ``h1-``-``h2+``) and
side-swapping when twisted.  Every point then has degree two; the cycles are
the boundary components, plus one per vertex with no included half-edge.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .graph import RibbonGraph, normalize_gap

Mark = Tuple[str, int]


class StateEngine:
    """Integer-compiled view of a ribbon graph for fast per-state counting.

    States are bit masks over ``graph.edges`` in order; edge ``j`` owns
    half-edges ``2j`` (its first end) and ``2j+1``.
    """

    def __init__(self, g: RibbonGraph):
        self.graph = g
        self.edge_ids = [e.id for e in g.edges]
        self.eindex = {eid: j for j, eid in enumerate(self.edge_ids)}
        self.vertex_ids = [v for v, _ in g.vertices]
        self.vindex = {v: i for i, v in enumerate(self.vertex_ids)}
        hid = {}
        for j, e in enumerate(g.edges):
            hid[e.ends[0]] = 2 * j
            hid[e.ends[1]] = 2 * j + 1
        self.rot: List[List[int]] = [[hid[h] for h in rot] for _, rot in g.vertices]
        self.half_vertex = [0] * (2 * len(g.edges))
        for i, rot in enumerate(self.rot):
            for h in rot:
                self.half_vertex[h] = i
        self.twist = [e.twisted for e in g.edges]
        self.ends_v = [(self.half_vertex[2 * j], self.half_vertex[2 * j + 1]) for j in range(len(g.edges))]
        self.nv = len(self.vertex_ids)
        self.ne = len(self.edge_ids)
        self.full_mask = (1 << self.ne) - 1

    def mask_of(self, edges: Iterable[str]) -> int:
        m = 0
        for eid in edges:
            m |= 1 << self.eindex[eid]
        return m

    def edges_of(self, mask: int) -> FrozenSet[str]:
        return frozenset(eid for j, eid in enumerate(self.edge_ids) if mask >> j & 1)

    # counts -------------------------------------------------------------

    def components(self, mask: int) -> List[int]:
        """Component representative per vertex (union-find)."""
        parent = list(range(self.nv))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for j in range(self.ne):
            if mask >> j & 1:
                a, b = self.ends_v[j]
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        return [find(i) for i in range(self.nv)]

    def k(self, mask: int) -> int:
        return len(set(self.components(mask)))

    def t(self, mask: int) -> int:
        """1 iff some cycle of included edges carries an odd number of twists."""
        parent = list(range(self.nv))
        parity = [0] * self.nv

        def find(x: int) -> Tuple[int, int]:
            p = 0
            while parent[x] != x:
                p ^= parity[x]
                x = parent[x]
            return x, p

        for j in range(self.ne):
            if mask >> j & 1:
                a, b = self.ends_v[j]
                ra, pa = find(a)
                rb, pb = find(b)
                tw = 1 if self.twist[j] else 0
                if ra == rb:
                    if pa ^ pb ^ tw:
                        return 1
                else:
                    parent[ra] = rb
                    parity[ra] = pa ^ pb ^ tw
        return 0

    def boundary(self, mask: int, marks: Sequence[Tuple[int, int]] = ()) -> Tuple[int, List[int]]:
        """Boundary count and the walk id of each ``(vertex index, gap)`` mark."""
        npts = 4 * self.ne
        disk = [-1] * npts
        rib = [-1] * npts
        count = 0
        isolated: Dict[int, int] = {}
        for i, rot in enumerate(self.rot):
            inc = [h for h in rot if mask >> (h >> 1) & 1]
            if not inc:
                isolated[i] = count
                count += 1
                continue
            prev = inc[-1]
            for h in inc:
                # prev+ is joined to h- along the disk
                disk[2 * prev + 1] = 2 * h
                disk[2 * h] = 2 * prev + 1
                prev = h
        for j in range(self.ne):
            if mask >> j & 1:
                h1, h2 = 2 * j, 2 * j + 1
                if self.twist[j]:
                    pairs = ((2 * h1 + 1, 2 * h2 + 1), (2 * h1, 2 * h2))
                else:
                    pairs = ((2 * h1 + 1, 2 * h2), (2 * h1, 2 * h2 + 1))
                for p, q in pairs:
                    rib[p] = q
                    rib[q] = p
        walk = [-1] * npts
        for p in range(npts):
            if disk[p] < 0 or walk[p] >= 0:
                continue
            q = p
            while True:
                walk[q] = count
                q2 = disk[q]
                walk[q2] = count
                q = rib[q2]
                if q == p:
                    break
            count += 1
        labels = []
        for vi, gap in marks:
            if vi in isolated:
                labels.append(isolated[vi])
                continue
            rot = self.rot[vi]
            n = len(rot)
            for step in range(n):
                h = rot[(gap + step) % n]
                if mask >> (h >> 1) & 1:
                    labels.append(walk[2 * h])
                    break
        return count, labels

    def stats(self, mask: int) -> Tuple[int, int, int]:
        """``(k, boundary, t)`` of a state."""
        return self.k(mask), self.boundary(mask)[0], self.t(mask)

    def mark_index(self, v: str, gap: int) -> Tuple[int, int]:
        return self.vindex[v], normalize_gap(self.graph, v, gap)

    def all_masks(self) -> Iterator[int]:
        return iter(range(1 << self.ne))


@functools.lru_cache(maxsize=512)
def engine(g: RibbonGraph) -> StateEngine:
    return StateEngine(g)


@dataclass(frozen=True)
class SpanningState:
    graph: RibbonGraph
    included: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, "included", frozenset(self.included))
        unknown = [e for e in self.included if not self.graph.has_edge(e)]
        if unknown:
            from ..errors import UnknownIdError

            raise UnknownIdError(f"state includes unknown edges {sorted(unknown)}")

    @classmethod
    def full(cls, g: RibbonGraph) -> "SpanningState":
        return cls(g, frozenset(g.edge_ids))

    @classmethod
    def empty(cls, g: RibbonGraph) -> "SpanningState":
        return cls(g, frozenset())

    @property
    def mask(self) -> int:
        return engine(self.graph).mask_of(self.included)

    @property
    def e(self) -> int:
        return len(self.included)

    @property
    def v(self) -> int:
        return self.graph.num_vertices()

    @property
    def k(self) -> int:
        return component_count(self)

    @property
    def r(self) -> int:
        return rank_nullity(self)[0]

    @property
    def n(self) -> int:
        return rank_nullity(self)[1]

    @property
    def boundary(self) -> int:
        return boundary_components(self)[0]

    @property
    def t(self) -> int:
        return orientable_marker(self)

    def euler_genus(self) -> int:
        """``2k - v + e - boundary``; twice the genus when orientable."""
        return 2 * self.k - self.v + self.e - self.boundary


def all_states(g: RibbonGraph) -> Iterator[SpanningState]:
    eng = engine(g)
    for m in eng.all_masks():
        yield SpanningState(g, eng.edges_of(m))


def boundary_components(s: SpanningState) -> Tuple[int, Dict[Mark, int]]:
    """Boundary count and the walk containing every arc position of every vertex."""
    eng = engine(s.graph)
    marks = [(eng.vindex[v], gap) for v in eng.vertex_ids for gap in range(s.graph.gap_count(v))]
    count, labels = eng.boundary(s.mask, marks)
    orbits = {(eng.vertex_ids[vi], gap): lab for (vi, gap), lab in zip(marks, labels)}
    return count, orbits


def component_count(s: SpanningState) -> int:
    return engine(s.graph).k(s.mask)


def rank_nullity(s: SpanningState) -> Tuple[int, int]:
    r = s.graph.num_vertices() - component_count(s)
    return r, len(s.included) - r


def orientable_marker(s: SpanningState) -> int:
    return engine(s.graph).t(s.mask)


def mark_relation(g: RibbonGraph, mask: int, m1: Mark, m2: Mark) -> Tuple[bool, bool]:
    """(same component, same boundary walk) for two arc marks in a state."""
    eng = engine(g)
    i1, g1 = eng.mark_index(*m1)
    i2, g2 = eng.mark_index(*m2)
    comps = eng.components(mask)
    _, (b1, b2) = eng.boundary(mask, [(i1, g1), (i2, g2)])
    return comps[i1] == comps[i2], b1 == b2


def genus(g: RibbonGraph) -> int:
    """Genus of an orientable ribbon graph (full state)."""
    s = SpanningState.full(g)
    if s.t:
        from ..errors import OrientabilityError

        raise OrientabilityError("genus requested for a non-orientable ribbon graph")
    return s.euler_genus() // 2
