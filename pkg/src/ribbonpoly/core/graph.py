"""Ribbon graphs as signed rotation systems.

A vertex carries a cyclic (counterclockwise) sequence of half-edge ids.  An
edge owns two half-edges, a twist parity and an optional weight label.  Arc
positions ("gaps") at a vertex are indexed so that gap ``i`` sits just
before ``rotation[i]``; gap ``len(rotation)`` is the same gap as ``0`` and an
empty rotation has the single gap ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class Edge:
    id: str
    ends: Tuple[str, str]
    twisted: bool = False
    weight: Optional[str] = None

    @property
    def label(self) -> str:
        """Variable name used for this edge in multivariate sums."""
        return self.weight if self.weight is not None else f"x_{self.id}"


class RibbonGraph:
    """Immutable signed rotation system.

    Construction does not validate; call :func:`validate` (or
    :meth:`checked`) to get a list of invariant violations.
    """

    __slots__ = ("vertices", "edges", "_half_vertex", "_half_edge", "_edge_by_id", "_rot_by_id")

    def __init__(self, vertices: Iterable[Tuple[str, Sequence[str]]], edges: Iterable[Edge] = ()):
        self.vertices: Tuple[Tuple[str, Tuple[str, ...]], ...] = tuple(
            (str(v), tuple(rot)) for v, rot in vertices
        )
        self.edges: Tuple[Edge, ...] = tuple(edges)
        self._half_vertex: Dict[str, Tuple[str, int]] = {}
        for v, rot in self.vertices:
            for i, h in enumerate(rot):
                self._half_vertex.setdefault(h, (v, i))
        self._half_edge: Dict[str, Tuple[Edge, int]] = {}
        for e in self.edges:
            for side, h in enumerate(e.ends):
                self._half_edge.setdefault(h, (e, side))
        self._edge_by_id = {e.id: e for e in self.edges}
        self._rot_by_id = dict(self.vertices)

    # basic queries ------------------------------------------------------

    def checked(self) -> "RibbonGraph":
        problems = validate(self)
        if problems:
            from ..errors import InvalidGraphError

            raise InvalidGraphError("; ".join(problems))
        return self

    @property
    def vertex_ids(self) -> List[str]:
        return [v for v, _ in self.vertices]

    @property
    def edge_ids(self) -> List[str]:
        return [e.id for e in self.edges]

    def num_vertices(self) -> int:
        return len(self.vertices)

    def num_edges(self) -> int:
        return len(self.edges)

    def has_vertex(self, v: str) -> bool:
        return v in self._rot_by_id

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_by_id

    def rotation(self, v: str) -> Tuple[str, ...]:
        return self._rot_by_id[v]

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_by_id[eid]
        except KeyError:
            from ..errors import UnknownIdError

            raise UnknownIdError(f"unknown edge id {eid!r}") from None

    def half_vertex(self, h: str) -> str:
        return self._half_vertex[h][0]

    def half_position(self, h: str) -> int:
        return self._half_vertex[h][1]

    def half_owner(self, h: str) -> Edge:
        return self._half_edge[h][0]

    def other_half(self, h: str) -> str:
        e, side = self._half_edge[h]
        return e.ends[1 - side]

    def endpoints(self, eid: str) -> Tuple[str, str]:
        e = self.edge(eid)
        return self.half_vertex(e.ends[0]), self.half_vertex(e.ends[1])

    def is_loop(self, eid: str) -> bool:
        u, w = self.endpoints(eid)
        return u == w

    def labels(self) -> List[str]:
        return [e.label for e in self.edges]

    def is_untwisted(self) -> bool:
        return not any(e.twisted for e in self.edges)

    def gap_count(self, v: str) -> int:
        """Number of distinct arc positions at ``v``."""
        return max(1, len(self.rotation(v)))

    # rebuilding ---------------------------------------------------------

    def replace(self, vertices=None, edges=None) -> "RibbonGraph":
        return RibbonGraph(self.vertices if vertices is None else vertices,
                           self.edges if edges is None else edges)

    def with_weights(self, weights: Dict[str, Optional[str]]) -> "RibbonGraph":
        """Return a copy with the given edge-id to weight-label overrides."""
        return self.replace(edges=[
            Edge(e.id, e.ends, e.twisted, weights.get(e.id, e.weight)) for e in self.edges
        ])

    def with_uniform_weight(self, label: str) -> "RibbonGraph":
        return self.with_weights({e.id: label for e in self.edges})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RibbonGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"RibbonGraph(v={len(self.vertices)}, e={len(self.edges)})"


def validate(g: RibbonGraph) -> List[str]:
    """Every invariant violation of ``g``, each naming the offending id."""
    problems: List[str] = []
    seen_v = set()
    where: Dict[str, str] = {}
    for v, rot in g.vertices:
        if v in seen_v:
            problems.append(f"duplicate vertex id {v!r}")
        seen_v.add(v)
        for h in rot:
            if h in where:
                if where[h] == v:
                    problems.append(f"half-edge {h!r} listed twice at vertex {v!r}")
                else:
                    problems.append(f"half-edge {h!r} appears in rotations of {where[h]!r} and {v!r}")
            else:
                where[h] = v
    seen_e = set()
    owner: Dict[str, str] = {}
    for e in g.edges:
        if e.id in seen_e:
            problems.append(f"duplicate edge id {e.id!r}")
        seen_e.add(e.id)
        if len(e.ends) != 2:
            problems.append(f"edge {e.id!r} must have exactly two half-edges")
            continue
        if e.ends[0] == e.ends[1]:
            problems.append(f"edge {e.id!r} uses half-edge {e.ends[0]!r} twice")
        for h in e.ends:
            if h not in where:
                problems.append(f"edge {e.id!r} references half-edge {h!r} missing from every rotation")
            if h in owner and owner[h] != e.id:
                problems.append(f"half-edge {h!r} belongs to edges {owner[h]!r} and {e.id!r}")
            owner.setdefault(h, e.id)
    for h, v in where.items():
        if h not in owner:
            problems.append(f"half-edge {h!r} at vertex {v!r} belongs to no edge")
    return problems


def normalize_gap(g: RibbonGraph, v: str, gap: int) -> int:
    """Map a gap index into ``range(gap_count)``; raise on out-of-range input."""
    n = len(g.rotation(v))
    if not 0 <= gap <= n:
        from ..errors import InvalidArcError

        raise InvalidArcError(f"arc {gap} out of range at vertex {v!r} (rotation length {n})")
    return gap % n if n else 0


# small builders ---------------------------------------------------------------


def make_graph(vertices: Dict[str, Sequence[str]], edges: Dict[str, Tuple[str, str]],
               twisted: Iterable[str] = (), weights: Optional[Dict[str, str]] = None) -> RibbonGraph:
    """Compact constructor: ``edges`` maps edge id to its two half-edge ids."""
    tw = set(twisted)
    weights = weights or {}
    return RibbonGraph(
        list(vertices.items()),
        [Edge(eid, tuple(ends), eid in tw, weights.get(eid)) for eid, ends in edges.items()],
    )


def from_darts(rotations: Sequence[Sequence[int]], twisted: Sequence[bool] = ()) -> RibbonGraph:
    """Build a graph from integer darts; edge ``i`` joins darts ``2i`` and ``2i+1``."""
    n_darts = sum(len(r) for r in rotations)
    n_edges = n_darts // 2
    tw = list(twisted) + [False] * (n_edges - len(twisted))
    verts = [(f"v{i}", [f"h{d}" for d in rot]) for i, rot in enumerate(rotations)]
    edges = [Edge(f"e{i}", (f"h{2 * i}", f"h{2 * i + 1}"), bool(tw[i])) for i in range(n_edges)]
    return RibbonGraph(verts, edges)


def single_vertex(vid: str = "v") -> RibbonGraph:
    return RibbonGraph([(vid, ())])


def single_edge(eid: str = "e") -> RibbonGraph:
    return make_graph({"u": [f"{eid}.0"], "w": [f"{eid}.1"]}, {eid: (f"{eid}.0", f"{eid}.1")})


def cycle_graph(n: int, prefix: str = "") -> RibbonGraph:
    """Plane cycle C_n (n >= 1; C_1 is a loop, C_2 a digon)."""
    if n == 1:
        return bouquet(1)
    verts = {}
    edges = {}
    for i in range(n):
        edges[f"{prefix}e{i}"] = (f"{prefix}e{i}.0", f"{prefix}e{i}.1")
    for i in range(n):
        # edge i runs from vertex i to vertex i+1
        verts[f"{prefix}v{i}"] = [f"{prefix}e{i}.0", f"{prefix}e{(i - 1) % n}.1"]
    return make_graph(verts, edges)


def bouquet(n: int, interlaced: bool = False, twisted: Iterable[int] = ()) -> RibbonGraph:
    """One vertex with ``n`` loops, nested (planar) or fully interlaced."""
    if interlaced:
        rot = [f"e{i}.0" for i in range(n)] + [f"e{i}.1" for i in range(n)]
    else:
        rot = []
        for i in range(n):
            rot += [f"e{i}.0", f"e{i}.1"]
    tw = {f"e{i}" for i in twisted}
    return make_graph({"v": rot}, {f"e{i}": (f"e{i}.0", f"e{i}.1") for i in range(n)}, tw)
