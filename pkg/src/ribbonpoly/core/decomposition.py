"""Marked pieces H_e and 2-decompositions (template plus one piece per edge)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from ..errors import InvalidGraphError
from .graph import RibbonGraph, normalize_gap, validate

ENDS_DEFAULT = "default"
ENDS_SWAP = "swap"


@dataclass(frozen=True)
class MarkedPiece:
    """A ribbon graph H with two distinct marked vertices and an arc at each.

    ``m_arc`` is where the distinguished edge of A attached at ``u``;
    ``n_arc`` likewise at ``w``.
    """

    graph: RibbonGraph
    u: str
    w: str
    m_arc: int = 0
    n_arc: int = 0

    def violations(self) -> List[str]:
        problems = validate(self.graph)
        if self.u == self.w:
            problems.append(f"marked vertices coincide ({self.u!r})")
        for v, gap, name in ((self.u, self.m_arc, "m_arc"), (self.w, self.n_arc, "n_arc")):
            if not self.graph.has_vertex(v):
                problems.append(f"marked vertex {v!r} not in piece")
                continue
            n = len(self.graph.rotation(v))
            if not 0 <= gap <= n:
                problems.append(f"{name}={gap} out of range at vertex {v!r} (rotation length {n})")
        return problems

    def checked(self) -> "MarkedPiece":
        problems = self.violations()
        if problems:
            raise InvalidGraphError("; ".join(problems))
        return self

    @property
    def m(self):
        return (self.u, normalize_gap(self.graph, self.u, self.m_arc))

    @property
    def n(self):
        return (self.w, normalize_gap(self.graph, self.w, self.n_arc))


@dataclass(frozen=True)
class PieceSlot:
    piece: MarkedPiece
    ends: str = ENDS_DEFAULT


@dataclass
class TwoDecomposition:
    template: RibbonGraph
    pieces: Dict[str, PieceSlot] = field(default_factory=dict)

    def violations(self) -> List[str]:
        problems = validate(self.template)
        for e in self.template.edge_ids:
            if e not in self.pieces:
                problems.append(f"template edge {e!r} has no piece")
        for e, slot in self.pieces.items():
            if not self.template.has_edge(e):
                problems.append(f"piece given for unknown template edge {e!r}")
            if slot.ends not in (ENDS_DEFAULT, ENDS_SWAP):
                problems.append(f"edge {e!r}: ends must be 'default' or 'swap', got {slot.ends!r}")
            problems.extend(f"piece {e!r}: {p}" for p in slot.piece.violations())
        return problems

    def checked(self) -> "TwoDecomposition":
        problems = self.violations()
        if problems:
            raise InvalidGraphError("; ".join(problems))
        return self

    def piece(self, e: str) -> MarkedPiece:
        return self.pieces[e].piece

    def total_edges(self) -> int:
        return sum(self.piece(e).graph.num_edges() for e in self.template.edge_ids)

    @classmethod
    def uniform(cls, template: RibbonGraph, piece: MarkedPiece,
                ends: Optional[Mapping[str, str]] = None) -> "TwoDecomposition":
        ends = ends or {}
        return cls(template, {e: PieceSlot(piece, ends.get(e, ENDS_DEFAULT)) for e in template.edge_ids})
