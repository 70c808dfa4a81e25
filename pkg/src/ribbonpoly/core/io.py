"""JSON (de)serialization for graphs, marked pieces and decompositions.

Graph::

    {"vertices": [{"id": "u", "rotation": ["h1"]}, ...],
     "edges": [{"id": "e", "ends": ["h1", "h2"], "twisted": false, "weight": null}, ...]}

A piece adds ``u``, ``w``, ``m_arc``, ``n_arc``.  A decomposition is
``{"template": <graph or path>, "pieces": {edge: {"piece": <piece or path>, "ends": "default"}}}``
where paths are resolved relative to the decomposition file.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..errors import GraphFormatError
from .decomposition import ENDS_DEFAULT, MarkedPiece, PieceSlot, TwoDecomposition
from .graph import Edge, RibbonGraph

PathLike = Union[str, Path]


def graph_from_dict(data: Dict[str, Any]) -> RibbonGraph:
    try:
        verts = [(str(v["id"]), [str(h) for h in v.get("rotation", [])]) for v in data["vertices"]]
        edges = []
        for e in data.get("edges", []):
            ends = [str(h) for h in e["ends"]]
            if len(ends) != 2:
                raise GraphFormatError(f"edge {e.get('id')!r} must list two ends")
            edges.append(Edge(str(e["id"]), (ends[0], ends[1]), bool(e.get("twisted", False)),
                              e.get("weight")))
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"malformed graph JSON: {exc}") from None
    return RibbonGraph(verts, edges)


def graph_to_dict(g: RibbonGraph) -> Dict[str, Any]:
    return {
        "vertices": [{"id": v, "rotation": list(rot)} for v, rot in g.vertices],
        "edges": [{"id": e.id, "ends": list(e.ends), "twisted": e.twisted, "weight": e.weight}
                  for e in g.edges],
    }


def piece_from_dict(data: Dict[str, Any]) -> MarkedPiece:
    g = graph_from_dict(data)
    try:
        return MarkedPiece(g, str(data["u"]), str(data["w"]),
                           int(data.get("m_arc", 0)), int(data.get("n_arc", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"malformed piece JSON: {exc}") from None


def piece_to_dict(p: MarkedPiece) -> Dict[str, Any]:
    out = graph_to_dict(p.graph)
    out.update(u=p.u, w=p.w, m_arc=p.m_arc, n_arc=p.n_arc)
    return out


def _load_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: invalid JSON ({exc})") from None


def _resolve(ref: Any, base: Optional[Path]) -> Dict[str, Any]:
    if isinstance(ref, str):
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        return _load_json(path)
    if isinstance(ref, dict):
        return ref
    raise GraphFormatError(f"expected an inline object or a file path, got {type(ref).__name__}")


def decomposition_from_dict(data: Dict[str, Any], base: Optional[Path] = None) -> TwoDecomposition:
    try:
        template = graph_from_dict(_resolve(data["template"], base))
        pieces = {}
        for e, entry in data["pieces"].items():
            if isinstance(entry, dict) and "piece" in entry:
                ref, ends = entry["piece"], entry.get("ends", ENDS_DEFAULT)
            else:
                ref, ends = entry, ENDS_DEFAULT
            pieces[str(e)] = PieceSlot(piece_from_dict(_resolve(ref, base)), ends)
    except (KeyError, TypeError, AttributeError) as exc:
        raise GraphFormatError(f"malformed decomposition JSON: {exc}") from None
    return TwoDecomposition(template, pieces)


def decomposition_to_dict(d: TwoDecomposition) -> Dict[str, Any]:
    return {
        "template": graph_to_dict(d.template),
        "pieces": {e: {"piece": piece_to_dict(s.piece), "ends": s.ends} for e, s in d.pieces.items()},
    }


def load_graph(path: PathLike) -> RibbonGraph:
    return graph_from_dict(_load_json(path))


def load_piece(path: PathLike) -> MarkedPiece:
    return piece_from_dict(_load_json(path))


def load_decomposition(path: PathLike) -> TwoDecomposition:
    return decomposition_from_dict(_load_json(path), Path(path).parent)


def dump_json(obj: Dict[str, Any], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
