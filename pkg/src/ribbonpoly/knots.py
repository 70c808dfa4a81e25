"""Link diagrams in PD notation, their all-A ribbon graphs, the Kauffman
bracket through the Bollobás-Riordan polynomial, and the Jones polynomial.

PD convention: ``X(a,b,c,d)`` lists the four arcs at a crossing
counterclockwise, starting from the incoming under-strand, so the under
strand runs a -> c.  The A-smoothing joins (a,b) and (c,d); the B-smoothing
joins (a,d) and (b,c).  A crossing is positive when its over-strand runs
d -> b.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .core.graph import Edge, RibbonGraph
from .core.states import SpanningState
from .core.surgery import untwist
from .errors import BudgetExceededError, ConstructionError, OrientabilityError, PDParseError
from .poly import MultiPoly, RationalFn
from .statesum import br_polynomial

Crossing = Tuple[Hashable, Hashable, Hashable, Hashable]
Position = Tuple[int, int]

A = MultiPoly.var("A")
LOOP = -A ** 2 - A ** -2  # value of an extra circle

ORACLE_LIMIT = 16


@dataclass(frozen=True)
class LinkDiagram:
    crossings: Tuple[Crossing, ...]

    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def arcs(self) -> List[Hashable]:
        seen = []
        for x in self.crossings:
            for arc in x:
                if arc not in seen:
                    seen.append(arc)
        return seen

    def positions(self) -> Dict[Hashable, List[Position]]:
        out: Dict[Hashable, List[Position]] = {}
        for ci, x in enumerate(self.crossings):
            for s, arc in enumerate(x):
                out.setdefault(arc, []).append((ci, s))
        return out

    def other_end(self, pos: Position, table=None) -> Position:
        table = table or self.positions()
        ci, s = pos
        p1, p2 = table[self.crossings[ci][s]]
        return p2 if p1 == pos else p1

    def to_text(self) -> str:
        return " ".join("X(" + ",".join(str(a) for a in x) + ")" for x in self.crossings)


# parsing -----------------------------------------------------------------------------

_TUPLE = re.compile(r"[XP]?\s*[\(\[\{]\s*([^\)\]\}\(\[\{]*?)\s*[\)\]\}]")


def _arc(tok: str):
    tok = tok.strip()
    if not tok:
        raise PDParseError("empty arc id")
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``X(1,5,2,4) X(3,1,4,6) ...`` (also ``X[...]`` or ``[[1,5,2,4], ...]``).

    Lines starting with ``#`` are comments.  Empty input is the
    crossingless unknot.
    """
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    body = body.strip()
    if body.startswith("[[") or body.startswith("{{"):
        body = body[1:-1]
    crossings = []
    pos = 0
    for m in _TUPLE.finditer(body):
        gap = body[pos:m.start()]
        if gap.strip(" \t\n,;"):
            raise PDParseError(f"unexpected text {gap.strip()!r} in PD code")
        pos = m.end()
        parts = m.group(1).split(",")
        if len(parts) != 4:
            raise PDParseError(f"crossing {m.group(0)!r} must have four arcs")
        crossings.append(tuple(_arc(p) for p in parts))
    if body[pos:].strip(" \t\n,;"):
        raise PDParseError(f"unexpected text {body[pos:].strip()!r} in PD code")
    d = LinkDiagram(tuple(crossings))
    for arc, where in d.positions().items():
        if len(where) != 2:
            raise PDParseError(f"arc {arc!r} appears {len(where)} times (must be exactly twice)")
    return d


def load_pd(path) -> LinkDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse_pd(fh.read())


# orientation, signs and writhe -------------------------------------------------------


class OrientationError(PDParseError):
    pass


def _numbering_says_d_to_b(b, d) -> bool:
    if isinstance(b, int) and isinstance(d, int):
        return b - d == 1 or d - b > 1
    return True


def components(d: LinkDiagram) -> List[List[Position]]:
    """Each component as its cyclic list of arrival positions.

    Components passing under somewhere are oriented by the PD convention;
    all-over components fall back to consecutive arc numbering.
    """
    table = d.positions()
    visited = set()
    comps: List[List[Position]] = []

    def trace(start: Position) -> List[Position]:
        out = []
        p = start
        while True:
            ci, s = p
            if s == 2:
                raise OrientationError(
                    f"crossing {ci}: under-strand traversed against the PD convention")
            out.append(p)
            q = (ci, s ^ 2)
            visited.add(p)
            visited.add(q)
            p = d.other_end(q, table)
            if p == start:
                return out
            if p in visited:
                raise OrientationError("inconsistent arc orientation in PD code")

    for ci in range(len(d.crossings)):
        if (ci, 0) not in visited:
            comps.append(trace((ci, 0)))
    for ci, x in enumerate(d.crossings):
        if (ci, 1) in visited or (ci, 3) in visited:
            continue
        start = (ci, 3) if _numbering_says_d_to_b(x[1], x[3]) else (ci, 1)
        comps.append(trace(start))
    return comps


def crossing_signs(d: LinkDiagram) -> List[int]:
    signs = [0] * len(d.crossings)
    for comp in components(d):
        for ci, s in comp:
            if s == 3:
                signs[ci] = 1
            elif s == 1:
                signs[ci] = -1
    return signs


def writhe(d: LinkDiagram) -> int:
    return sum(crossing_signs(d))


def num_components(d: LinkDiagram) -> int:
    return len(components(d)) if d.crossings else 1


def relabel_consecutive(d: LinkDiagram) -> LinkDiagram:
    """Renumber arcs 1, 2, ... along each oriented component."""
    if not d.crossings:
        return d
    new: Dict[Tuple[int, int], int] = {}
    label = 0
    for comp in components(d):
        for ci, s in comp:
            label += 1
            # the arc leaving this crossing along the component
            new[(ci, s ^ 2)] = label
    table = d.positions()
    out = []
    for ci, x in enumerate(d.crossings):
        row = []
        for s in range(4):
            if (ci, s) in new:
                row.append(new[(ci, s)])
            else:
                row.append(new[d.other_end((ci, s), table)])
        out.append(tuple(row))
    return LinkDiagram(tuple(out))


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing."""
    signs = crossing_signs(d)
    out = []
    for (a, b, c, dd), sgn in zip(d.crossings, signs):
        # the old over-strand becomes the under-strand, entering at its tail
        out.append((dd, a, b, c) if sgn > 0 else (b, c, dd, a))
    return LinkDiagram(tuple(out))


# all-A state and its ribbon graph --------------------------------------------------------


@dataclass(frozen=True)
class StateCircles:
    """Circles of the all-A smoothing as cyclic lists of ``(crossing, corner, left)``.

    Corner 0 is the smoothing strand joining slots (a, b), corner 1 joins
    (c, d).  ``left`` records whether the crossing's chord lies to the left
    of the traversal direction.
    """

    circles: Tuple[Tuple[Tuple[int, int, bool], ...], ...]
    chords: Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...]  # per crossing: (circle, index) per corner


def all_a_state(d: LinkDiagram) -> StateCircles:
    if not d.crossings:
        return StateCircles(((),), ())
    table = d.positions()
    seen = set()
    circles = []
    for ci0 in range(len(d.crossings)):
        for s0 in range(4):
            if (ci0, s0) in seen:
                continue
            visits = []
            p = (ci0, s0)
            while p not in seen:
                ci, s = p
                out = s ^ 1
                seen.add(p)
                seen.add((ci, out))
                visits.append((ci, s >> 1, out == (s + 1) % 4))
                p = d.other_end((ci, out), table)
            circles.append(tuple(visits))
    where: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for k, circ in enumerate(circles):
        for i, (ci, corner, _) in enumerate(circ):
            where[(ci, corner)] = (k, i)
    chords = tuple((where[(ci, 0)], where[(ci, 1)]) for ci in range(len(d.crossings)))
    return StateCircles(tuple(circles), chords)


def ribbon_of_diagram(d: LinkDiagram) -> RibbonGraph:
    """The all-A ribbon graph: one vertex per circle, one edge per crossing."""
    st = all_a_state(d)
    verts = []
    side: Dict[Tuple[int, int], bool] = {}
    for k, circ in enumerate(st.circles):
        verts.append((f"c{k}", [f"x{ci}.{corner}" for ci, corner, _ in circ]))
        for ci, corner, left in circ:
            side[(ci, corner)] = left
    edges = [Edge(f"x{ci}", (f"x{ci}.0", f"x{ci}.1"), side[(ci, 0)] != side[(ci, 1)])
             for ci in range(len(d.crossings))]
    g = RibbonGraph(verts, edges)
    try:
        g = untwist(g)
    except OrientabilityError:
        raise ConstructionError("all-A ribbon graph failed to untwist") from None
    if SpanningState.full(g).t:
        raise ConstructionError("all-A ribbon graph is non-orientable")
    return g


# brackets -----------------------------------------------------------------------------------


def kauffman_bracket(d: LinkDiagram) -> MultiPoly:
    """⟨D⟩ = A^{n(F)-r(F)} R(F; -A^4, -1-A^{-4}, (-A^2-A^{-2})^{-1})."""
    f = ribbon_of_diagram(d)
    s = SpanningState.full(f)
    r = br_polynomial(f)
    val = r.subs({"α": -A ** 4, "β": -1 - A ** -4, "γ": RationalFn(1, LOOP), "δ": 1})
    val = val * RationalFn(A ** (s.n - s.r))
    try:
        return val.to_poly()
    except ArithmeticError:
        raise ConstructionError("bracket did not clear to a Laurent polynomial") from None


def bracket_oracle(d: LinkDiagram, limit: int = ORACLE_LIMIT) -> MultiPoly:
    """Kauffman state sum: Σ A^{#A - #B} δ^{circles - 1}, ⟨◯⟩ = 1."""
    n = len(d.crossings)
    if n > limit:
        raise BudgetExceededError(f"bracket oracle limited to {limit} crossings, diagram has {n}")
    if n == 0:
        return MultiPoly.const(1)
    arcs = {arc: i for i, arc in enumerate(d.arcs)}
    xs = [tuple(arcs[a] for a in x) for x in d.crossings]
    counts: Counter = Counter()
    for state in range(1 << n):
        parent = list(range(len(arcs)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        na = 0
        for j, (a, b, c, dd) in enumerate(xs):
            if state >> j & 1:
                join(a, b)
                join(c, dd)
                na += 1
            else:
                join(a, dd)
                join(b, c)
        loops = len({find(x) for x in range(len(arcs))})
        counts[(2 * na - n, loops - 1)] += 1
    total = MultiPoly()
    for (aexp, loops), cnt in counts.items():
        total = total + A ** aexp * LOOP ** loops * cnt
    return total


def jones(d: LinkDiagram, bracket: Optional[MultiPoly] = None) -> MultiPoly:
    """J as a Laurent polynomial in q = t^{1/4}: ((-A^3)^{-ω} ⟨D⟩) at A = q^{-1}."""
    br = kauffman_bracket(d) if bracket is None else bracket
    w = writhe(d)
    sign = -1 if w % 2 else 1
    val = br * A ** (-3 * w) * sign
    return val.subs_poly({"A": MultiPoly.var("q", -1)})


def jones_literal(d: LinkDiagram, bracket: Optional[MultiPoly] = None) -> MultiPoly:
    """The alternative grouping -A^{-3ω}⟨D⟩, kept for comparison."""
    br = kauffman_bracket(d) if bracket is None else bracket
    val = -(br * A ** (-3 * writhe(d)))
    return val.subs_poly({"A": MultiPoly.var("q", -1)})


def format_t(p: MultiPoly) -> str:
    """Render a polynomial in q = t^{1/4} with exponents of t."""
    chunks = []
    for i, (m, c) in enumerate(sorted(p.items(), key=lambda kv: -dict(kv[0]).get("q", 0))):
        e = Fraction(dict(m).get("q", 0), 4)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            ex = str(e) if e.denominator == 1 else f"({e})"
            mon = "t" if e == 1 else f"t^{ex}"
            body = mon if c == 1 else f"{c}*{mon}"
        if i == 0:
            chunks.append(body if sign == "+" else "-" + body)
        else:
            chunks.append(f" {sign} {body}")
    return "".join(chunks) if chunks else "0"


def parse_t(text: str) -> MultiPoly:
    """Parse a KnotInfo-style Jones string in t (exponents may be fractions) into q = t^{1/4}."""
    s = text.replace(" ", "")
    s = re.sub(r"t\^\(?(-?\d+)/(\d+)\)?", lambda m: f"q^{int(m.group(1)) * 4 // int(m.group(2))}", s)
    s = re.sub(r"t\^\(?(-?\d+)\)?", lambda m: f"q^{4 * int(m.group(1))}", s)
    s = re.sub(r"t(?![\^\w])", "q^4", s)
    from .poly import parse_poly

    return parse_poly(s)


# diagram builders ------------------------------------------------------------------------------


def braid_closure(word: Sequence[int], strands: Optional[int] = None) -> LinkDiagram:
    """PD code of the closure of a braid word (σ_i as ``i``, inverse as ``-i``)."""
    if not word:
        raise PDParseError("empty braid word has no crossings")
    n = strands or (max(abs(g) for g in word) + 1)
    counter = iter(range(10 ** 9))
    start = [next(counter) for _ in range(n)]
    cur = list(start)
    raw = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < n - 1:
            raise PDParseError(f"generator {g} out of range for {n} strands")
        L, R = cur[i], cur[i + 1]
        L2, R2 = next(counter), next(counter)
        if g > 0:
            raw.append((R, R2, L2, L))
        else:
            raw.append((L, R, R2, L2))
        cur[i], cur[i + 1] = L2, R2
    # close up: the final arc at each position is the starting arc there
    ident = {cur[i]: start[i] for i in range(n)}
    untouched = [i for i in range(n) if cur[i] == start[i]]
    if untouched:
        raise PDParseError(f"strands {untouched} take part in no crossing")
    fixed = [tuple(ident.get(a, a) for a in x) for x in raw]
    return relabel_consecutive(LinkDiagram(tuple(fixed)))


def add_kink(d: LinkDiagram, crossing: int, slot: int, pattern: int) -> LinkDiagram:
    """Reidemeister I: insert a kink on the arc leaving ``(crossing, slot)``.

    ``pattern`` 0..3 selects X(x,z,y,y) (+), X(x,y,y,z) (-), X(y,x,z,y) (-),
    X(y,y,z,x) (+) where x -> y (loop) -> z is the direction of travel.
    """
    d = relabel_consecutive(d)
    table = d.positions()
    comps = components(d)
    leaving = {}
    for comp in comps:
        for ci, s in comp:
            leaving[(ci, s ^ 2)] = True
    if (crossing, slot) not in leaving:
        raise PDParseError("kink must be inserted on an arc leaving the given slot")
    head = d.other_end((crossing, slot), table)
    x = d.crossings[crossing][slot]
    y, z = "y*", "z*"
    rows = [list(r) for r in d.crossings]
    rows[head[0]][head[1]] = z
    kink = [(x, z, y, y), (x, y, y, z), (y, x, z, y), (y, y, z, x)][pattern]
    rows.append(list(kink))
    return relabel_consecutive(LinkDiagram(tuple(tuple(r) for r in rows)))


# bundled corpus ------------------------------------------------------------------------------


def corpus() -> Dict[str, LinkDiagram]:
    """The PD diagrams shipped under ``data/knots``, by file stem."""
    from importlib import resources

    root = resources.files("ribbonpoly") / "data" / "knots"
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".pd"):
            out[entry.name[:-3]] = parse_pd(entry.read_text(encoding="utf-8"))
    return out


def corpus_jones() -> Dict[str, MultiPoly]:
    """Reference Jones polynomials (in q = t^{1/4}) for the corpus."""
    import json
    from importlib import resources

    data = json.loads((resources.files("ribbonpoly") / "data" / "knots" / "jones.json").read_text("utf-8"))
    return {k: parse_t(v) for k, v in data.items() if not k.startswith("_")}
