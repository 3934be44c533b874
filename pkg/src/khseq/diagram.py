"""Tangles at a branching axis, their annular closures, and symmetric lifts.

The central object is a one-string tangle in a disk, with both endpoints
on a marked axis point and a reference ray from the axis used to record
winding data.  From it the module derives:

* the two annular closures of the tangle (the two ways of reconnecting
  the endpoints past the axis), presented as closed annular diagrams,
* a one-crossing "kinked" closure interpolating between them, whose two
  resolutions of the kink are exactly the two closures,
* the double branched lift: a knot diagram with twice-plus-one as many
  crossings, equipped with its rotation involution,
* diagram-level invariants (crossing signs, winding numbers, and the
  grading correction used by the localization theorem downstream).

Crossings are PD-style 4-tuples of arc names, listed counterclockwise
from the incoming under-strand.  Resolving a crossing by 0 joins slots
(0,1) and (2,3); resolving by 1 joins (0,3) and (1,2).  Ray-crossing
counts are stored per arc as net signed integers with respect to the
traversal from the first endpoint to the second; only their parity
matters for essentiality, while the signed total carries the winding.
"""

from __future__ import annotations

import enum
import json as _json
from dataclasses import dataclass
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

Crossing = Tuple[str, str, str, str]

_FORBIDDEN_ARC_CHARS = set("@:#")


class TangleError(ValueError):
    """Raised for malformed or inconsistent diagram input."""


class AxisCrossingType(enum.Enum):
    """Which strand passes over at the on-axis crossing of the lift.

    OVER_FIRST means the strand of the first-listed endpoint arc is the
    over-strand; UNDER_FIRST means it is the under-strand.
    """

    OVER_FIRST = "over"
    UNDER_FIRST = "under"


class WrapDirection(enum.Enum):
    WRAP = "wrap"
    UNWRAP = "unwrap"


@dataclass(frozen=True, eq=True)
class QuotientTangle:
    """Open one-string tangle with endpoints on the axis.

    crossings: PD tuples in traversal-compatible order (the under-strand
    of each crossing is entered at slot 0).
    axis_crossing_type: over/under role of the first endpoint's strand
    at the lifted axis crossing.
    arc_ray_hits: net signed ray crossings per arc (missing arcs: 0).
    endpoints: the two arcs ending on the axis, in counterclockwise
    order starting from the reference ray.
    """

    crossings: Tuple[Crossing, ...]
    axis_crossing_type: AxisCrossingType
    arc_ray_hits: Mapping[str, int]
    endpoints: Tuple[str, str]

    def hits(self, arc: str) -> int:
        return self.arc_ray_hits.get(arc, 0)

    @property
    def arcs(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for c in self.crossings:
            for a in c:
                seen.setdefault(a, None)
        for a in self.endpoints:
            seen.setdefault(a, None)
        return tuple(seen)

    def to_text(self) -> str:
        lines = [f"X {a} {b} {c} {d}" for (a, b, c, d) in self.crossings]
        lines.append(f"axis {self.axis_crossing_type.value}")
        lines.append(f"endpoints {self.endpoints[0]} {self.endpoints[1]}")
        hits = [f"{a}:{h}" for a, h in sorted(self.arc_ray_hits.items()) if h]
        if hits:
            lines.append("ray " + " ".join(hits))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=True)
class AnnularDiagram:
    """Closed diagram in the annulus: crossings, plain joins, ray data.

    joins are crossing-free identifications of two arc ends, used by the
    closures (the closure arc does not cross anything).  basepoint names
    the marked arc used for the basepoint action.
    """

    crossings: Tuple[Crossing, ...]
    arc_ray_hits: Mapping[str, int]
    basepoint: str
    joins: Tuple[Tuple[str, str], ...] = ()

    def hits(self, arc: str) -> int:
        return self.arc_ray_hits.get(arc, 0)

    @property
    def arcs(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for c in self.crossings:
            for a in c:
                seen.setdefault(a, None)
        for a, b in self.joins:
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        return tuple(seen)

    def winding(self) -> int:
        """Net signed ray crossings of the whole diagram."""
        return sum(self.arc_ray_hits.get(a, 0) for a in self.arcs)


@dataclass(frozen=True, eq=True)
class IntravergentDiagram:
    """Lifted knot diagram with its 180-degree rotation involution.

    underlying: the plain closed diagram of the lift (ray data all zero;
    the reference ray has no meaning upstairs).
    axis_crossing: index of the on-axis crossing in the crossing list
    (always the last one).
    crossing_involution: permutation of crossing indices under rotation.
    arc_involution: arc relabeling under rotation.
    """

    underlying: AnnularDiagram
    axis_crossing: int
    crossing_involution: Tuple[int, ...]
    arc_involution: Mapping[str, str]


@dataclass(frozen=True, eq=True)
class Resolution:
    """One complete smoothing of a closed diagram.

    vertex: the 0/1 choice per crossing, in crossing order.
    circles: the resulting circles as frozensets of arc names, sorted by
    their smallest arc for determinism.
    circle_essential: parity flag per circle (odd total ray crossings).
    circle_of_basepoint: index into circles of the marked circle.
    """

    vertex: Tuple[int, ...]
    circles: Tuple[frozenset, ...]
    circle_essential: Tuple[bool, ...]
    circle_of_basepoint: int

    def circle_index(self, arc: str) -> int:
        for idx, circ in enumerate(self.circles):
            if arc in circ:
                return idx
        raise KeyError(arc)


@dataclass(frozen=True, eq=True)
class DiagramInvariants:
    """Crossing counts and winding data of a tangle and its lift."""

    tangle_crossings: int
    lift_crossings: int
    tangle_negative: int
    lift_negative: int
    grading_correction: int
    closure_winding: int
    axis_linking_2x: int


class QuotientClosures(NamedTuple):
    k0: AnnularDiagram
    k1: AnnularDiagram
    kinked: AnnularDiagram


# ---------------------------------------------------------------------------
# parsing


def _check_arc_token(tok: str, lineno: int) -> str:
    if not tok or _FORBIDDEN_ARC_CHARS & set(tok):
        raise TangleError(
            f"line {lineno}: arc identifier {tok!r} is empty or uses a reserved character (@ : #)"
        )
    return tok


def parse_tangle(text: str, *, json_format: Optional[bool] = None) -> QuotientTangle:
    """Parse the tangle file format (or its JSON mirror) and validate.

    The text format has one record per line: crossings as `X a b c d`,
    the axis-crossing type as `axis over|under`, `endpoints a b`, and
    optional `ray arc:count ...` records; `#` starts a comment.  The JSON
    mirror is an object with keys "crossings", "axis", "endpoints",
    "ray".

    >>> t = parse_tangle("endpoints a0 a1\\nray a0:0 a1:0\\naxis over\\n")
    >>> len(t.crossings), t.endpoints
    (0, ('a0', 'a1'))
    >>> parse_tangle("axis over\\nendpoints a0 a0\\n")
    Traceback (most recent call last):
        ...
    khseq.diagram.TangleError: endpoint arcs must differ
    """
    if json_format is None:
        json_format = text.lstrip()[:1] == "{"
    if json_format:
        return _parse_json(text)

    crossings: List[Crossing] = []
    axis: Optional[str] = None
    endpoints: Optional[Tuple[str, str]] = None
    hits: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "X":
            if len(parts) != 5:
                raise TangleError(f"line {lineno}: crossing needs four arcs")
            crossings.append(tuple(_check_arc_token(p, lineno) for p in parts[1:5]))
        elif kind == "axis":
            if len(parts) != 2 or parts[1] not in ("over", "under"):
                raise TangleError(f"line {lineno}: axis must be 'over' or 'under'")
            axis = parts[1]
        elif kind == "endpoints":
            if len(parts) != 3:
                raise TangleError(f"line {lineno}: endpoints needs two arcs")
            endpoints = (
                _check_arc_token(parts[1], lineno),
                _check_arc_token(parts[2], lineno),
            )
        elif kind == "ray":
            for item in parts[1:]:
                arc, _, count = item.partition(":")
                if not count:
                    raise TangleError(f"line {lineno}: ray entries look like arc:count")
                try:
                    hits[arc] = int(count)
                except ValueError:
                    raise TangleError(
                        f"line {lineno}: ray count {count!r} is not an integer"
                    ) from None
        else:
            raise TangleError(f"line {lineno}: unknown record {kind!r}")
    return _build_tangle(crossings, axis, endpoints, hits)


def _parse_json(text: str) -> QuotientTangle:
    try:
        obj = _json.loads(text)
    except _json.JSONDecodeError as exc:
        raise TangleError(f"invalid JSON tangle: {exc}") from None
    if not isinstance(obj, dict):
        raise TangleError("JSON tangle must be an object")
    crossings = [tuple(str(a) for a in c) for c in obj.get("crossings", [])]
    for c in crossings:
        if len(c) != 4:
            raise TangleError("JSON crossing needs four arcs")
    endpoints = obj.get("endpoints")
    if endpoints is not None:
        if not isinstance(endpoints, (list, tuple)) or len(endpoints) != 2:
            raise TangleError("JSON endpoints needs two arcs")
        endpoints = (str(endpoints[0]), str(endpoints[1]))
    hits = {str(a): int(h) for a, h in (obj.get("ray") or {}).items()}
    return _build_tangle(crossings, obj.get("axis"), endpoints, hits)


def _build_tangle(
    crossings: Sequence[Crossing],
    axis: Optional[str],
    endpoints: Optional[Tuple[str, str]],
    hits: Dict[str, int],
) -> QuotientTangle:
    if axis is None:
        raise TangleError("missing 'axis over|under' record")
    if endpoints is None:
        raise TangleError("missing 'endpoints' record")
    if endpoints[0] == endpoints[1]:
        raise TangleError("endpoint arcs must differ")
    t = QuotientTangle(
        crossings=tuple(tuple(c) for c in crossings),
        axis_crossing_type=AxisCrossingType(axis),
        arc_ray_hits=dict(hits),
        endpoints=endpoints,
    )
    _validate_tangle(t)
    return t


def _validate_tangle(t: QuotientTangle) -> None:
    counts: Dict[str, int] = {}
    for c in t.crossings:
        for a in c:
            counts[a] = counts.get(a, 0) + 1
    for a in t.endpoints:
        counts[a] = counts.get(a, 0) + 1
    for a, b in _implicit_joins(t):
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    bad = {a: n for a, n in counts.items() if n != 2}
    if bad:
        raise TangleError(
            "every arc must appear exactly twice across crossings and endpoints; "
            f"offending arcs: {sorted(bad)}"
        )
    for a in t.arc_ray_hits:
        if a not in counts:
            raise TangleError(f"ray data names unknown arc {a!r}")
    _tangle_traversal(t)  # raises on convention or connectivity problems


# ---------------------------------------------------------------------------
# traversal

# A site is a place an arc end can live: a crossing slot ("x", ci, slot),
# a join side ("j", ji, side), or an endpoint on the axis ("end", which).
Site = Tuple


def _arc_sites(
    crossings: Sequence[Crossing],
    joins: Sequence[Tuple[str, str]] = (),
    endpoints: Optional[Tuple[str, str]] = None,
) -> Dict[str, List[Site]]:
    sites: Dict[str, List[Site]] = {}
    for ci, c in enumerate(crossings):
        for slot, a in enumerate(c):
            sites.setdefault(a, []).append(("x", ci, slot))
    for ji, (a, b) in enumerate(joins):
        sites.setdefault(a, []).append(("j", ji, 0))
        sites.setdefault(b, []).append(("j", ji, 1))
    if endpoints is not None:
        for which, a in enumerate(endpoints):
            sites.setdefault(a, []).append(("end", which))
    for a, lst in sites.items():
        if len(lst) != 2:
            raise TangleError(f"arc {a!r} has {len(lst)} ends, expected 2")
    return sites


class _CrossingPasses:
    """Directions of the two strand passes through one crossing.

    under_forward: the (0,2)-strand was traversed 0 -> 2.
    over_forward: the (1,3)-strand was traversed 3 -> 1 (the direction
    that makes the crossing positive when the under-strand is entered
    at slot 0).
    """

    __slots__ = ("under_forward", "over_forward", "under_time", "over_time")

    def __init__(self) -> None:
        self.under_forward: Optional[bool] = None
        self.over_forward: Optional[bool] = None
        self.under_time: int = -1
        self.over_time: int = -1

    @property
    def sign(self) -> int:
        if self.under_forward is None or self.over_forward is None:
            raise TangleError("crossing was not traversed twice")
        # rotating the tuple by two flips both directions at once, so the
        # product is what the convention pins down
        return 1 if self.under_forward == self.over_forward else -1


def _walk(
    crossings: Sequence[Crossing],
    joins: Sequence[Tuple[str, str]],
    sites: Dict[str, List[Site]],
    start_arc: str,
    start_site: Site,
) -> Tuple[List[str], List[_CrossingPasses]]:
    """Follow the strand from an arc end; returns arc order and passes.

    The walk starts on start_arc as if it had just been entered at
    start_site, and ends either at an axis endpoint or on returning to
    the start state (closed diagram).
    """
    passes = [_CrossingPasses() for _ in crossings]
    arc_order: List[str] = []
    arc, site = start_arc, start_site
    time = 0
    while True:
        arc_order.append(arc)
        pair = sites[arc]
        if pair[0] == site:
            dest = pair[1]
        elif pair[1] == site:
            dest = pair[0]
        else:
            raise TangleError(f"arc {arc!r} is not incident to its claimed site")
        kind = dest[0]
        if kind == "end":
            return arc_order, passes
        if kind == "j":
            _, ji, side = dest
            other = 1 - side
            arc = joins[ji][other]
            site = ("j", ji, other)
        elif kind == "x":
            _, ci, slot = dest
            rec = passes[ci]
            if slot in (0, 2):
                if rec.under_forward is not None:
                    raise TangleError(f"crossing {ci} under-strand traversed twice")
                rec.under_forward = slot == 0
                rec.under_time = time
            else:
                if rec.over_forward is not None:
                    raise TangleError(f"crossing {ci} over-strand traversed twice")
                rec.over_forward = slot == 3
                rec.over_time = time
            time += 1
            out = (slot + 2) % 4
            arc = crossings[ci][out]
            site = ("x", ci, out)
        else:
            raise AssertionError(dest)
        if arc == start_arc and site == start_site:
            return arc_order, passes


class TangleTraversal(NamedTuple):
    """Outcome of walking the tangle strand from the first endpoint."""

    arc_order: Tuple[str, ...]
    passes: Tuple[_CrossingPasses, ...]

    @property
    def signs(self) -> Tuple[int, ...]:
        return tuple(p.sign for p in self.passes)


def _implicit_joins(t: QuotientTangle) -> Tuple[Tuple[str, str], ...]:
    # a crossing-free tangle is a single strand running axis to axis; its
    # two named endpoint arcs are fused away from the axis
    if not t.crossings:
        return (t.endpoints,)
    return ()


def _tangle_traversal(t: QuotientTangle) -> TangleTraversal:
    joins = _implicit_joins(t)
    sites = _arc_sites(t.crossings, joins, t.endpoints)
    first, second = t.endpoints
    order, passes = _walk(t.crossings, joins, sites, first, ("end", 0))
    if order[-1] != second:
        raise TangleError("tangle strand does not run from the first endpoint to the second")
    for ci, rec in enumerate(passes):
        if rec.under_forward is None or rec.over_forward is None:
            raise TangleError(
                f"tangle is not a single strand: crossing {ci} unreached from the endpoints"
            )
        if not rec.under_forward:
            raise TangleError(
                f"crossing {ci} is not listed from its incoming under-strand"
            )
    if len(set(order)) != len(t.arcs):
        raise TangleError("tangle has arcs unreachable from the endpoints")
    return TangleTraversal(tuple(order), tuple(passes))


def _knot_traversal(
    crossings: Sequence[Crossing], joins: Sequence[Tuple[str, str]]
) -> Tuple[_CrossingPasses, ...]:
    """Walk a closed one-component diagram; per-crossing pass directions."""
    sites = _arc_sites(crossings, joins)
    if crossings:
        start_arc = crossings[0][0]
        start_site: Site = ("x", 0, 0)
    elif joins:
        start_arc = joins[0][0]
        start_site = ("j", 0, 0)
    else:
        raise TangleError("empty diagram")
    order, passes = _walk(crossings, joins, sites, start_arc, start_site)
    for ci, rec in enumerate(passes):
        if rec.under_forward is None or rec.over_forward is None:
            raise TangleError(f"diagram is not a knot: crossing {ci} unreached")
    if len(set(order)) != len(sites):
        raise TangleError("diagram is not a knot: unreachable arcs")
    return tuple(passes)


def _diagram_signs(d: AnnularDiagram) -> Tuple[int, ...]:
    return tuple(p.sign for p in _knot_traversal(d.crossings, d.joins))


# ---------------------------------------------------------------------------
# resolutions


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self) -> None:
        self.parent: Dict[str, str] = {}

    def find(self, a: str) -> str:
        parent = self.parent
        root = parent.setdefault(a, a)
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def resolve(diagram, vertex: Sequence[int]) -> Resolution:
    """Smooth every crossing of a closed diagram per the 0/1 vertex.

    Accepts an AnnularDiagram or an IntravergentDiagram (which resolves
    its underlying diagram).  Circles come back as frozensets of arcs,
    ordered by their smallest member; essentiality is the parity of the
    total ray crossings of a circle's arcs.
    """
    if isinstance(diagram, IntravergentDiagram):
        diagram = diagram.underlying
    if not isinstance(diagram, AnnularDiagram):
        raise TypeError(f"cannot resolve {type(diagram).__name__}")
    vertex = tuple(int(v) for v in vertex)
    if len(vertex) != len(diagram.crossings):
        raise ValueError("vertex length does not match the crossing count")
    if any(v not in (0, 1) for v in vertex):
        raise ValueError("vertex entries must be 0 or 1")
    uf = _UnionFind()
    for a in diagram.arcs:
        uf.find(a)
    for choice, (x0, x1, x2, x3) in zip(vertex, diagram.crossings):
        if choice == 0:
            uf.union(x0, x1)
            uf.union(x2, x3)
        else:
            uf.union(x0, x3)
            uf.union(x1, x2)
    for a, b in diagram.joins:
        uf.union(a, b)
    groups: Dict[str, List[str]] = {}
    for a in diagram.arcs:
        groups.setdefault(uf.find(a), []).append(a)
    circles = tuple(sorted((frozenset(g) for g in groups.values()), key=min))
    essential = tuple(
        bool(sum(diagram.arc_ray_hits.get(a, 0) for a in circ) % 2) for circ in circles
    )
    base = next(i for i, circ in enumerate(circles) if diagram.basepoint in circ)
    return Resolution(vertex, circles, essential, base)


# ---------------------------------------------------------------------------
# the lift


def _lift_label(arc: str, sheet: int) -> str:
    return f"{arc}@{sheet}"


def lift_intravergent(t: QuotientTangle) -> IntravergentDiagram:
    """Build the double branched lift of the tangle with its involution.

    Every tangle crossing lifts to two crossings (listed consecutively,
    copy 0 then copy 1); the axis contributes one final on-axis crossing
    exchanged with itself by the rotation.  Each arc lifts to two arcs.
    Which lift of an arc appears in which lifted crossing is governed by
    the parity of the arc's ray crossings: sheets swap across the ray.

    Arc lifts are anchored at their first occurrence: for an endpoint
    arc that is its axis end, for an internal arc its first slot in the
    crossing list.  The anchored end of lift `a@s` lies on sheet s; the
    other end lies on sheet s xor parity(a).
    """
    _tangle_traversal(t)  # validate before building
    first_occurrence: Dict[str, Tuple[int, int]] = {}
    for ci, c in enumerate(t.crossings):
        for slot, a in enumerate(c):
            if a not in t.endpoints and a not in first_occurrence:
                first_occurrence[a] = (ci, slot)

    def lifted_arc(a: str, ci: int, slot: int, sheet: int) -> str:
        anchored_here = first_occurrence.get(a) == (ci, slot)
        if a in t.endpoints or not anchored_here:
            sheet ^= t.hits(a) & 1
        return _lift_label(a, sheet)

    crossings: List[Crossing] = []
    for ci, c in enumerate(t.crossings):
        for sheet in (0, 1):
            crossings.append(
                tuple(lifted_arc(a, ci, slot, sheet) for slot, a in enumerate(c))
            )
    e_f, e_s = t.endpoints
    if t.axis_crossing_type is AxisCrossingType.OVER_FIRST:
        axis: Crossing = (
            _lift_label(e_s, 0),
            _lift_label(e_f, 1),
            _lift_label(e_s, 1),
            _lift_label(e_f, 0),
        )
    else:
        axis = (
            _lift_label(e_f, 1),
            _lift_label(e_s, 1),
            _lift_label(e_f, 0),
            _lift_label(e_s, 0),
        )
    crossings.append(axis)

    joins: List[Tuple[str, str]] = []
    for a, b in _implicit_joins(t):
        for t_sheet in (0, 1):
            joins.append(
                (
                    _lift_label(a, t_sheet ^ (t.hits(a) & 1)),
                    _lift_label(b, t_sheet ^ (t.hits(b) & 1)),
                )
            )

    order: List[Crossing] = []
    n_bar = len(t.crossings)
    # interleave: copy-0 and copy-1 lifts of each crossing are adjacent
    for ci in range(n_bar):
        order.append(crossings[2 * ci])
        order.append(crossings[2 * ci + 1])
    order.append(axis)

    arc_map: Dict[str, str] = {}
    for a in t.arcs:
        arc_map[_lift_label(a, 0)] = _lift_label(a, 1)
        arc_map[_lift_label(a, 1)] = _lift_label(a, 0)
    involution = []
    for ci in range(n_bar):
        involution.extend([2 * ci + 1, 2 * ci])
    involution.append(2 * n_bar)

    underlying = AnnularDiagram(
        crossings=tuple(order),
        arc_ray_hits={},
        basepoint=_lift_label(e_s, 0),
        joins=tuple(joins),
    )
    lift = IntravergentDiagram(
        underlying=underlying,
        axis_crossing=2 * n_bar,
        crossing_involution=tuple(involution),
        arc_involution=arc_map,
    )
    _knot_traversal(underlying.crossings, underlying.joins)  # must be a knot
    return lift


# ---------------------------------------------------------------------------
# closures


def _fresh_arc(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 2
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _kinked_closure(t: QuotientTangle, flip: bool = False) -> Tuple[AnnularDiagram, str]:
    """Close the tangle through one negative kink next to the axis.

    The kink's 1-resolution splits off a small circle through the kink
    arc (odd ray parity, so essential) and leaves one closure of the
    tangle; the 0-resolution is the other closure.  With flip=False the
    0-resolution is the winding-raised closure; flip=True swaps the two
    roles (used for the maps running the other way).
    """
    e_f, e_s = t.endpoints
    u = _fresh_arc("u", set(t.arcs))
    over_first = t.axis_crossing_type is AxisCrossingType.OVER_FIRST
    if flip:
        over_first = not over_first
    hits = dict(t.arc_ray_hits)
    if over_first:
        kink: Crossing = (e_s, u, u, e_f)
        hits[u] = 1
    else:
        kink = (u, e_s, e_f, u)
        hits[u] = -1
        hits[e_f] = hits.get(e_f, 0) + 1
    diagram = AnnularDiagram(
        crossings=t.crossings + (kink,),
        arc_ray_hits=hits,
        basepoint=e_s,
        joins=_implicit_joins(t),
    )
    return diagram, u


def close_quotients(t: QuotientTangle) -> QuotientClosures:
    """The two annular closures of the tangle and the kinked closure.

    Returns (k0, k1, kinked) where k0 and k1 are the 0- and the
    1-resolution of the kink crossing of `kinked`; the small essential
    circle of the 1-resolution is dropped from k1's diagram (it survives
    inside `kinked`).  k0 always winds once more than k1.  The marked
    basepoint arc on all three diagrams is the axis-adjacent arc shared
    with the tangle.
    """
    kinked, u = _kinked_closure(t, flip=False)
    e_f, e_s = t.endpoints
    kink = kinked.crossings[-1]
    tangle_part = kinked.crossings[:-1]
    hits_k1 = {a: h for a, h in kinked.arc_ray_hits.items() if a != u}
    # 1-resolution: joins slots (0,3) and (1,2); the (u,u) pair is the
    # dropped circle, the other pair reconnects the endpoints
    pairs1 = [
        (kink[0], kink[3]),
        (kink[1], kink[2]),
    ]
    closure1 = next(p for p in pairs1 if u not in p)
    k1 = AnnularDiagram(
        crossings=tangle_part,
        arc_ray_hits=hits_k1,
        basepoint=e_s,
        joins=_implicit_joins(t) + (closure1,),
    )
    # 0-resolution: joins slots (0,1) and (2,3); both involve u
    k0 = AnnularDiagram(
        crossings=tangle_part,
        arc_ray_hits=dict(kinked.arc_ray_hits),
        basepoint=e_s,
        joins=_implicit_joins(t) + ((kink[0], kink[1]), (kink[2], kink[3])),
    )
    return QuotientClosures(k0, k1, kinked)


# ---------------------------------------------------------------------------
# invariants


def diagram_invariants(t: QuotientTangle) -> DiagramInvariants:
    """Crossing counts, signs, and winding numbers of tangle and lift.

    closure_winding is the winding number of the raised closure with its
    canonical orientation (the tangle traversal for an over-first axis,
    the reverse for under-first).  grading_correction is the negative
    crossing imbalance between the lift and twice the tangle;
    axis_linking_2x is their difference with the winding.
    """
    trav = _tangle_traversal(t)
    n_bar = len(t.crossings)
    n_bar_neg = sum(1 for s in trav.signs if s < 0)
    lift = lift_intravergent(t)
    lift_signs = [
        p.sign for p in _knot_traversal(lift.underlying.crossings, lift.underlying.joins)
    ]
    n = len(lift_signs)
    n_neg = sum(1 for s in lift_signs if s < 0)
    closures = close_quotients(t)
    raw_winding = closures.k0.winding()
    if t.axis_crossing_type is AxisCrossingType.OVER_FIRST:
        winding = raw_winding
    else:
        winding = -raw_winding
    delta = n_neg - 2 * n_bar_neg
    return DiagramInvariants(
        tangle_crossings=n_bar,
        lift_crossings=n,
        tangle_negative=n_bar_neg,
        lift_negative=n_neg,
        grading_correction=delta,
        closure_winding=winding,
        axis_linking_2x=winding - delta,
    )


def axis_crossing_sign(t: QuotientTangle) -> int:
    """Sign of the on-axis crossing of the lift."""
    lift = lift_intravergent(t)
    passes = _knot_traversal(lift.underlying.crossings, lift.underlying.joins)
    return passes[lift.axis_crossing].sign


# ---------------------------------------------------------------------------
# the axis wrap move


def _rotate2(c: Crossing) -> Crossing:
    return (c[2], c[3], c[0], c[1])


def _wrapped_once(t: QuotientTangle) -> QuotientTangle:
    """Insert one crossing next to the axis (the winding-lowering move).

    Both constructions append a crossing whose under-strand runs from
    the new first endpoint arc into the tangle.  Starting from an
    over-first tangle the strand enters at the old second endpoint, so
    the tangle is traversed backwards afterwards (tuples rotate by two,
    signed ray counts flip); starting from under-first it enters at the
    old first endpoint and the traversal is preserved, at the cost of
    one extra ray crossing on the old second endpoint arc.  Either way
    the resulting tangle is under-first.
    """
    e_f, e_s = t.endpoints
    base_hits = dict(t.arc_ray_hits)
    if not t.crossings:
        # the implicit join fuses the two endpoint arcs into one arc once
        # a crossing separates them from the axis
        base_hits[e_f] = t.hits(e_f) + t.hits(e_s)
        base_hits.pop(e_s, None)
        e_s = e_f
    taken = set(t.arcs)
    na = _fresh_arc("wa", taken)
    nb = _fresh_arc("wb", taken | {na})
    if t.axis_crossing_type is AxisCrossingType.OVER_FIRST:
        crossings = tuple(_rotate2(c) for c in t.crossings)
        hits = {a: -h for a, h in base_hits.items() if h}
        new_crossing: Crossing = (na, e_f, e_s, nb)
    else:
        crossings = t.crossings
        hits = {a: h for a, h in base_hits.items() if h}
        hits[e_s] = hits.get(e_s, 0) + 1
        new_crossing = (na, e_s, e_f, nb)
    return QuotientTangle(
        crossings=crossings + (new_crossing,),
        axis_crossing_type=AxisCrossingType.UNDER_FIRST,
        arc_ray_hits={a: h for a, h in hits.items() if h},
        endpoints=(na, nb),
    )


def _unwrapped_once(t: QuotientTangle) -> QuotientTangle:
    """Undo one _wrapped_once insertion; raises if none is present."""
    na, nb = t.endpoints
    inv = diagram_invariants(t)
    for ci in range(len(t.crossings) - 1, -1, -1):
        c = t.crossings[ci]
        if c[0] != na or c[3] != nb:
            continue
        mid = (c[1], c[2])
        if na in mid or nb in mid:
            continue
        if t.hits(na) or t.hits(nb):
            continue
        others = t.crossings[:ci] + t.crossings[ci + 1 :]
        candidates = []
        if t.axis_crossing_type is AxisCrossingType.UNDER_FIRST:
            hits_a = {a: -h for a, h in t.arc_ray_hits.items() if h and a not in (na, nb)}
            hits_b = {a: h for a, h in t.arc_ray_hits.items() if a not in (na, nb)}
            hits_b[c[1]] = hits_b.get(c[1], 0) - 1
            hits_b = {a: h for a, h in hits_b.items() if h}
            if c[1] == c[2] and not others:
                # undoing the wrap of a crossing-free tangle: split the
                # fused arc back into two endpoint arcs
                split = _fresh_arc("a", {c[1], na, nb})
                for hits, typ in ((hits_a, AxisCrossingType.OVER_FIRST),
                                  (hits_b, AxisCrossingType.UNDER_FIRST)):
                    for ends in ((c[1], split), (split, c[1])):
                        candidates.append(
                            QuotientTangle(
                                crossings=(),
                                axis_crossing_type=typ,
                                arc_ray_hits=hits,
                                endpoints=ends,
                            )
                        )
            elif c[1] != c[2]:
                # the non-reversing inverse first: when the wrap being
                # undone reversed the traversal, this one fails to parse
                # and the rotated form below is the true inverse
                candidates.append(
                    QuotientTangle(
                        crossings=others,
                        axis_crossing_type=AxisCrossingType.UNDER_FIRST,
                        arc_ray_hits=hits_b,
                        endpoints=(c[2], c[1]),
                    )
                )
                candidates.append(
                    QuotientTangle(
                        crossings=tuple(_rotate2(x) for x in others),
                        axis_crossing_type=AxisCrossingType.OVER_FIRST,
                        arc_ray_hits=hits_a,
                        endpoints=(c[1], c[2]),
                    )
                )
        for cand in candidates:
            try:
                _validate_tangle(cand)
                back = diagram_invariants(cand)
            except TangleError:
                continue
            if (
                back.grading_correction == inv.grading_correction + 1
                and back.closure_winding == inv.closure_winding + 1
            ):
                return cand
    raise TangleError("no removable axis wrap crossing")


def apply_axis_wrap_move(t: QuotientTangle, direction: WrapDirection) -> QuotientTangle:
    """Wrap or unwrap the tangle at the axis.

    Wrapping adds one crossing and lowers both the grading correction
    and the closure winding by one, so their difference is preserved;
    unwrapping removes such a crossing and raises both by one.  The
    postcondition is checked and a contract violation raises rather than
    returning a wrong diagram.
    """
    if direction is WrapDirection.UNWRAP:
        return _unwrapped_once(t)
    before = diagram_invariants(t)
    out = _wrapped_once(t)
    _validate_tangle(out)
    after = diagram_invariants(out)
    if (
        after.grading_correction != before.grading_correction - 1
        or after.closure_winding != before.closure_winding - 1
    ):
        raise TangleError(
            "wrap move postcondition failed: "
            f"correction {before.grading_correction}->{after.grading_correction}, "
            f"winding {before.closure_winding}->{after.closure_winding}"
        )
    return out
