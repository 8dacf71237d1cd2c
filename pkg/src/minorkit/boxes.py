"""Exact axis-aligned boxes and the strong-representation verifier.

Everything here is Fraction arithmetic: touching boxes, shared endpoints and
zero-width gaps are decided exactly, never by floating point.  Boxes are closed,
so two boxes that share only a boundary point do intersect; builders therefore
keep strictly positive gaps between non-adjacent boxes.

The exclusivity condition for a vertex v asks for a boundary point of v's box
together with a small cube around it that avoids every other box.  Deciding it
exactly reduces to facet coverage: v's boundary is fully covered by the other
(closed) boxes iff each of its 2d facets is, and a facet is covered iff every
full-dimensional cell of the endpoint arrangement restricted to it lies inside
some other box.  The search below subdivides facets recursively at box
endpoints, discarding pieces that sit inside one covering box, so an uncovered
cell centre is found quickly when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exceptions import (
    DimensionMismatch,
    MissingWitness,
    ParseError,
    TooLarge,
    VertexMismatch,
)
from .graph import Graph
from .ratio import fmt_ratio, parse_ratio

Point = tuple[Fraction, ...]
Interval = tuple[Fraction, Fraction]

QUARTER = Fraction(1, 4)

# Exact facet sweeps are gated; past these sizes a representation must carry
# witnesses to be checkable.
DEFAULT_MAX_SWEEP_DIM = 4
DEFAULT_MAX_SWEEP_BOXES = 64


@dataclass(frozen=True)
class Box:
    """Closed product of intervals with exact rational endpoints."""

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("a box needs dimension >= 1")
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"interval [{lo},{hi}] out of order")

    @classmethod
    def make(cls, *pairs) -> "Box":
        return cls(tuple((parse_ratio(a), parse_ratio(b)) for a, b in pairs))

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def is_degenerate(self) -> bool:
        return any(lo == hi for lo, hi in self.intervals)

    def contains(self, p: Point) -> bool:
        return len(p) == self.dim and all(lo <= x <= hi for (lo, hi), x in zip(self.intervals, p))

    def on_boundary(self, p: Point) -> bool:
        return self.contains(p) and any(
            x == lo or x == hi for (lo, hi), x in zip(self.intervals, p)
        )

    def intersects(self, other: "Box") -> bool:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} vs {other.dim}")
        return all(
            max(a_lo, b_lo) <= min(a_hi, b_hi)
            for (a_lo, a_hi), (b_lo, b_hi) in zip(self.intervals, other.intervals)
        )

    def contains_box(self, other: "Box") -> bool:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} vs {other.dim}")
        return all(
            a_lo <= b_lo and b_hi <= a_hi
            for (a_lo, a_hi), (b_lo, b_hi) in zip(self.intervals, other.intervals)
        )

    def linf_distance(self, p: Point) -> Fraction:
        """L-infinity distance from a point to the box (0 when inside)."""
        gap = Fraction(0)
        for (lo, hi), x in zip(self.intervals, p):
            if x < lo:
                gap = max(gap, lo - x)
            elif x > hi:
                gap = max(gap, x - hi)
        return gap

    def translate(self, vec: Iterable) -> "Box":
        vec = tuple(parse_ratio(x) for x in vec)
        return Box(tuple((lo + d, hi + d) for (lo, hi), d in zip(self.intervals, vec)))

    def permute(self, order: Iterable[int]) -> "Box":
        return Box(tuple(self.intervals[i] for i in order))

    def cross(self, *pairs) -> "Box":
        """Product with extra trailing intervals."""
        extra = tuple((parse_ratio(a), parse_ratio(b)) for a, b in pairs)
        return Box(self.intervals + extra)


def intersects(b1: Box, b2: Box) -> bool:
    """Closed boxes intersect iff every coordinate interval pair overlaps."""
    return b1.intersects(b2)


@dataclass(frozen=True)
class Witness:
    """Exclusive boundary point plus the side length of its private cube."""

    point: Point
    radius: Fraction


class Representation:
    """Assignment of one full-dimensional box per vertex, with optional witnesses."""

    def __init__(self, boxes: Mapping[int, Box], witnesses: Mapping[int, Witness] | None = None):
        if not boxes:
            raise ValueError("a representation needs at least one box")
        dims = {b.dim for b in boxes.values()}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed box dimensions {sorted(dims)}")
        for v, b in boxes.items():
            if b.is_degenerate():
                raise ValueError(f"box for vertex {v} is degenerate")
        self.boxes: dict[int, Box] = dict(boxes)
        self.dim: int = dims.pop()
        ws = dict(witnesses or {})
        for v, w in ws.items():
            if v not in self.boxes:
                raise VertexMismatch(f"witness for unknown vertex {v}")
            if len(w.point) != self.dim:
                raise DimensionMismatch(f"witness point for {v} has wrong dimension")
        self.witnesses: dict[int, Witness] = ws

    def vertices(self) -> list[int]:
        return sorted(self.boxes)

    def translate(self, vec) -> "Representation":
        vec = tuple(parse_ratio(x) for x in vec)
        boxes = {v: b.translate(vec) for v, b in self.boxes.items()}
        ws = {
            v: Witness(tuple(x + d for x, d in zip(w.point, vec)), w.radius)
            for v, w in self.witnesses.items()
        }
        return Representation(boxes, ws)

    def permute(self, order) -> "Representation":
        order = tuple(order)
        boxes = {v: b.permute(order) for v, b in self.boxes.items()}
        ws = {
            v: Witness(tuple(w.point[i] for i in order), w.radius)
            for v, w in self.witnesses.items()
        }
        return Representation(boxes, ws)

    def rename(self, mapping: Mapping[int, int]) -> "Representation":
        boxes = {mapping.get(v, v): b for v, b in self.boxes.items()}
        ws = {mapping.get(v, v): w for v, w in self.witnesses.items()}
        return Representation(boxes, ws)


# -- JSON -------------------------------------------------------------------------


def rep_to_json(rep: Representation) -> dict:
    out: dict = {
        "dim": rep.dim,
        "boxes": {
            str(v): [[fmt_ratio(lo), fmt_ratio(hi)] for lo, hi in b.intervals]
            for v, b in rep.boxes.items()
        },
    }
    if rep.witnesses:
        out["witnesses"] = {
            str(v): {"point": [fmt_ratio(x) for x in w.point], "radius": fmt_ratio(w.radius)}
            for v, w in rep.witnesses.items()
        }
    return out


def rep_from_json(obj) -> Representation:
    try:
        dim = int(obj["dim"])
        boxes = {}
        for key, ivs in obj["boxes"].items():
            b = Box.make(*ivs)
            if b.dim != dim:
                raise ParseError(f"box for vertex {key} has dim {b.dim}, expected {dim}")
            boxes[int(key)] = b
        witnesses = {}
        for key, w in obj.get("witnesses", {}).items():
            witnesses[int(key)] = Witness(
                tuple(parse_ratio(x) for x in w["point"]), parse_ratio(w["radius"])
            )
        return Representation(boxes, witnesses)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, DimensionMismatch, VertexMismatch) as exc:
        raise ParseError(f"bad representation object: {exc}") from exc


# -- intersection-pattern check ------------------------------------------------------


@dataclass(frozen=True)
class C1Report:
    ok: bool
    violations: tuple[tuple[int, int, str], ...]  # (i, j, "unexpected" | "missing")


def _check_cover(g: Graph, rep: Representation) -> None:
    if set(rep.boxes) != set(g.vertices()):
        raise VertexMismatch(
            f"representation covers {sorted(rep.boxes)} but the graph has 1..{g.n}"
        )


def verify_c1(g: Graph, rep: Representation) -> C1Report:
    """Boxes intersect exactly for edges; every discrepancy is reported."""
    _check_cover(g, rep)
    bad: list[tuple[int, int, str]] = []
    verts = rep.vertices()
    for a_pos, i in enumerate(verts):
        for j in verts[a_pos + 1:]:
            meet = rep.boxes[i].intersects(rep.boxes[j])
            edge = g.has_edge(i, j)
            if meet and not edge:
                bad.append((i, j, "unexpected"))
            elif edge and not meet:
                bad.append((i, j, "missing"))
    return C1Report(ok=not bad, violations=tuple(bad))


# -- exclusive-boundary machinery ----------------------------------------------------


def witness_radius(point: Point, rep: Representation, exclude: int) -> Fraction | None:
    """Half the L-infinity distance to the nearest other box, capped at 1/4.

    None when the point already lies in some other box (no exclusive cube exists).
    """
    nearest: Fraction | None = None
    for u, b in rep.boxes.items():
        if u == exclude:
            continue
        d = b.linf_distance(point)
        if d == 0:
            return None
        nearest = d if nearest is None else min(nearest, d)
    if nearest is None:
        return QUARTER
    return min(nearest / 2, QUARTER)


def check_witness(v: int, rep: Representation) -> bool:
    """Fast exclusivity check: stored point on v's boundary, cube avoiding all others."""
    if v not in rep.boxes:
        raise VertexMismatch(f"vertex {v} has no box")
    w = rep.witnesses.get(v)
    if w is None:
        raise MissingWitness(f"vertex {v} has no stored witness")
    return _witness_ok(v, rep, w)


def _witness_ok(v: int, rep: Representation, w: Witness) -> bool:
    if w.radius <= 0 or not rep.boxes[v].on_boundary(w.point):
        return False
    half = w.radius / 2
    return all(
        b.linf_distance(w.point) > half for u, b in rep.boxes.items() if u != v
    )


IntervalTuple = tuple[Interval, ...]


def _clip_fulldim(box: IntervalTuple, region: IntervalTuple) -> IntervalTuple | None:
    """Clip to the region, dropping empty or measure-zero overlaps.

    Measure-zero slices cannot cover any full-dimensional arrangement cell, and
    cell centres never touch them (centres avoid all endpoint values), so
    discarding them here keeps the search exact.
    """
    out = []
    for (lo, hi), (rlo, rhi) in zip(box, region):
        a, b = max(lo, rlo), min(hi, rhi)
        if a >= b:
            return None
        out.append((a, b))
    return tuple(out)


def _search_uncovered(region: IntervalTuple, boxes: list[IntervalTuple]) -> Point | None:
    """Centre of an arrangement cell of region not covered by any box, else None."""
    for b in boxes:
        if all(blo <= rlo and rhi <= bhi for (blo, bhi), (rlo, rhi) in zip(b, region)):
            return None  # region fully inside one covering box
    if not boxes:
        return tuple((lo + hi) / 2 for lo, hi in region)
    for b in boxes:
        for ax, (blo, bhi) in enumerate(b):
            rlo, rhi = region[ax]
            for val in (blo, bhi):
                if rlo < val < rhi:
                    for piece in ((rlo, val), (val, rhi)):
                        sub = region[:ax] + (piece,) + region[ax + 1:]
                        sub_boxes = [c for c in (_clip_fulldim(x, sub) for x in boxes) if c]
                        hit = _search_uncovered(sub, sub_boxes)
                        if hit is not None:
                            return hit
                    return None
    # every box spans the region in every axis, so one of them contains it
    raise AssertionError("unreachable: no covering box and no split point")


def _facet_uncovered(v: int, axis: int, side: int, rep: Representation) -> Point | None:
    """An uncovered point on the given facet of v's box, or None if fully covered."""
    box = rep.boxes[v]
    c = box.intervals[axis][side]
    others = [
        b for u, b in rep.boxes.items()
        if u != v and b.intervals[axis][0] <= c <= b.intervals[axis][1]
    ]
    if rep.dim == 1:
        return None if others else (c,)
    region = box.intervals[:axis] + box.intervals[axis + 1:]
    cands = []
    for b in others:
        reduced = b.intervals[:axis] + b.intervals[axis + 1:]
        clipped = _clip_fulldim(reduced, region)
        if clipped:
            cands.append(clipped)
    hit = _search_uncovered(region, cands)
    if hit is None:
        return None
    return hit[:axis] + (c,) + hit[axis:]


def _sweep_gate(rep: Representation, max_dim: int, max_boxes: int) -> None:
    if rep.dim > max_dim:
        raise TooLarge(
            f"exact facet sweep gated at dimension {max_dim}; "
            "store witnesses to verify higher-dimensional representations"
        )
    if len(rep.boxes) > max_boxes:
        raise TooLarge(f"exact facet sweep gated at {max_boxes} boxes")


def boundary_covered(
    v: int,
    rep: Representation,
    *,
    max_dim: int = DEFAULT_MAX_SWEEP_DIM,
    max_boxes: int = DEFAULT_MAX_SWEEP_BOXES,
) -> bool:
    """True iff every point of v's boundary lies in some other box (exact)."""
    if v not in rep.boxes:
        raise VertexMismatch(f"vertex {v} has no box")
    _sweep_gate(rep, max_dim, max_boxes)
    for axis in range(rep.dim):
        for side in (0, 1):
            if _facet_uncovered(v, axis, side, rep) is not None:
                return False
    return True


def exposed_witness(
    v: int,
    rep: Representation,
    *,
    max_dim: int = DEFAULT_MAX_SWEEP_DIM,
    max_boxes: int = DEFAULT_MAX_SWEEP_BOXES,
) -> Witness | None:
    """Find an exclusive boundary point for v by facet sweep, or None if covered."""
    if v not in rep.boxes:
        raise VertexMismatch(f"vertex {v} has no box")
    _sweep_gate(rep, max_dim, max_boxes)
    for axis in range(rep.dim):
        for side in (0, 1):
            p = _facet_uncovered(v, axis, side, rep)
            if p is not None:
                r = witness_radius(p, rep, v)
                if r is None:
                    raise AssertionError("uncovered facet point lies in another box")
                return Witness(p, r)
    return None


@dataclass(frozen=True)
class C2Report:
    ok: bool
    witnesses: dict[int, Witness]
    covered: tuple[int, ...]  # vertices whose whole boundary is covered by the others


def verify_c2(
    g: Graph,
    rep: Representation,
    *,
    max_dim: int = DEFAULT_MAX_SWEEP_DIM,
    max_boxes: int = DEFAULT_MAX_SWEEP_BOXES,
) -> C2Report:
    """Every vertex must keep an exclusive boundary point.

    Stored witnesses are trusted only after an exact re-check; vertices without a
    valid stored witness get a facet sweep, and a found witness is returned so
    callers can persist it.
    """
    _check_cover(g, rep)
    found: dict[int, Witness] = {}
    covered: list[int] = []
    for v in rep.vertices():
        w = rep.witnesses.get(v)
        if w is not None and _witness_ok(v, rep, w):
            found[v] = w
            continue
        got = exposed_witness(v, rep, max_dim=max_dim, max_boxes=max_boxes)
        if got is None:
            covered.append(v)
        else:
            found[v] = got
    return C2Report(ok=not covered, witnesses=found, covered=tuple(covered))


def verify(g: Graph, rep: Representation) -> tuple[C1Report, C2Report]:
    """Both conditions in one call."""
    return verify_c1(g, rep), verify_c2(g, rep)
