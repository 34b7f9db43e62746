"""Progress measures: outer-boundary length, convex vertices, and enclosed area.

The boundary walk is a right-hand wall follower over robot cells that keeps
the outside on its right, which is counter-clockwise as drawn in a text map.
The walker stands on a robot and faces a direction. Each event is one of:

* left turn in place (the cell ahead is empty): 0 steps, one convex vertex;
* straight step onto the cell ahead: 1 step;
* concave corner (ahead and ahead-right are robots): steps onto both, then
  faces right; one concave vertex.

Diagonal contacts are never crossed, so pinch robots are revisited once per
pass: the centre of a plus shape four times, an hourglass neck twice, and the
interior of a 1 x k line twice.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .grid import EIGHT, FOUR, Coord, Swarm


def _cells(s) -> frozenset:
    return s.occupied if isinstance(s, Swarm) else frozenset(s)


def _left(d: Coord) -> Coord:
    # As drawn (y down): east -> north -> west -> south.
    return Coord(d.y, -d.x)


def _right(d: Coord) -> Coord:
    return Coord(-d.y, d.x)


@dataclass(frozen=True)
class BoundaryTrace:
    steps: tuple[Coord, ...]
    convex: int
    concave: int

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def distinct_robots(self) -> int:
        return len(set(self.steps))

    @property
    def turning_degrees(self) -> int:
        """Net turning of the closed walk; +360 for every connected swarm."""
        return 90 * (self.convex - self.concave)


def trace_outer_boundary(s) -> BoundaryTrace:
    occ = _cells(s)
    start = min(occ, key=lambda c: (c[1], c[0]))
    start = Coord(*start)
    if len(occ) == 1:
        return BoundaryTrace((start,), 4, 0)
    # Top-most then left-most robot, facing west: north of it is outside.
    p, d = start, Coord(-1, 0)
    steps: list[Coord] = []
    convex = concave = 0
    while True:
        ahead = Coord(p.x + d.x, p.y + d.y)
        if ahead not in occ:
            d = _left(d)
            convex += 1
        else:
            r = _right(d)
            corner = Coord(ahead.x + r.x, ahead.y + r.y)
            if corner in occ:
                steps.append(ahead)
                steps.append(corner)
                p, d = corner, r
                concave += 1
            else:
                steps.append(ahead)
                p = ahead
        if p == start and d == (-1, 0):
            break
    return BoundaryTrace(tuple(steps), convex, concave)


def count_convex_vertices(s) -> int:
    return trace_outer_boundary(s).convex


def boundary_robots(s) -> frozenset[Coord]:
    """Robots with at least one empty cell among their 8 neighbours."""
    occ = _cells(s)
    return frozenset(
        Coord(*c) for c in occ if any((c[0] + d.x, c[1] + d.y) not in occ for d in EIGHT)
    )


def exterior_cells(s) -> set[Coord]:
    """Empty cells of the padded bounding box that are 4-reachable from its rim."""
    occ = _cells(s)
    xs = [c[0] for c in occ]
    ys = [c[1] for c in occ]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    seed = Coord(x0, y0)
    seen = {seed}
    queue = deque([seed])
    while queue:
        c = queue.popleft()
        for d in FOUR:
            n = Coord(c.x + d.x, c.y + d.y)
            if x0 <= n.x <= x1 and y0 <= n.y <= y1 and n not in occ and n not in seen:
                seen.add(n)
                queue.append(n)
    return seen


def area(s) -> int:
    """Robots plus enclosed empty cells.

    Every robot is either an outer-boundary robot or an inside cell, so this
    equals the outer-boundary robot count plus all inside cells. Empty cells
    count as inside unless a 4-connected path of empty cells leads outside;
    diagonal gaps do not leak.
    """
    occ = _cells(s)
    xs = [c[0] for c in occ]
    ys = [c[1] for c in occ]
    box = (max(xs) - min(xs) + 3) * (max(ys) - min(ys) + 3)
    return box - len(exterior_cells(occ))


@dataclass(frozen=True)
class ProgressMeasures:
    boundary_len: int
    convex_count: int
    area: int

    @property
    def convex_measure(self) -> int:
        return 4 * self.boundary_len - self.convex_count

    def as_dict(self) -> dict[str, int]:
        return {
            "boundary_len": self.boundary_len,
            "convex_count": self.convex_count,
            "convex_measure": self.convex_measure,
            "area": self.area,
        }


def measures(s) -> ProgressMeasures:
    occ = _cells(s)
    tr = trace_outer_boundary(occ)
    return ProgressMeasures(tr.length, tr.convex, area(occ))


@dataclass(frozen=True)
class ProgressVerdict:
    boundary_progress: bool
    convex_progress: bool
    area_delta: int
    lemma_ok: bool

    def failed_measure(self, before: ProgressMeasures, after: ProgressMeasures) -> str | None:
        """Name of the first broken condition, or None."""
        if after.boundary_len > before.boundary_len:
            return "boundary_len"
        if after.convex_measure > before.convex_measure:
            return "convex_measure"
        if not self.lemma_ok:
            return "area"
        return None


AREA_STEP = 8


def check_round_progress(before: ProgressMeasures, after: ProgressMeasures) -> ProgressVerdict:
    bp = after.boundary_len < before.boundary_len
    cp = after.convex_measure < before.convex_measure
    da = after.area - before.area
    ok = (
        after.boundary_len <= before.boundary_len
        and after.convex_measure <= before.convex_measure
        and (bp or cp or da <= -AREA_STEP)
    )
    return ProgressVerdict(bp, cp, da, ok)
