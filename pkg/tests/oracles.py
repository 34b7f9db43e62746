"""Brute-force reference implementations used only by the tests.

They share no code with the package: plain tuples, exhaustive searches, and
definitions read straight off the geometry.
"""

from itertools import combinations


def window_cells(w=4, h=4):
    return [(x, y) for y in range(h) for x in range(w)]


def connected_closure(cells):
    """Transitive closure of 4-adjacency, iterated to a fixed point."""
    cells = set(cells)
    reach = {next(iter(cells))}
    changed = True
    while changed:
        changed = False
        for c in cells:
            if c in reach:
                continue
            if any(abs(c[0] - r[0]) + abs(c[1] - r[1]) == 1 for r in reach):
                reach.add(c)
                changed = True
    return len(reach) == len(cells)


def all_connected_swarms(max_n=6, w=4, h=4):
    cells = window_cells(w, h)
    for n in range(1, max_n + 1):
        for combo in combinations(cells, n):
            if connected_closure(combo):
                yield frozenset(combo)


def _box(occ):
    xs = [c[0] for c in occ]
    ys = [c[1] for c in occ]
    return min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1


def escapes(cell, occ, diagonal=False):
    """Can an empty cell reach the padded box rim through empty cells? (DFS from that cell alone)"""
    x0, x1, y0, y1 = _box(occ)
    steps = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if diagonal:
        steps += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    stack = [cell]
    seen = {cell}
    while stack:
        x, y = stack.pop()
        if x in (x0, x1) or y in (y0, y1):
            return True
        for dx, dy in steps:
            n = (x + dx, y + dy)
            if n not in occ and n not in seen and x0 <= n[0] <= x1 and y0 <= n[1] <= y1:
                seen.add(n)
                stack.append(n)
    return False


def boundary_robots_oracle(occ):
    out = set()
    for x, y in occ:
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if (dx or dy) and (x + dx, y + dy) not in occ:
                    out.add((x, y))
    return out


def area_oracle(occ):
    """Outer-boundary robots plus every other cell of the box that cannot escape."""
    occ = set(occ)
    bnd = boundary_robots_oracle(occ)
    x0, x1, y0, y1 = _box(occ)
    inside = 0
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            c = (x, y)
            if c in bnd:
                continue
            if c in occ or not escapes(c, occ):
                inside += 1
    return len(bnd) + inside


def convex_oracle(occ):
    """Convex corners of the outer contour of the union of unit squares.

    A square's corner is convex when both edge-neighbours meeting at that
    corner are empty. Diagonal point contacts are resolved as two separate
    polygon visits, so the empty cells there are connected through the touch
    point; that makes the outside region the 8-connected empty component of
    the rim. A corner is on the outer contour when its empty neighbours are
    outside.
    """
    occ = set(occ)
    count = 0
    for x, y in occ:
        for dx, dy in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            a, b = (x + dx, y), (x, y + dy)
            if a not in occ and b not in occ and escapes(a, occ, diagonal=True):
                count += 1
    return count

