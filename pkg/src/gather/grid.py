"""Grid substrate: coordinates, swarms, symmetry transforms and local snapshots.

Coordinates use the screen convention of the text-map format: x grows to the
right, y grows downward, row 0 is the top line.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidInput

VIEW_RADIUS = 7


class Coord(NamedTuple):
    x: int
    y: int

    def __add__(self, other: tuple[int, int]) -> Coord:  # type: ignore[override]
        return Coord(self.x + other[0], self.y + other[1])

    def __sub__(self, other: tuple[int, int]) -> Coord:
        return Coord(self.x - other[0], self.y - other[1])


# Fixed enumeration order: E, W, N, S, then NE, NW, SE, SW (N is y - 1).
FOUR = (Coord(1, 0), Coord(-1, 0), Coord(0, -1), Coord(0, 1))
DIAGONALS = (Coord(1, -1), Coord(-1, -1), Coord(1, 1), Coord(-1, 1))
EIGHT = FOUR + DIAGONALS

# Every offset a robot can see, ordered row-major for reproducibility.
VIEW_OFFSETS = tuple(
    Coord(dx, dy)
    for dy in range(-VIEW_RADIUS, VIEW_RADIUS + 1)
    for dx in range(-VIEW_RADIUS, VIEW_RADIUS + 1)
    if abs(dx) + abs(dy) <= VIEW_RADIUS
)


def l1_distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def neighbors(c: tuple[int, int], mode: str = "four") -> list[Coord]:
    """Adjacent cells in the fixed E, W, N, S, NE, NW, SE, SW order."""
    if mode == "four":
        deltas = FOUR
    elif mode == "eight":
        deltas = EIGHT
    else:
        raise InvalidInput(f"unknown neighbor mode {mode!r}")
    return [Coord(c[0] + d.x, c[1] + d.y) for d in deltas]


@dataclass(frozen=True)
class Swarm:
    """The whole world state: a nonempty set of occupied cells.

    Connectivity is not enforced here so that disconnected inputs can be
    loaded and reported; use ``is_connected`` to check it.
    """

    occupied: frozenset[Coord]

    def __post_init__(self) -> None:
        if not self.occupied:
            raise InvalidInput("a swarm needs at least one robot")

    @classmethod
    def of(cls, cells: Iterable[tuple[int, int]]) -> Swarm:
        return cls(frozenset(Coord(int(x), int(y)) for x, y in cells))

    def __len__(self) -> int:
        return len(self.occupied)

    def __contains__(self, c: object) -> bool:
        return c in self.occupied

    def __iter__(self) -> Iterator[Coord]:
        return iter(sorted(self.occupied, key=lambda c: (c.y, c.x)))

    def bounds(self) -> tuple[int, int, int, int]:
        """Return (min_x, min_y, max_x, max_y)."""
        xs = [c.x for c in self.occupied]
        ys = [c.y for c in self.occupied]
        return min(xs), min(ys), max(xs), max(ys)

    def translated(self, v: tuple[int, int]) -> Swarm:
        return Swarm(frozenset(Coord(c.x + v[0], c.y + v[1]) for c in self.occupied))

    def normalized(self) -> Swarm:
        """Shift so the bounding box starts at (0, 0)."""
        x0, y0, _, _ = self.bounds()
        return self.translated((-x0, -y0))


def is_connected(s: Swarm | Iterable[tuple[int, int]]) -> bool:
    cells = s.occupied if isinstance(s, Swarm) else frozenset(s)
    if not cells:
        raise InvalidInput("connectivity of an empty swarm is undefined")
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in FOUR:
            n = (x + dx, y + dy)
            if n in cells and n not in seen:
                seen.add(n)
                queue.append(n)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Transform:
    """Element of the square's symmetry group: rotate, then optionally mirror.

    ``rotation`` counts quarter turns, each mapping (x, y) to (-y, x); in
    screen coordinates that turns east into south. The mirror maps (x, y)
    to (-x, y) and is applied after the rotation.
    """

    rotation: int = 0
    mirrored: bool = False

    def __post_init__(self) -> None:
        if self.rotation not in (0, 1, 2, 3):
            raise InvalidInput(f"rotation must be 0..3 quarter turns, got {self.rotation}")

    @property
    def degrees(self) -> int:
        return 90 * self.rotation

    def __call__(self, o: tuple[int, int]) -> Coord:
        return apply_transform(o, self)

    def inverse(self) -> Transform:
        # A mirrored element is its own inverse; a rotation inverts to -k.
        if self.mirrored:
            return self
        return Transform((-self.rotation) % 4, False)

    def then(self, other: Transform) -> Transform:
        """The transform equal to applying ``self`` first, then ``other``."""
        # M R^k = R^-k M, so (M^b R^l)(M^a R^k) = M^(a+b) R^(k + (-1)^a l).
        sign = -1 if self.mirrored else 1
        return Transform((self.rotation + sign * other.rotation) % 4, self.mirrored != other.mirrored)


IDENTITY = Transform()
TRANSFORMS = tuple(Transform(k, m) for m in (False, True) for k in range(4))


def apply_transform(o: tuple[int, int], t: Transform) -> Coord:
    x, y = o
    k = t.rotation
    if k == 1:
        x, y = -y, x
    elif k == 2:
        x, y = -x, -y
    elif k == 3:
        x, y = y, -x
    if t.mirrored:
        x = -x
    return Coord(x, y)


@dataclass(frozen=True)
class Snapshot:
    """What a robot sees: occupied offsets within L1 radius 7 of itself."""

    center: Coord
    relative_occupied: frozenset[Coord]

    def __contains__(self, o: object) -> bool:
        return o in self.relative_occupied

    def transformed(self, t: Transform) -> Snapshot:
        return Snapshot(self.center, frozenset(apply_transform(o, t) for o in self.relative_occupied))


def snapshot(s: Swarm, center: tuple[int, int]) -> Snapshot:
    if center not in s.occupied:
        raise InvalidInput(f"snapshot center {tuple(center)} is not occupied")
    cx, cy = center
    occ = s.occupied
    rel = frozenset(o for o in VIEW_OFFSETS if (cx + o.x, cy + o.y) in occ)
    return Snapshot(Coord(cx, cy), rel)
