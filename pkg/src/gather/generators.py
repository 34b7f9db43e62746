"""Deterministic initial configurations."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidInput
from .grid import FOUR, Coord, Swarm


def _positive(**params: int) -> None:
    for name, v in params.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise InvalidInput(f"{name} must be a positive integer, got {v!r}")


def square_ring(side: int) -> Swarm:
    """The 4(side - 1) cells on the border of a side x side square."""
    _positive(side=side)
    if side < 3:
        raise InvalidInput("square_ring needs side >= 3")
    last = side - 1
    return Swarm.of((x, y) for x in range(side) for y in range(side) if x in (0, last) or y in (0, last))


def random_connected(n: int, seed: int) -> Swarm:
    """Grow n cells from the origin, adding a uniformly chosen frontier cell each time.

    The frontier is every empty cell 4-adjacent to the swarm. It is kept in an
    insertion-ordered list with swap-removal, so the result depends only on
    (n, seed).
    """
    _positive(n=n)
    rng = random.Random(seed)
    occ = {Coord(0, 0)}
    frontier: list[Coord] = []
    index: dict[Coord, int] = {}

    def push(c: Coord) -> None:
        if c not in occ and c not in index:
            index[c] = len(frontier)
            frontier.append(c)

    def pop(i: int) -> Coord:
        c = frontier[i]
        last = frontier.pop()
        if last != c:
            frontier[i] = last
            index[last] = i
        del index[c]
        return c

    for d in FOUR:
        push(d)
    while len(occ) < n:
        c = pop(rng.randrange(len(frontier)))
        occ.add(c)
        for d in FOUR:
            push(Coord(c.x + d.x, c.y + d.y))
    return Swarm(frozenset(occ))


def filled_rect(width: int, height: int) -> Swarm:
    _positive(width=width, height=height)
    return Swarm.of((x, y) for x in range(width) for y in range(height))


def line(length: int, orientation: str = "horizontal") -> Swarm:
    _positive(length=length)
    if orientation not in ("horizontal", "vertical"):
        raise InvalidInput(f"orientation must be horizontal or vertical, got {orientation!r}")
    if orientation == "horizontal":
        return Swarm.of((i, 0) for i in range(length))
    return Swarm.of((0, i) for i in range(length))


def cross(arm: int, width: int = 1) -> Swarm:
    """Plus shape: four arms of the given length and width around a central block."""
    _positive(arm=arm, width=width)
    cells = set()
    for i in range(-arm, arm + width):
        for j in range(width):
            cells.add((i, j))
            cells.add((j, i))
    return Swarm.of(cells)


def hourglass(k: int) -> Swarm:
    """Two stacked triangles meeting in a single neck robot at row k.

    Row y holds 2|y - k| + 1 robots centred on x = 0, so the neck sits
    between an upper and a lower bulb.
    """
    _positive(k=k)
    return Swarm.of((x, y) for y in range(2 * k + 1) for x in range(-abs(y - k), abs(y - k) + 1))


SHAPES = {
    "filled_rect": filled_rect,
    "line": line,
    "cross": cross,
    "hourglass": hourglass,
}


def shape(kind: str, **params: Any) -> Swarm:
    try:
        build = SHAPES[kind]
    except KeyError:
        raise InvalidInput(f"unknown shape {kind!r}; expected one of {sorted(SHAPES)}") from None
    try:
        return build(**params)
    except TypeError as exc:
        raise InvalidInput(f"bad parameters for {kind}: {exc}") from None


KINDS = ("square_ring", "random_connected", *SHAPES)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown generator {self.kind!r}; expected one of {list(KINDS)}")
        if self.kind == "random_connected" and self.seed is None:
            raise InvalidInput("random_connected needs a seed")
        if self.seed is not None and not (0 <= self.seed < 2**64):
            raise InvalidInput("seed must be an unsigned 64-bit integer")

    def build(self) -> Swarm:
        try:
            if self.kind == "square_ring":
                return square_ring(**self.params)
            if self.kind == "random_connected":
                return random_connected(seed=self.seed, **self.params)
        except TypeError as exc:
            raise InvalidInput(f"bad parameters for {self.kind}: {exc}") from None
        return shape(self.kind, **self.params)

    def label(self) -> str:
        parts = [self.kind] + [f"{k}={v}" for k, v in sorted(self.params.items())]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return " ".join(parts)
