"""Text-map and JSON serialization of swarms."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InvalidInput
from .grid import Coord, Swarm

ROBOT = "#"
EMPTY = "."


def parse_text_map(text: str) -> Swarm:
    """Parse rows of '#'/'.'; row 0 is the top line and y grows downward."""
    cells = []
    for y, line in enumerate(text.splitlines()):
        line = line.rstrip()
        for x, ch in enumerate(line):
            if ch == ROBOT:
                cells.append(Coord(x, y))
            elif ch != EMPTY:
                raise InvalidInput(f"unexpected character {ch!r} at row {y}, column {x}")
    if not cells:
        raise InvalidInput("text map contains no robots")
    return Swarm.of(cells)


def to_text_map(s: Swarm) -> str:
    """Render the bounding box of ``s``, one line per row, top row first."""
    x0, y0, x1, y1 = s.bounds()
    occ = s.occupied
    rows = (
        "".join(ROBOT if (x, y) in occ else EMPTY for x in range(x0, x1 + 1))
        for y in range(y0, y1 + 1)
    )
    return "\n".join(rows)


def parse_json(text: str) -> Swarm:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise InvalidInput("swarm JSON must be an array of [x, y] pairs")
    cells = []
    for item in data:
        ok = (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        )
        if not ok:
            raise InvalidInput(f"bad cell entry {item!r}; expected [x, y] integers")
        cells.append(Coord(*item))
    if not cells:
        raise InvalidInput("swarm JSON contains no robots")
    return Swarm.of(cells)


def to_json(s: Swarm) -> str:
    return json.dumps([[c.x, c.y] for c in s])


def load_swarm(path: str | Path) -> Swarm:
    """Read a swarm file; JSON is detected by a ``.json`` suffix or a leading '['."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("["):
        return parse_json(text)
    return parse_text_map(text)
