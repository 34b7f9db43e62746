import pytest

from gather import Coord, PatternCell, load_default_library
from gather.swarm_io import parse_text_map


@pytest.fixture(scope="session")
def lib():
    return load_default_library()


@pytest.fixture
def text_swarm():
    """Build a swarm from an indented text map."""

    def build(text: str):
        lines = [ln.strip() for ln in text.strip().splitlines()]
        return parse_text_map("\n".join(lines))

    return build


@pytest.fixture
def place():
    """Robot cells of a pattern drawing, optionally turned, shifted and mirrored at D.

    Order: rotate by 180 degrees, shift by ``at``, then mirror (x, y) -> (y, x).
    """

    def build(spec, at=(0, 0), rot180=False, mirror_d=False):
        out = set()
        for o, c in spec.cells:
            if c is not PatternCell.ROBOT:
                continue
            x, y = (-o.x, -o.y) if rot180 else (o.x, o.y)
            x, y = x + at[0], y + at[1]
            if mirror_d:
                x, y = y, x
            out.add(Coord(x, y))
        return frozenset(out)

    return build


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
