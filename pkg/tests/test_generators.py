import pytest
from hypothesis import given
from hypothesis import strategies as st

from gather import (
    GeneratorSpec,
    InvalidInput,
    cross,
    filled_rect,
    hourglass,
    is_connected,
    line,
    random_connected,
    shape,
    square_ring,
)
from gather.metrics import exterior_cells


def test_square_ring_counts():
    assert len(square_ring(3)) == 8
    assert len(square_ring(10)) == 36
    assert is_connected(square_ring(10))
    with pytest.raises(InvalidInput):
        square_ring(2)


def test_random_connected_examples():
    assert len(random_connected(1, 99)) == 1
    assert random_connected(60, 7) == random_connected(60, 7)
    s = random_connected(150, 42)
    assert len(s) == 150 and is_connected(s)
    assert random_connected(60, 7) != random_connected(60, 8)


def test_shapes():
    assert line(5).occupied == {(i, 0) for i in range(5)}
    assert line(3, "vertical").occupied == {(0, 0), (0, 1), (0, 2)}
    assert filled_rect(3, 3).occupied == {(x, y) for x in range(3) for y in range(3)}
    assert shape("filled_rect", width=3, height=3) == filled_rect(3, 3)


def test_cross_centre_has_four_empty_diagonal_regions():
    s = cross(2)
    assert len(s) == 9
    outside = exterior_cells(s)
    for d in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        assert d not in s and d in outside


def test_hourglass_has_a_single_neck():
    s = hourglass(3)
    rows = {}
    for c in s.occupied:
        rows[c.y] = rows.get(c.y, 0) + 1
    assert rows[3] == 1 and rows[2] == rows[4] == 3 and rows[0] == rows[6] == 7


@pytest.mark.parametrize(
    "call",
    [
        lambda: line(0),
        lambda: line(3, "diagonal"),
        lambda: cross(0),
        lambda: hourglass(-1),
        lambda: filled_rect(2, 0),
        lambda: shape("blob", n=3),
        lambda: shape("line", size=3),
        lambda: random_connected(0, 1),
        lambda: GeneratorSpec("random_connected", {"n": 4}),
        lambda: GeneratorSpec("nonsense"),
        lambda: GeneratorSpec("square_ring", {"edge": 4}).build(),
        lambda: GeneratorSpec("random_connected", {"n": 3}, seed=-1),
    ],
)
def test_invalid_parameters_are_rejected(call):
    with pytest.raises(InvalidInput):
        call()


def test_generator_spec_builds_each_kind():
    specs = [
        GeneratorSpec("square_ring", {"side": 5}),
        GeneratorSpec("random_connected", {"n": 12}, seed=3),
        GeneratorSpec("filled_rect", {"width": 2, "height": 4}),
        GeneratorSpec("line", {"length": 4}),
        GeneratorSpec("cross", {"arm": 1, "width": 2}),
        GeneratorSpec("hourglass", {"k": 2}),
    ]
    for spec in specs:
        assert is_connected(spec.build())
    assert specs[1].label() == "random_connected n=12 seed=3"


@given(
    st.one_of(
        st.builds(random_connected, st.integers(1, 200), st.integers(0, 2**64 - 1)),
        st.builds(square_ring, st.integers(3, 25)),
        st.builds(filled_rect, st.integers(1, 12), st.integers(1, 12)),
        st.builds(cross, st.integers(1, 6), st.integers(1, 4)),
        st.builds(hourglass, st.integers(1, 8)),
    )
)
def test_every_output_is_nonempty_and_connected(s):
    assert len(s) >= 1 and is_connected(s)
