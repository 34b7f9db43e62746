"""Simulator and lemma checker for pattern-based gathering of oblivious robots on a grid."""

from .engine import Outcome, RoundResult, SimConfig, Trace, is_gathered, run, step, theorem_bound
from .errors import AmbiguityError, GatherError, InvalidInput, InvariantError, LemmaViolation, PatternError
from .generators import GeneratorSpec, cross, filled_rect, hourglass, line, random_connected, shape, square_ring
from .grid import (
    IDENTITY,
    TRANSFORMS,
    Coord,
    Snapshot,
    Swarm,
    Transform,
    apply_transform,
    is_connected,
    l1_distance,
    neighbors,
    snapshot,
)
from .metrics import (
    BoundaryTrace,
    ProgressMeasures,
    ProgressVerdict,
    area,
    boundary_robots,
    check_round_progress,
    count_convex_vertices,
    measures,
    trace_outer_boundary,
)
from .patterns import (
    HopDecision,
    PatternCell,
    PatternKind,
    PatternLibrary,
    PatternSpec,
    check_inhibit,
    find_hop,
    load_default_library,
    load_patterns,
    match_at,
    transforms_of,
)

__version__ = "0.1.0"
