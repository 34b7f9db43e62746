"""Fully synchronous round executor: look, compute, move, merge."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import GatherError, InvalidInput, InvariantError, LemmaViolation
from .grid import Coord, Swarm, is_connected, snapshot
from .metrics import ProgressMeasures, check_round_progress, measures
from .patterns import HopDecision, PatternLibrary, find_hop

log = logging.getLogger(__name__)


def is_gathered(s: Swarm) -> bool:
    """All robots fit in a 2 x 2 square."""
    x0, y0, x1, y1 = s.bounds()
    return x1 - x0 <= 1 and y1 - y0 <= 1


def theorem_bound(b: int) -> int:
    """Explicit round bound 6B^2 + 5B for initial boundary length B."""
    return 6 * b * b + 5 * b


def default_max_rounds(b: int) -> int:
    return 10 * theorem_bound(b)


@dataclass(frozen=True)
class SimConfig:
    max_rounds: int | None = None  # None: 10 * (6B^2 + 5B) for the run's initial B
    strict_conflicts: bool = True
    lemma_checks: bool = True
    record_trace: bool = True

    def __post_init__(self) -> None:
        if self.max_rounds is not None and self.max_rounds < 1:
            raise InvalidInput("max_rounds must be at least 1")


@dataclass(frozen=True)
class RoundResult:
    hops: tuple[tuple[Coord, Coord], ...]
    merges: int
    robots_after: int


@dataclass(frozen=True)
class Outcome:
    """``kind`` is 'gathered', 'max_rounds' or 'error'."""

    kind: str
    round: int | None = None
    error: str | None = None
    detail: str | None = None

    @property
    def gathered(self) -> bool:
        return self.kind == "gathered"


@dataclass
class Trace:
    initial: Swarm
    measures: list[ProgressMeasures] = field(default_factory=list)
    rounds: list[RoundResult] = field(default_factory=list)
    outcome: Outcome | None = None
    final: Swarm | None = None
    area_increase: int = 0

    @property
    def rounds_executed(self) -> int:
        return len(self.rounds)

    @property
    def merges(self) -> int:
        return sum(r.merges for r in self.rounds)

    @property
    def initial_boundary(self) -> int:
        return self.measures[0].boundary_len


Order = Callable[[Sequence[Coord]], Iterable[Coord]]


def decide_all(s: Swarm, lib: PatternLibrary, strict: bool = True, order: Order | None = None) -> dict[Coord, HopDecision]:
    """Compute every robot's decision from the round-start swarm.

    ``order`` only changes the evaluation order; decisions are pure
    functions of the snapshot, which the synchrony tests rely on.
    """
    robots = list(s)
    if order is not None:
        robots = list(order(robots))
    return {r: find_hop(snapshot(s, r), lib, strict=strict, robot=r) for r in robots}


def step(s: Swarm, lib: PatternLibrary, cfg: SimConfig = SimConfig(), order: Order | None = None) -> tuple[Swarm, RoundResult]:
    if is_gathered(s):
        raise InvalidInput("step called on a gathered swarm")
    decisions = decide_all(s, lib, cfg.strict_conflicts, order)
    hops = []
    new = set()
    for r in s:
        d = decisions[r].delta
        if d is None:
            new.add(r)
        else:
            to = Coord(r.x + d.x, r.y + d.y)
            hops.append((r, to))
            new.add(to)
    after = Swarm(frozenset(new))
    if not is_connected(after):
        raise InvariantError(f"swarm lost 4-connectivity after {len(hops)} hops")
    return after, RoundResult(tuple(hops), len(s) - len(after), len(after))


def run(s: Swarm, lib: PatternLibrary, cfg: SimConfig = SimConfig(), observer=None) -> Trace:
    """Step until gathered or out of rounds.

    Errors from ``step`` and lemma violations end the run with an 'error'
    outcome instead of propagating, so batch callers can report them per run.
    ``observer(index, swarm, result, measures)`` is called after every round.
    """
    if not is_connected(s):
        raise InvalidInput("initial swarm is not 4-connected")
    trace = Trace(initial=s)
    track = cfg.record_trace or cfg.lemma_checks
    m0 = measures(s)
    trace.measures.append(m0)
    limit = cfg.max_rounds if cfg.max_rounds is not None else default_max_rounds(m0.boundary_len)
    prev = m0
    cur = s
    k = 0
    try:
        while not is_gathered(cur):
            if k >= limit:
                trace.outcome = Outcome("max_rounds", k)
                break
            cur, res = step(cur, lib, cfg)
            k += 1
            trace.rounds.append(res)
            m = measures(cur) if track else None
            if m is not None:
                trace.measures.append(m)
                if m.area > prev.area:
                    trace.area_increase += m.area - prev.area
                if cfg.lemma_checks:
                    v = check_round_progress(prev, m)
                    if not v.lemma_ok:
                        raise LemmaViolation(k, v.failed_measure(prev, m), prev.as_dict(), m.as_dict())
                prev = m
            if observer is not None:
                observer(k, cur, res, m)
            if not res.hops:
                # Deterministic fixed point: more rounds cannot change anything.
                trace.outcome = Outcome("max_rounds", k, detail="fixed point, no robot hops")
                break
        else:
            trace.outcome = Outcome("gathered", k)
    except GatherError as exc:
        trace.outcome = Outcome("error", k, type(exc).__name__, str(exc))
    trace.final = cur
    return trace
