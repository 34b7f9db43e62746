"""Hop and inhibit pattern library plus the per-robot decision function.

A pattern is a small template around the acting robot: cells that must hold a
robot, cells that must be empty, and unconstrained cells. Hop patterns carry a
target offset; inhibit patterns carry an anchor that places them inside the
hopping robot's frame. The library file format is described in
``docs/patterns.md``.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

from .errors import AmbiguityError, PatternError
from .grid import IDENTITY, TRANSFORMS, VIEW_RADIUS, Coord, Snapshot, Transform, apply_transform

log = logging.getLogger(__name__)

PATTERNS_ENV = "GATHER_PATTERNS"


class PatternCell(Enum):
    ROBOT = "#"
    EMPTY = "o"
    ANY = "."


class PatternKind(Enum):
    DIAG_A = "DiagA"
    DIAG_B = "DiagB"
    INHIBIT1 = "Inhibit1"
    INHIBIT2 = "Inhibit2"
    INHIBIT3 = "Inhibit3"
    HV1 = "HV1"
    HV2 = "HV2"

    @property
    def is_inhibit(self) -> bool:
        return self in INHIBIT_KINDS

    @property
    def is_diag(self) -> bool:
        return self in (PatternKind.DIAG_A, PatternKind.DIAG_B)

    @property
    def is_hv(self) -> bool:
        return self in (PatternKind.HV1, PatternKind.HV2)


INHIBIT_KINDS = frozenset({PatternKind.INHIBIT1, PatternKind.INHIBIT2, PatternKind.INHIBIT3})
DIAGONAL_UNITS = frozenset({Coord(1, 1), Coord(1, -1), Coord(-1, 1), Coord(-1, -1)})
AXIS_UNITS = frozenset({Coord(1, 0), Coord(-1, 0), Coord(0, 1), Coord(0, -1)})
KING_MOVES = DIAGONAL_UNITS | AXIS_UNITS


def mirror_d(o: tuple[int, int]) -> Coord:
    """Mirror at the diagonal axis D through the acting robot: (x, y) -> (y, x)."""
    return Coord(o[1], o[0])


def _norm(o: tuple[int, int]) -> int:
    return abs(o[0]) + abs(o[1])


@dataclass(frozen=True)
class PatternSpec:
    id: str
    kind: PatternKind
    cells: tuple[tuple[Coord, PatternCell], ...]
    hop_target: Coord | None = None
    anchor: Coord | None = None
    # Which symmetry produced this spec from the file drawing; bookkeeping only.
    transform: Transform = field(default=IDENTITY, compare=False)

    @property
    def cell_map(self) -> dict[Coord, PatternCell]:
        return dict(self.cells)

    @property
    def required(self) -> tuple[Coord, ...]:
        return tuple(o for o, c in self.cells if c is PatternCell.ROBOT)

    @property
    def forbidden(self) -> tuple[Coord, ...]:
        return tuple(o for o, c in self.cells if c is PatternCell.EMPTY)

    def key(self) -> tuple:
        """Content identity ignoring unconstrained cells."""
        constrained = frozenset((o, c) for o, c in self.cells if c is not PatternCell.ANY)
        return (self.kind, constrained, self.hop_target, self.anchor)

    def transformed(self, t: Transform) -> PatternSpec:
        cells = tuple(sorted(((apply_transform(o, t), c) for o, c in self.cells), key=_cell_order))
        return PatternSpec(
            id=self.id,
            kind=self.kind,
            cells=cells,
            hop_target=None if self.hop_target is None else apply_transform(self.hop_target, t),
            anchor=None if self.anchor is None else apply_transform(self.anchor, t),
            transform=self.transform.then(t),
        )


def _cell_order(item: tuple[Coord, PatternCell]) -> tuple[int, int]:
    return (item[0].y, item[0].x)


def transforms_of(p: PatternSpec) -> tuple[PatternSpec, ...]:
    """The distinct images of ``p`` under the 8 grid symmetries, in TRANSFORMS order."""
    seen: set = set()
    out = []
    for t in TRANSFORMS:
        img = p.transformed(t)
        k = img.key()
        if k not in seen:
            seen.add(k)
            out.append(img)
    return tuple(out)


def match_at(snap: Snapshot | Iterable[tuple[int, int]], p: PatternSpec, t: Transform = IDENTITY) -> bool:
    """True iff every constrained cell of ``p``, moved by ``t``, agrees with ``snap``."""
    occ = snap if isinstance(snap, Snapshot) else frozenset(snap)
    for o, c in p.cells:
        if c is PatternCell.ANY:
            continue
        if (apply_transform(o, t) in occ) != (c is PatternCell.ROBOT):
            return False
    return True


# ---------------------------------------------------------------------------
# Library and loader


@dataclass(frozen=True)
class _Compiled:
    """A hop pattern under one transform, flattened for fast matching."""

    spec: PatternSpec
    t: Transform
    required: tuple[Coord, ...]
    forbidden: tuple[Coord, ...]
    target: Coord

    def matches(self, occ) -> bool:
        return all(o in occ for o in self.required) and not any(o in occ for o in self.forbidden)


def _compile_cells(cells: Iterable[Coord], t: Transform, shift: Coord, mirror: bool) -> tuple[Coord, ...]:
    out = []
    for o in cells:
        placed = Coord(o.x + shift.x, o.y + shift.y)
        if mirror:
            placed = mirror_d(placed)
        out.append(apply_transform(placed, t))
    return tuple(out)


@dataclass(frozen=True)
class PatternLibrary:
    patterns: tuple[PatternSpec, ...]
    version: str

    def by_kind(self, *kinds: PatternKind) -> tuple[PatternSpec, ...]:
        return tuple(p for p in self.patterns if p.kind in kinds)

    @property
    def hop_patterns(self) -> tuple[PatternSpec, ...]:
        return tuple(p for p in self.patterns if not p.kind.is_inhibit)

    @property
    def inhibit_patterns(self) -> tuple[PatternSpec, ...]:
        return tuple(p for p in self.patterns if p.kind.is_inhibit)

    def __getitem__(self, pattern_id: str) -> PatternSpec:
        for p in self.patterns:
            if p.id == pattern_id:
                return p
        raise KeyError(pattern_id)

    def _compiled_hops(self) -> tuple[_Compiled, ...]:
        cached = self.__dict__.get("_hops")
        if cached is None:
            cached = tuple(
                _Compiled(p, t, _compile_cells(p.required, t, Coord(0, 0), False),
                          _compile_cells(p.forbidden, t, Coord(0, 0), False),
                          apply_transform(p.hop_target, t))
                for p in self.hop_patterns
                for t in TRANSFORMS
            )
            object.__setattr__(self, "_hops", cached)
        return cached

    def _compiled_inhibits(self, t: Transform, lower_left: bool) -> tuple[tuple[str, tuple, tuple], ...]:
        cache = self.__dict__.get("_inh")
        if cache is None:
            cache = {}
            object.__setattr__(self, "_inh", cache)
        key = (t, lower_left)
        if key not in cache:
            cache[key] = tuple(
                (p.id, _compile_cells(p.required, t, p.anchor, lower_left),
                 _compile_cells(p.forbidden, t, p.anchor, lower_left))
                for p in self.inhibit_patterns
            )
        return cache[key]


_HEADER_TARGET_KINDS = {k for k in PatternKind if not k.is_inhibit}


def load_patterns(source: IO | str | bytes, *, require_inventory: bool = True) -> PatternLibrary:
    """Parse and validate a pattern-definition file.

    ``source`` may be a binary or text stream, or the file contents. With
    ``require_inventory`` the library must hold exactly two DiagA, one DiagB,
    one of each Inhibit kind and at least one HV1 and one HV2 pattern.
    """
    if hasattr(source, "read"):
        source = source.read()
    text = source.decode("utf-8") if isinstance(source, bytes) else source

    version = None
    blocks: list[tuple[int, list[str], list[tuple[int, str]]]] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            current = None
            continue
        words = line.split()
        if words[0] == "version" and current is None and not blocks and version is None:
            if len(words) != 2:
                raise PatternError("version line takes exactly one tag", line=lineno)
            version = words[1]
            continue
        if current is None:
            current = (lineno, words, [])
            blocks.append(current)
        else:
            current[2].append((lineno, line))

    if not blocks:
        raise PatternError("pattern file defines no patterns")

    specs = []
    ids: set[str] = set()
    for lineno, header, body in blocks:
        spec = _parse_block(lineno, header, body)
        if spec.id in ids:
            raise PatternError("duplicate pattern id", spec.id, lineno)
        ids.add(spec.id)
        specs.append(spec)

    if require_inventory:
        _check_inventory(specs)
    if version is None:
        version = "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
    return PatternLibrary(tuple(specs), version)


def _parse_block(lineno: int, header: list[str], body: list[tuple[int, str]]) -> PatternSpec:
    pid = header[0]
    if len(header) < 2:
        raise PatternError("header needs an id and a kind", pid, lineno)
    try:
        kind = PatternKind(header[1])
    except ValueError:
        raise PatternError(f"unknown kind {header[1]!r}", pid, lineno) from None

    target = anchor = None
    if kind.is_inhibit:
        if len(header) != 2:
            raise PatternError("inhibit headers take no target; use an anchor line", pid, lineno)
        if not body or body[0][1].split()[0] != "anchor":
            raise PatternError("inhibit pattern needs an 'anchor dx dy' line", pid, lineno)
        alineno, aline = body[0]
        anchor = Coord(*_ints(aline.split()[1:], pid, alineno, "anchor"))
        body = body[1:]
    else:
        target = Coord(*_ints(header[2:], pid, lineno, "target"))

    if not body:
        raise PatternError("missing grid", pid, lineno)
    rows = [(n, "".join(line.split())) for n, line in body]
    width = len(rows[0][1])
    origin = None
    star = None
    for y, (n, row) in enumerate(rows):
        if len(row) != width:
            raise PatternError("grid is not rectangular", pid, n)
        for x, ch in enumerate(row):
            if ch not in "#o.@*":
                raise PatternError(f"unknown grid symbol {ch!r}", pid, n)
            if ch == "@":
                if origin is not None:
                    raise PatternError("more than one '@' acting robot", pid, n)
                origin = (x, y)
            elif ch == "*":
                if star is not None:
                    raise PatternError("more than one '*' target marker", pid, n)
                star = (x, y)
    if origin is None:
        raise PatternError("missing '@' acting robot at (0,0)", pid, lineno)

    cells = []
    for y, (_, row) in enumerate(rows):
        for x, ch in enumerate(row):
            o = Coord(x - origin[0], y - origin[1])
            if ch in "#@":
                cells.append((o, PatternCell.ROBOT))
            elif ch == "o":
                cells.append((o, PatternCell.EMPTY))
            else:
                cells.append((o, PatternCell.ANY))
    cells.sort(key=_cell_order)
    spec = PatternSpec(pid, kind, tuple(cells), target, anchor)

    if star is not None:
        if kind.is_inhibit:
            raise PatternError("inhibit patterns have no '*' target", pid, lineno)
        if Coord(star[0] - origin[0], star[1] - origin[1]) != target:
            raise PatternError("'*' marker disagrees with the header target", pid, lineno)
    _validate(spec, lineno)
    return spec


def _ints(words: list[str], pid: str, lineno: int, what: str) -> tuple[int, int]:
    if len(words) != 2:
        raise PatternError(f"{what} needs exactly two integers", pid, lineno)
    try:
        return int(words[0]), int(words[1])
    except ValueError:
        raise PatternError(f"{what} values must be integers", pid, lineno) from None


def _validate(p: PatternSpec, lineno: int) -> None:
    cmap = p.cell_map
    if cmap.get(Coord(0, 0)) is not PatternCell.ROBOT:
        raise PatternError("cell (0,0) must be the acting robot", p.id, lineno)
    shift = p.anchor or Coord(0, 0)
    for o, c in p.cells:
        if c is PatternCell.ANY:
            continue
        if _norm(o) > VIEW_RADIUS or _norm(o + shift) > VIEW_RADIUS:
            raise PatternError(f"offset {tuple(o)} lies outside the viewing radius {VIEW_RADIUS}", p.id, lineno)
    if p.kind.is_diag and p.hop_target not in DIAGONAL_UNITS:
        raise PatternError("diagonal hop target must be a diagonal unit offset", p.id, lineno)
    if p.kind.is_hv:
        if p.hop_target not in AXIS_UNITS:
            raise PatternError("HV hop target must be an axis unit offset", p.id, lineno)
        if cmap.get(p.hop_target) is not PatternCell.ROBOT:
            raise PatternError("HV hop target must be a required robot (the merge partner)", p.id, lineno)
    if p.kind.is_inhibit and p.anchor == Coord(0, 0):
        raise PatternError("inhibit anchor must not coincide with the acting robot", p.id, lineno)


def _check_inventory(specs: list[PatternSpec]) -> None:
    counts = {k: 0 for k in PatternKind}
    for p in specs:
        counts[p.kind] += 1
    want = {
        PatternKind.DIAG_A: 2,
        PatternKind.DIAG_B: 1,
        PatternKind.INHIBIT1: 1,
        PatternKind.INHIBIT2: 1,
        PatternKind.INHIBIT3: 1,
    }
    for kind, n in want.items():
        if counts[kind] != n:
            raise PatternError(f"library needs exactly {n} {kind.value} pattern(s), found {counts[kind]}")
    for kind in (PatternKind.HV1, PatternKind.HV2):
        if counts[kind] < 1:
            raise PatternError(f"library needs at least one {kind.value} pattern")


def default_patterns_path() -> Path:
    env = os.environ.get(PATTERNS_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("gather") / "data" / "default.patterns"))


def load_default_library() -> PatternLibrary:
    """Load the shipped library, or the file named by ``GATHER_PATTERNS``."""
    with open(default_patterns_path(), "rb") as fh:
        return load_patterns(fh)


# ---------------------------------------------------------------------------
# Decisions


@dataclass(frozen=True)
class InhibitCheck:
    upper_right: tuple[str, ...]
    lower_left: tuple[str, ...]
    inhibited: bool


def inhibit_matches(snap, hop_kind: PatternKind, t: Transform, lib: PatternLibrary) -> InhibitCheck:
    """Which inhibit patterns match around a robot whose diagonal hop matched under ``t``.

    DiagA looks at the upper-right area only and is inhibited by any match.
    DiagB also looks at the lower-left area, where every template and its
    anchor are mirrored at D, and is inhibited only if both areas match.
    """
    if not hop_kind.is_diag:
        raise ValueError(f"inhibit checks apply to diagonal hops, not {hop_kind.value}")
    ur = tuple(pid for pid, req, forb in lib._compiled_inhibits(t, False) if _ok(snap, req, forb))
    if hop_kind is PatternKind.DIAG_A:
        return InhibitCheck(ur, (), bool(ur))
    ll = tuple(pid for pid, req, forb in lib._compiled_inhibits(t, True) if _ok(snap, req, forb))
    return InhibitCheck(ur, ll, bool(ur) and bool(ll))


def check_inhibit(snap, hop_kind: PatternKind, t: Transform, lib: PatternLibrary) -> bool:
    return inhibit_matches(snap, hop_kind, t, lib).inhibited


def _ok(occ, req, forb) -> bool:
    return all(o in occ for o in req) and not any(o in occ for o in forb)


@dataclass(frozen=True)
class HopDecision:
    """Stay (``delta is None``) or a king-move hop, with where it came from.

    ``matches`` lists the (pattern id, transform) pairs behind the hop;
    ``inhibited`` lists diagonal matches that were suppressed, each with the
    ids of the inhibit patterns that fired.
    """

    delta: Coord | None
    matches: tuple[tuple[str, Transform], ...] = ()
    inhibited: tuple[tuple[str, Transform, tuple[str, ...]], ...] = ()
    note: str = ""

    @property
    def is_stay(self) -> bool:
        return self.delta is None

    @property
    def pattern_id(self) -> str | None:
        return self.matches[0][0] if self.matches else None

    @property
    def transform(self) -> Transform | None:
        return self.matches[0][1] if self.matches else None

    @property
    def inhibited_by(self) -> tuple[str, ...]:
        return tuple(sorted({pid for _, _, ids in self.inhibited for pid in ids}))


STAY = HopDecision(None)


def find_hop(snap, lib: PatternLibrary, strict: bool = True, robot=None) -> HopDecision:
    """Decide the hop of the robot at the centre of ``snap``.

    Hop patterns are tried in library order, each under the 8 transforms in
    TRANSFORMS order. A horizontal plus a vertical HV hop combine into one
    diagonal hop. Any other pair of distinct targets is ambiguous: strict mode
    raises AmbiguityError, lenient mode stays and logs a warning.
    """
    hv: list[tuple[str, Transform, Coord]] = []
    diag: list[tuple[str, Transform, Coord]] = []
    inhibited = []
    for c in lib._compiled_hops():
        if not c.matches(snap):
            continue
        if c.spec.kind.is_diag:
            chk = inhibit_matches(snap, c.spec.kind, c.t, lib)
            if chk.inhibited:
                inhibited.append((c.spec.id, c.t, chk.upper_right + chk.lower_left))
                continue
            diag.append((c.spec.id, c.t, c.target))
        else:
            hv.append((c.spec.id, c.t, c.target))

    if not hv and not diag:
        return HopDecision(None, (), tuple(inhibited))

    targets = {d for _, _, d in diag}
    horiz = {d for _, _, d in hv if d.y == 0}
    vert = {d for _, _, d in hv if d.x == 0}
    if horiz and vert and len(horiz) == 1 and len(vert) == 1:
        (h,), (v,) = horiz, vert
        targets.add(Coord(h.x, v.y))
    else:
        targets |= horiz | vert

    matches = tuple((pid, t) for pid, t, _ in hv + diag)
    if len(targets) > 1:
        msg = f"matches {[pid for pid, _ in matches]} imply targets {sorted(targets)}"
        if strict:
            raise AmbiguityError(msg, robot)
        log.warning("ambiguous decision, staying: %s", msg)
        return HopDecision(None, matches, tuple(inhibited), note="ambiguous")

    (delta,) = targets
    if delta == (0, 0):
        log.warning("hop target equals the robot's own cell; treating as stay")
        return HopDecision(None, matches, tuple(inhibited), note="zero target")
    return HopDecision(delta, matches, tuple(inhibited))
