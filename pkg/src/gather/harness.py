"""Batch experiments: build swarms, run them with lemma checks, write traces and a summary.

Config files are YAML; the schema is documented in ``docs/config.md``.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import yaml

from .engine import SimConfig, Trace, run, theorem_bound
from .errors import GatherError, InvalidInput
from .generators import GeneratorSpec
from .grid import Swarm, is_connected
from .metrics import ProgressMeasures, measures
from .patterns import PatternLibrary, load_default_library, load_patterns
from .swarm_io import load_swarm, to_text_map


def render_frame(s: Swarm) -> str:
    """Text-map drawing of the bounding box, top row first."""
    return to_text_map(s)


@dataclass(frozen=True)
class RunInput:
    """One entry of the run list: a generator or a swarm file."""

    label: str
    generator: GeneratorSpec | None = None
    path: Path | None = None

    def load(self) -> Swarm:
        if self.generator is not None:
            return self.generator.build()
        return load_swarm(self.path)


@dataclass
class ExperimentConfig:
    runs: list[RunInput]
    sim: SimConfig = field(default_factory=SimConfig)
    output_dir: Path = Path("out")
    trace_file: str = "trace.jsonl"
    summary_file: str = "summary.csv"
    frames_file: str = "frames.txt"
    render: bool = False
    patterns: Path | None = None

    def __post_init__(self) -> None:
        if not self.runs:
            raise InvalidInput("experiment config needs at least one run")


_TOP_KEYS = {
    "runs", "max_rounds", "strict_conflicts", "lemma_checks", "record_trace",
    "output_dir", "trace_file", "summary_file", "frames_file", "render", "patterns",
}


def _expand(entry: dict[str, Any]) -> list[dict[str, Any]]:
    """Expand list-valued parameters into one run per combination."""
    keys = sorted(k for k, v in entry.items() if isinstance(v, list))
    if not keys:
        return [entry]
    out = []
    for combo in itertools.product(*(entry[k] for k in keys)):
        e = dict(entry)
        e.update(zip(keys, combo))
        out.append(e)
    return out


def parse_config(text: str, base_dir: Path = Path(".")) -> ExperimentConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InvalidInput(f"config is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidInput("config must be a mapping with a 'runs' list")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise InvalidInput(f"unknown config keys: {sorted(unknown)}")
    raw_runs = doc.get("runs")
    if not isinstance(raw_runs, list) or not raw_runs:
        raise InvalidInput("config needs a nonempty 'runs' list")

    runs = []
    for raw in raw_runs:
        if not isinstance(raw, dict):
            raise InvalidInput(f"run entry must be a mapping, got {raw!r}")
        if "file" in raw:
            if set(raw) != {"file"}:
                raise InvalidInput("a file run takes only the 'file' key")
            path = Path(raw["file"])
            if not path.is_absolute():
                path = base_dir / path
            runs.append(RunInput(f"file {raw['file']}", path=path))
            continue
        if "seeds" in raw:
            raw = {**{k: v for k, v in raw.items() if k != "seeds"}, "seed": list(raw["seeds"])}
        for entry in _expand(raw):
            entry = dict(entry)
            kind = entry.pop("kind", None)
            if kind is None:
                raise InvalidInput(f"run entry needs 'kind' or 'file': {raw!r}")
            seed = entry.pop("seed", None)
            spec = GeneratorSpec(kind, entry, seed)
            runs.append(RunInput(spec.label(), generator=spec))

    sim = SimConfig(
        max_rounds=doc.get("max_rounds"),
        strict_conflicts=bool(doc.get("strict_conflicts", True)),
        lemma_checks=bool(doc.get("lemma_checks", True)),
        record_trace=bool(doc.get("record_trace", True)),
    )
    out_dir = Path(doc.get("output_dir", "out"))
    if not out_dir.is_absolute():
        out_dir = base_dir / out_dir
    patterns = doc.get("patterns")
    if patterns is not None:
        patterns = Path(patterns)
        if not patterns.is_absolute():
            patterns = base_dir / patterns
    return ExperimentConfig(
        runs=runs,
        sim=sim,
        output_dir=out_dir,
        trace_file=doc.get("trace_file", "trace.jsonl"),
        summary_file=doc.get("summary_file", "summary.csv"),
        frames_file=doc.get("frames_file", "frames.txt"),
        render=bool(doc.get("render", False)),
        patterns=patterns,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), path.parent)


@dataclass
class SummaryRow:
    run: int
    source: str
    n: int | None = None
    boundary: int | None = None
    rounds: int | None = None
    bound: int | None = None
    ratio: float | None = None
    outcome: str = "error"
    lemma_violations: int = 0
    merges: int = 0
    area_increase: int = 0
    area_bound: int | None = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return (
            self.outcome == "gathered"
            and self.lemma_violations == 0
            and self.rounds is not None
            and self.rounds <= self.bound
            and self.area_increase <= self.area_bound
        )

    def csv_row(self) -> list[str]:
        def s(v):
            return "" if v is None else str(v)

        return [
            s(self.run), self.source, s(self.n), s(self.boundary), s(self.rounds), s(self.bound),
            "" if self.ratio is None else f"{self.ratio:.6f}", self.outcome, s(self.lemma_violations),
            s(self.merges), s(self.area_increase), s(self.area_bound), "1" if self.ok else "0", self.error,
        ]


CSV_HEADER = [
    "run", "source", "n", "B", "rounds", "bound_6B2_5B", "rounds_per_B2", "outcome",
    "lemma_violations", "merges", "area_increase", "area_bound_5B2", "ok", "error",
]


@dataclass
class ExperimentSummary:
    rows: list[SummaryRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(r.csv_row())
        return buf.getvalue()


def _trace_record(run_id: int, k: int, hops, merges: int, robots: int, m: ProgressMeasures | None) -> str:
    rec: dict[str, Any] = {
        "run": run_id,
        "round": k,
        "hops": [[a.x, a.y, b.x, b.y] for a, b in hops],
        "merges": merges,
        "robots": robots,
    }
    if m is not None:
        rec.update(m.as_dict())
    return json.dumps(rec, separators=(",", ":"))


def run_one(
    run_id: int,
    item: RunInput,
    lib: PatternLibrary,
    sim: SimConfig,
    trace_out: TextIO | None = None,
    frames_out: TextIO | None = None,
) -> tuple[SummaryRow, Trace | None]:
    row = SummaryRow(run_id, item.label)
    try:
        swarm = item.load()
    except (GatherError, OSError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        return row, None
    row.n = len(swarm)
    if not is_connected(swarm):
        row.error = "InvalidInput: swarm is not 4-connected"
        return row, None

    def emit_frame(k: int, s: Swarm) -> None:
        if frames_out is not None:
            frames_out.write(f"run {run_id} round {k}\n{render_frame(s)}\n\n")

    def observer(k, s, res, m):
        if trace_out is not None:
            trace_out.write(_trace_record(run_id, k, res.hops, res.merges, res.robots_after, m) + "\n")
        emit_frame(k, s)

    if trace_out is not None:
        trace_out.write(_trace_record(run_id, 0, (), 0, len(swarm), measures(swarm)) + "\n")
    emit_frame(0, swarm)
    trace = run(swarm, lib, sim, observer=observer)

    b = trace.initial_boundary
    row.boundary = b
    row.bound = theorem_bound(b)
    row.area_bound = 5 * b * b
    row.rounds = trace.rounds_executed
    row.ratio = row.rounds / (b * b)
    row.merges = trace.merges
    row.area_increase = trace.area_increase
    out = trace.outcome
    row.outcome = out.kind
    if out.kind == "error":
        row.error = f"{out.error}: {out.detail}"
        if out.error == "LemmaViolation":
            row.lemma_violations = 1
    elif out.detail:
        row.error = out.detail
    return row, trace


def library_for(cfg: ExperimentConfig) -> PatternLibrary:
    if cfg.patterns is None:
        return load_default_library()
    with open(cfg.patterns, "rb") as fh:
        return load_patterns(fh)


def run_experiments(cfg: ExperimentConfig, lib: PatternLibrary | None = None) -> ExperimentSummary:
    """Run every configured swarm and write the JSONL trace and CSV summary.

    Files are written in run order with no timestamps, so the same config
    always produces byte-identical outputs.
    """
    lib = lib or library_for(cfg)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    frames_path = cfg.output_dir / cfg.frames_file
    with open(cfg.output_dir / cfg.trace_file, "w", encoding="utf-8", newline="\n") as trace_out:
        frames_out = open(frames_path, "w", encoding="utf-8", newline="\n") if cfg.render else None
        try:
            for i, item in enumerate(cfg.runs):
                row, _ = run_one(i, item, lib, cfg.sim, trace_out, frames_out)
                rows.append(row)
        finally:
            if frames_out is not None:
                frames_out.close()
    summary = ExperimentSummary(rows)
    (cfg.output_dir / cfg.summary_file).write_text(summary.to_csv(), encoding="utf-8")
    return summary
