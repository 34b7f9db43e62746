"""``gather`` command line."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .engine import SimConfig, run, theorem_bound
from .errors import GatherError
from .harness import load_config, render_frame, run_experiments
from .metrics import boundary_robots, measures
from .patterns import PatternKind, default_patterns_path, load_default_library, load_patterns
from .swarm_io import load_swarm


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    summary = run_experiments(cfg)
    for r in summary.rows:
        status = "ok" if r.ok else "FAIL"
        print(f"[{status}] run {r.run} {r.source}: n={r.n} B={r.boundary} rounds={r.rounds} "
              f"bound={r.bound} outcome={r.outcome}{' ' + r.error if r.error else ''}")
    print(f"wrote {cfg.output_dir / cfg.trace_file} and {cfg.output_dir / cfg.summary_file}")
    return summary.exit_code


def _cmd_simulate(args: argparse.Namespace) -> int:
    swarm = load_swarm(args.input)
    lib = load_default_library()
    cfg = SimConfig(max_rounds=args.max_rounds, strict_conflicts=args.strict)
    m0 = measures(swarm)
    print(f"round 0: robots={len(swarm)} {_fmt(m0)}")
    if args.render:
        print(render_frame(swarm) + "\n")

    def observer(k, s, res, m):
        print(f"round {k}: hops={len(res.hops)} merges={res.merges} robots={res.robots_after} {_fmt(m)}")
        if args.render:
            print(render_frame(s) + "\n")

    trace = run(swarm, lib, cfg, observer=observer)
    b = m0.boundary_len
    out = trace.outcome
    print(f"outcome: {out.kind} after {trace.rounds_executed} rounds (bound 6B^2+5B = {theorem_bound(b)})"
          + (f"; {out.error}: {out.detail}" if out.error else "")
          + (f"; {out.detail}" if out.detail and not out.error else ""))
    ok = out.gathered and trace.rounds_executed <= theorem_bound(b)
    return 0 if ok else 1


def _fmt(m) -> str:
    return " ".join(f"{k}={v}" for k, v in m.as_dict().items())


def _cmd_measure(args: argparse.Namespace) -> int:
    swarm = load_swarm(args.input)
    m = measures(swarm)
    report = {"robots": len(swarm), **m.as_dict(), "boundary_robots": len(boundary_robots(swarm))}
    print(json.dumps(report))
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.patterns) if args.patterns else default_patterns_path()
    with open(path, "rb") as fh:
        lib = load_patterns(fh)
    counts = {k.value: len(lib.by_kind(k)) for k in PatternKind}
    print(f"{path}: version {lib.version}, {len(lib.patterns)} patterns")
    print(", ".join(f"{k} {v}" for k, v in counts.items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gather", description="Grid gathering simulator and lemma checker.")
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings from the decision function")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a batch experiment from a YAML config")
    r.add_argument("--config", required=True)
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("simulate", help="simulate one swarm file until it gathers")
    s.add_argument("--input", required=True, help="text map or JSON swarm file")
    s.add_argument("--render", action="store_true", help="print an ASCII frame after every round")
    s.add_argument("--max-rounds", type=int, default=None)
    s.add_argument("--strict", action="store_true", help="fail on ambiguous decisions instead of staying")
    s.set_defaults(func=_cmd_simulate)

    m = sub.add_parser("measure", help="print the progress measures of a swarm file")
    m.add_argument("--input", required=True)
    m.set_defaults(func=_cmd_measure)

    v = sub.add_parser("validate-patterns", help="load and validate a pattern file")
    v.add_argument("--patterns", default=None, help="defaults to $GATHER_PATTERNS or the shipped file")
    v.set_defaults(func=_cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (GatherError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
