import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from gather import InvalidInput, Swarm, filled_rect
from gather.cli import main
from gather.harness import load_config, parse_config, render_frame, run_experiments
from gather.swarm_io import parse_text_map


def write_config(tmp_path, body: str) -> Path:
    cfg = tmp_path / "exp.yaml"
    cfg.write_text(body)
    return cfg


def read_summary(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_render_frame_examples():
    assert render_frame(filled_rect(2, 2)) == "##\n##"
    assert render_frame(Swarm.of([(5, 5)])) == "#"
    s = Swarm.of([(2, 3), (3, 3), (3, 4), (3, 5), (4, 5)])
    assert parse_text_map(render_frame(s)) == s.normalized()


def test_parse_config_expands_lists_and_seeds(tmp_path):
    cfg = parse_config(
        """
        max_rounds: 500
        runs:
          - {kind: square_ring, side: [6, 10]}
          - {kind: random_connected, n: 30, seeds: [1, 2, 3]}
          - {file: swarm.txt}
        """,
        tmp_path,
    )
    labels = [r.label for r in cfg.runs]
    assert labels[:2] == ["square_ring side=6", "square_ring side=10"]
    assert labels[2:5] == [f"random_connected n=30 seed={s}" for s in (1, 2, 3)]
    assert cfg.runs[5].path == tmp_path / "swarm.txt"
    assert cfg.sim.max_rounds == 500 and cfg.sim.lemma_checks
    assert cfg.output_dir == tmp_path / "out"


@pytest.mark.parametrize(
    "text",
    [
        "runs: []",
        "[1, 2]",
        "runs:\n  - {side: 3}",
        "bogus: 1\nruns:\n  - {kind: line, length: 3}",
        "runs:\n  - {file: a.txt, kind: line}",
        "runs: [: bad",
    ],
)
def test_parse_config_rejects_bad_documents(tmp_path, text):
    with pytest.raises(InvalidInput):
        parse_config(text, tmp_path)


def test_gathered_input_gives_zero_rounds(tmp_path):
    (tmp_path / "block.txt").write_text("##\n##\n")
    cfg = load_config(write_config(tmp_path, "runs:\n  - {file: block.txt}\n"))
    summary = run_experiments(cfg)
    assert summary.exit_code == 0
    row = summary.rows[0]
    assert row.rounds == 0 and row.outcome == "gathered"
    lines = (cfg.output_dir / "trace.jsonl").read_text().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["round"] == 0


def test_ring_family_rows_respect_bound(tmp_path):
    cfg = load_config(write_config(tmp_path, "runs:\n  - {kind: square_ring, side: [6, 10, 14, 18]}\n"))
    summary = run_experiments(cfg)
    assert summary.exit_code == 0 and len(summary.rows) == 4
    rows = read_summary(cfg.output_dir / "summary.csv")
    for r in rows:
        b = int(r["B"])
        assert int(r["rounds"]) <= int(r["bound_6B2_5B"]) == 6 * b * b + 5 * b
        assert r["lemma_violations"] == "0" and r["ok"] == "1"
        assert float(r["rounds_per_B2"]) == pytest.approx(int(r["rounds"]) / b**2, abs=1e-6)


def test_trace_records_every_round(tmp_path):
    cfg = load_config(write_config(tmp_path, "runs:\n  - {kind: random_connected, n: 40, seed: 9}\n"))
    summary = run_experiments(cfg)
    recs = [json.loads(x) for x in (cfg.output_dir / "trace.jsonl").read_text().splitlines()]
    assert [r["round"] for r in recs] == list(range(summary.rows[0].rounds + 1))
    keys = {"run", "round", "hops", "merges", "robots", "boundary_len", "convex_count", "convex_measure", "area"}
    assert all(set(r) == keys for r in recs)
    assert all(r["convex_measure"] == 4 * r["boundary_len"] - r["convex_count"] for r in recs)


def test_disconnected_file_gives_error_row_and_nonzero_exit(tmp_path):
    (tmp_path / "split.txt").write_text("#.#\n")
    (tmp_path / "ok.json").write_text("[[0,0],[1,0],[2,0]]")
    cfg = load_config(write_config(tmp_path, "runs:\n  - {file: split.txt}\n  - {file: ok.json}\n"))
    summary = run_experiments(cfg)
    assert summary.exit_code == 1
    bad, good = summary.rows
    assert bad.outcome == "error" and "4-connected" in bad.error
    assert good.ok


def test_missing_file_is_an_error_row(tmp_path):
    cfg = load_config(write_config(tmp_path, "runs:\n  - {file: nope.txt}\n"))
    summary = run_experiments(cfg)
    assert summary.exit_code == 1 and "nope.txt" in summary.rows[0].error


def test_render_writes_frames(tmp_path):
    cfg = load_config(write_config(tmp_path, "render: true\nruns:\n  - {kind: line, length: 3}\n"))
    run_experiments(cfg)
    frames = (cfg.output_dir / "frames.txt").read_text()
    assert frames == "run 0 round 0\n###\n\nrun 0 round 1\n#\n\n"


def test_same_config_gives_identical_files(tmp_path):
    body = "output_dir: {d}\nruns:\n  - {{kind: random_connected, n: 50, seeds: [1, 2]}}\n  - {{kind: cross, arm: 3}}\n"
    a = load_config(write_config(tmp_path, body.format(d="a")))
    b = load_config(write_config(tmp_path, body.format(d="b")))
    run_experiments(a)
    run_experiments(b)
    for name in ("trace.jsonl", "summary.csv"):
        assert (a.output_dir / name).read_bytes() == (b.output_dir / name).read_bytes()


def test_cli_run_and_exit_status(tmp_path, capsys):
    cfg = write_config(tmp_path, "runs:\n  - {kind: square_ring, side: 5}\n")
    assert main(["run", "--config", str(cfg)]) == 0
    assert "[ok]" in capsys.readouterr().out


def test_cli_simulate_render_and_strict(tmp_path, capsys):
    f = tmp_path / "s.txt"
    f.write_text("###\n")
    assert main(["simulate", "--input", str(f), "--render", "--strict"]) == 0
    out = capsys.readouterr().out
    assert "outcome: gathered after 1 rounds" in out and "###" in out
    assert main(["simulate", "--input", str(f), "--max-rounds", "1"]) == 0


def test_cli_simulate_round_limit(tmp_path, capsys):
    f = tmp_path / "ring.json"
    f.write_text(json.dumps([[x, y] for x in range(8) for y in range(8) if x in (0, 7) or y in (0, 7)]))
    assert main(["simulate", "--input", str(f), "--max-rounds", "1"]) == 1
    assert "max_rounds" in capsys.readouterr().out


def test_cli_measure(tmp_path, capsys):
    f = tmp_path / "m.txt"
    f.write_text("###\n###\n###\n")
    assert main(["measure", "--input", str(f)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {"robots": 9, "boundary_len": 8, "convex_count": 4, "convex_measure": 28, "area": 9, "boundary_robots": 8}


def test_cli_validate_patterns(tmp_path, capsys, monkeypatch):
    assert main(["validate-patterns"]) == 0
    assert "DiagA 2, DiagB 1" in capsys.readouterr().out
    bad = tmp_path / "bad.patterns"
    bad.write_text("X DiagA 1 1\n@ . . . . . . . #\n")
    assert main(["validate-patterns", "--patterns", str(bad)]) == 2
    assert "viewing radius" in capsys.readouterr().err
    monkeypatch.setenv("GATHER_PATTERNS", str(bad))
    assert main(["validate-patterns"]) == 2


def test_cli_bad_input_file(tmp_path, capsys):
    f = tmp_path / "x.txt"
    f.write_text("#?#\n")
    assert main(["measure", "--input", str(f)]) == 2


def test_console_script_is_installed(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("##\n")
    out = subprocess.run([sys.executable, "-m", "gather.cli", "measure", "--input", str(f)], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["robots"] == 2
