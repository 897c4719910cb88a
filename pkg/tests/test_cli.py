import json

import pytest
from conftest import FIXTURES

from arigraph.cli import main

FIXTURE = FIXTURES / "treasure_hunt_easy_seed0.jsonl"


def _run(tmp_path, *extra):
    out = tmp_path / "out"
    code = main(["run", "--task", "treasure_hunt", "--fixtures", str(FIXTURE), "--runs", "2",
                 "--report-best", "1", "--out", str(out), "--no-figures", *extra])
    return code, out


def test_run_aggregate_and_replay(tmp_path, capsys):
    code, out = _run(tmp_path)
    assert code == 0
    text = capsys.readouterr().out
    assert "won" in text and "arigraph" in text
    assert (out / "aggregate" / "comparison.csv").exists()
    assert main(["aggregate", str(out), "--no-figures"]) == 0
    assert main(["replay", str(out / "arigraph" / "seed1")]) == 0
    assert "replay identical: won" in capsys.readouterr().out


def test_replay_detects_divergence(tmp_path, capsys):
    _, out = _run(tmp_path)
    run_dir = out / "arigraph" / "seed0"
    lines = (run_dir / "fixtures.jsonl").read_text().splitlines()
    records = [json.loads(line) for line in lines]
    # make the first decision pick a different action
    first = next(r for r in records if r["stage"] == "action")
    first["response"] = '{"reason_for_action": "x", "action_to_take": "look"}'
    altered = tmp_path / "altered.jsonl"
    altered.write_text("".join(json.dumps(r) + "\n" for r in records))
    assert main(["replay", str(run_dir), "--fixtures", str(altered)]) == 1
    assert "replay diverged at step 0" in capsys.readouterr().out


def test_run_config_errors(tmp_path, capsys):
    assert main(["run", "--task", "treasure_hunt", "--fixtures", str(tmp_path / "missing")]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["run", "--out", str(tmp_path)]) == 2


def test_run_from_yaml_with_oracle(tmp_path, capsys):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text(f"task: cooking\ndifficulty: medium\nruns: 1\nreport_best: 1\nout: {tmp_path / 'o'}\n")
    assert main(["run", "--config", str(cfg), "--oracle", "--mode", "rag,summary", "--no-figures"]) == 0
    out = capsys.readouterr().out
    assert "rag" in out and "summary" in out


def test_snapshot_command(tmp_path, capsys):
    _, out = _run(tmp_path)
    assert main(["snapshot", str(out / "arigraph" / "seed0" / "graph.snapshot"), "--triplets",
                 "--episode", "0"]) == 0
    text = capsys.readouterr().out
    assert "round trip: identical" in text
    assert "has exit" in text
    assert "step 0 action None" in text


def test_play(monkeypatch, capsys):
    answers = iter(["help", "go nowhere", "quit"])
    monkeypatch.setattr("builtins.input", lambda _prompt="": next(answers))
    assert main(["play", "--task", "treasure_hunt", "--seed", "0"]) == 0
    text = capsys.readouterr().out
    assert "Valid actions:" in text
    assert "You can't do that." in text
    assert "Final score: 0/5 (running)" in text


def test_help_exits_cleanly():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
