import importlib
import json
import tomllib
from pathlib import Path

from typer.testing import CliRunner

from main import EXIT_INPUT, app

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"
RING = {"name": "R1", "variables": ["x", "y"], "degrees": [[1, 1]]}

runner = CliRunner()


def write_session(tmp_path, *checks) -> Path:
    path = tmp_path / "s.session"
    path.write_text(json.dumps({"ring": RING, "checks": list(checks)}, indent=2), encoding="utf-8")
    return path


def test_passing_session_exits_zero(tmp_path):
    path = write_session(tmp_path, {"check": "member", "poly": "x*y", "ideal": ["x"], "expect": True})
    result = runner.invoke(app, ["run", str(path)])
    assert result.exit_code == 0
    assert "1 pass, 0 fail" in result.output


def test_failing_check_exits_one():
    result = runner.invoke(app, ["run", str(SESSIONS / "example31.session")])
    assert result.exit_code == 1
    assert "extension to T" in result.output


def test_input_errors_exit_two(tmp_path):
    assert runner.invoke(app, ["run", str(tmp_path / "missing.session")]).exit_code == EXIT_INPUT
    bad = tmp_path / "bad.session"
    bad.write_text('{"ring": {"variables": ["x"]}, "checks": [{"check": "nope"}]}', encoding="utf-8")
    result = runner.invoke(app, ["run", str(bad)])
    assert result.exit_code == EXIT_INPUT
    assert "line 1" in result.output


def test_report_and_timing(tmp_path):
    path = write_session(tmp_path, {"check": "dedekind_mertens", "f": "x + y", "g": "x - y", "bound": 2})
    out = tmp_path / "reports" / "run.json"
    result = runner.invoke(app, ["run", str(path), "--report", str(out), "--timing"])
    assert result.exit_code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["records"][0]["value"] == 2
    assert "timing_s" in report["records"][0]
    assert out.with_suffix(".csv").exists()


def test_corpus_command_writes_json(tmp_path):
    ring = tmp_path / "r1.json"
    ring.write_text(json.dumps(RING), encoding="utf-8")
    out = tmp_path / "corpus.json"
    result = runner.invoke(app, ["corpus", str(ring), "--seed", "3", "--count", "4", "--out", str(out)])
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["seed"] == 3
    assert len(data["ideals"]) == 4
    again = tmp_path / "again.json"
    runner.invoke(app, ["corpus", str(ring), "--seed", "3", "--count", "4", "--out", str(again)])
    assert json.loads(again.read_text(encoding="utf-8")) == data


def test_corpus_command_needs_a_ring(tmp_path):
    result = runner.invoke(app, ["corpus", str(tmp_path / "none.json"), "--seed", "1"])
    assert result.exit_code == EXIT_INPUT


def test_console_script_points_at_the_app():
    project = tomllib.loads((SESSIONS.parent / "pyproject.toml").read_text(encoding="utf-8"))["project"]
    module, attr = project["scripts"]["gradstar"].split(":")
    assert getattr(importlib.import_module(module), attr) is app
