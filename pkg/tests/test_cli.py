import importlib.util
import json
from pathlib import Path

import pytest

from sumfree.cli import main
from sumfree.core import SCHEMA_VERSION, VERSION, load_set

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

_spec = importlib.util.spec_from_file_location(
    "golden_regenerate", GOLDEN_DIR / "regenerate.py"
)
_golden = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(_golden)

COMMANDS = _golden.COMMANDS
fixture = _golden.fixture


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def assert_json_equal(actual, expected, path="report"):
    """Exact on ints/strings/bools, approximate on floats."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict) and set(actual) == set(expected), path
        for key in expected:
            assert_json_equal(actual[key], expected[key], f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), path
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_json_equal(a, e, f"{path}[{i}]")
    elif isinstance(expected, float):
        assert actual == pytest.approx(expected, rel=1e-12, abs=1e-12), path
    else:
        assert actual == expected, path


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_golden_report(capsys, name):
    code, out, err = run_cli(capsys, COMMANDS[name])
    assert code == 0
    envelope = json.loads(out)
    expected = json.loads((GOLDEN_DIR / f"{name}.json").read_text())
    assert_json_equal(envelope["report"], expected)
    assert err.strip(), "human summary expected on stderr"


def test_envelope_shape(capsys):
    code, out, _ = run_cli(capsys, COMMANDS["solve"])
    assert code == 0
    envelope = json.loads(out)
    assert set(envelope) == {
        "schema_version",
        "version",
        "command",
        "elapsed_seconds",
        "report",
    }
    assert envelope["schema_version"] == SCHEMA_VERSION
    assert envelope["version"] == VERSION
    assert envelope["command"] == COMMANDS["solve"]
    assert isinstance(envelope["elapsed_seconds"], float)


def test_text_set_format(capsys):
    code, out, _ = run_cli(capsys, ["solve", "--set", fixture("plain.txt")])
    assert code == 0
    report = json.loads(out)["report"]
    assert report["input_size"] == 3
    assert report["optimum"] == 3


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--no-such-flag"])
    assert exc.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert VERSION in capsys.readouterr().out


def test_domain_errors_exit_1(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"elements": []}))
    cases = [
        ["solve", "--set", str(tmp_path / "missing.json")],
        ["sweep", "--set", str(empty)],
        ["compose", "--set-a", fixture("klarner.json")],
        ["weight", "build", "--eps", "1/2", "--cells", "8"],  # default steps overflow
        ["equidist", "check", "--theta", "1.5", "--a", "2", "--n", "10"],
    ]
    for argv in cases:
        code, out, err = run_cli(capsys, argv)
        assert code == 1, argv
        assert out == "", argv
        assert err.startswith("error:"), argv


def test_failed_catalog_verification_unused_flag_ok(capsys):
    code, out, _ = run_cli(capsys, ["catalog"])
    assert code == 0
    entries = json.loads(out)["report"]["entries"]
    assert all("verified" not in e for e in entries)


def test_compose_out_round_trips(capsys, tmp_path):
    out_path = tmp_path / "composed.json"
    code, out, _ = run_cli(
        capsys,
        [
            "compose",
            "--set-a",
            fixture("klarner.json"),
            "--set-b",
            fixture("klarner.json"),
            "--out",
            str(out_path),
        ],
    )
    assert code == 0
    written = load_set(out_path)
    assert list(written.elements) == json.loads(out)["report"]["set"]["elements"]


def test_weight_out_round_trips(capsys, tmp_path):
    w_path = tmp_path / "w.json"
    code, _, _ = run_cli(
        capsys,
        ["weight", "build", "--eps", "1/2", "--cells", "4", "--steps", "1",
         "--out", str(w_path)],
    )
    assert code == 0
    code, out, _ = run_cli(
        capsys,
        ["weight", "sample", "--weight", str(w_path), "--n", "32", "--seed", "1",
         "--out", str(tmp_path / "sampled.json")],
    )
    assert code == 0
    sampled = load_set(tmp_path / "sampled.json")
    assert list(sampled.elements) == json.loads(out)["report"]["set"]["elements"]


def test_check_subcommand_passes(capsys):
    code, out, err = run_cli(capsys, ["check", "--suite", "equidist", "--seed", "7"])
    assert code == 0
    report = json.loads(out)["report"]
    assert report["passed"] and report["failed"] == []
    assert "checks passed" in err


def test_thread_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("SUMFREE_THREADS", "not-a-number")
    code, _, err = run_cli(capsys, COMMANDS["solve"])
    assert code == 1 and "SUMFREE_THREADS" in err
    monkeypatch.setenv("SUMFREE_THREADS", "0")
    code, _, _ = run_cli(capsys, COMMANDS["solve"])
    assert code == 1
    monkeypatch.setenv("SUMFREE_THREADS", "2")
    code, _, _ = run_cli(capsys, COMMANDS["solve"])
    assert code == 0
