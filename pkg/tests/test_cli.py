import json
import subprocess
import sys

import pytest

from symvenn.cli import run


def test_validate_exit_codes(capsys):
    assert run(["validate", "-n", "7", "--alpha", "3,2,3,4"]) == 0
    assert "valid" in capsys.readouterr().out
    assert run(["validate", "-n", "7", "--alpha", "4,3,2,3"]) == 1
    assert run(["validate", "-n", "7", "--alpha", "3,2,3,4", "--oracle"]) == 0


def test_validate_order_nine(capsys):
    assert run(["validate", "-n", "9", "--alpha", "3,2"]) == 2
    err = capsys.readouterr().err
    assert "order must be an odd prime (alpha length non-integral)" in err


def test_usage_errors(capsys):
    assert run(["validate", "-n", "7"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["search", "-n", "7", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["validate", "-n", "7", "--alpha", "3,2,3"]) == 2
    assert run(["search", "-n", "7", "--unit", "x"]) == 2


def test_validate_raw_sigma():
    assert run(["validate", "-n", "7", "--sigma", "1,3,2,5,4,3,2,3,4,6,5,4,3,2,5,4,3,4"]) == 0
    assert run(["validate", "-n", "7", "--sigma", "1,2,3"]) == 1


def test_search_roundtrip(tmp_path, capsys):
    out = tmp_path / "r7.txt"
    assert run(["search", "-n", "7", "--out", str(out)]) == 0
    streamed = capsys.readouterr().out.split()
    assert sorted(streamed) == out.read_text().split()
    meta = json.loads((tmp_path / "r7.txt.json").read_text())
    assert meta["complete"] and meta["valid_count"] == 4
    assert run(["validate", "-n", "7", "--alpha-file", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and all(": valid" in ln for ln in lines)


def test_search_roundtrip_empty_alpha(tmp_path):
    out = tmp_path / "r5.txt"
    assert run(["search", "-n", "5", "--out", str(out)]) == 0
    assert run(["validate", "-n", "5", "--alpha-file", str(out)]) == 0


def test_alpha_file_with_one_bad_line(tmp_path, capsys):
    f = tmp_path / "a.txt"
    f.write_text("3,2,3,4  # M4\n\n# next is wrong\n4 3 2 3\n")
    assert run(["validate", "-n", "7", "--alpha-file", str(f)]) == 1
    out = capsys.readouterr().out
    assert "3,2,3,4: valid" in out and "4,3,2,3: invalid" in out


def test_missing_file_is_io_error(tmp_path):
    assert run(["validate", "-n", "7", "--alpha-file", str(tmp_path / "nope")]) == 3
    assert run(["render", "-n", "7", "--alpha", "3,2,3,4", "-o", str(tmp_path / "x" / "y.svg")]) == 3


def test_render_and_dual(tmp_path):
    svg = tmp_path / "m4.svg"
    assert run(["render", "-n", "7", "--alpha", "3,2,3,4", "--layout", "cylinder", "--shade", "-o", str(svg)]) == 0
    assert svg.read_text().count("<path") == 7
    assert run(["render", "-n", "7", "--alpha", "4,3,2,3", "-o", str(svg)]) == 1
    dual = tmp_path / "d.txt"
    assert run(["dual", "-n", "3", "--alpha", "-", "--format", "edges", "-o", str(dual)]) == 0
    assert len(dual.read_text().splitlines()) == 12


def test_info(tmp_path, capsys):
    assert run(["info", "-n", "11"]) == 0
    out = capsys.readouterr().out
    assert "alpha length = 84" in out and "5:22" in out
    assert run(["info", "-n", "7", "--alpha", "3,2,4,3", "--report", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "crosscuts = 7" in out and "polar symmetric = true" in out
    assert (tmp_path / "census.csv").exists() and (tmp_path / "census.png").exists()
    assert run(["info", "-n", "7", "--report", str(tmp_path)]) == 2


def test_canon(capsys):
    assert run(["canon", "--seq", "3,1,2,5"]) == 0
    assert capsys.readouterr().out.strip() == "1,3,2,5"


def test_checkpoint_flag(tmp_path):
    ck = tmp_path / "ck.json"
    assert run(["search", "-n", "7", "--checkpoint", str(ck)]) == 0
    data = json.loads(ck.read_text())
    data["version"] = 0
    ck.write_text(json.dumps(data))
    assert run(["search", "-n", "7", "--checkpoint", str(ck)]) == 2


@pytest.mark.parametrize("argv", [["-m", "symvenn"]])
def test_module_entry_point(argv):
    proc = subprocess.run(
        [sys.executable, *argv, "validate", "-n", "7", "--alpha", "3,2,3,4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip().endswith("(18 regions/orbits)")
