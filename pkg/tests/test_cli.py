import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from quadric_axes.cli import main, parse_rows
from quadric_axes.errors import InputError

DATA = Path(__file__).parent / "data"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_axes_report_schema(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(["axes", DATA / "rotated_321.txt", "--json", report], capsys)
    assert code == 0
    rep = json.loads(report.read_text())
    assert set(rep) == {"command", "inputs", "results", "residuals", "trace"}
    assert rep["results"]["chasles"]["lengths"] == pytest.approx([3, 2, 1], rel=1e-8)
    assert rep["results"]["agreement"]["max_angle"] < 1e-7
    # round trip: the report re-serialises to the same document
    assert json.loads(json.dumps(rep)) == rep


def test_axes_pinned_trace_has_quartic(capsys):
    code, out, _ = run(["axes", DATA / "pinned.txt"], capsys)
    assert code == 0
    rep = json.loads(out)
    q = np.array(rep["trace"]["edges"]["quartic"]["quartic_printed"], dtype=float)
    assert np.allclose(q / q[-1], [24, 0, -44, 4, 1], atol=1e-9)


def test_malformed_input(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0 0\n0 1\n0 0 1\n")
    code, _, err = run(["axes", bad], capsys)
    assert code == 2
    assert "line 2: expected 3 numbers" in err


def test_missing_file_and_bad_flag(capsys):
    assert run(["axes", "/nonexistent/x.txt"], capsys)[0] == 2
    assert run(["axes"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_degenerate_system_exit_code(capsys, tmp_path):
    f = tmp_path / "flat.txt"
    f.write_text("1 0 0\n2 0 0\n0 0 1\n")
    code, _, err = run(["axes", f], capsys)
    assert code == 1
    assert "degenerate" in err


def test_verify_random_tsv(capsys):
    code, out, _ = run(["verify", "--random", "50", "--ellipsoid", "3,2,1", "--seed", "1"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "check\tmax_residual\ttolerance\tstatus"
    assert all(line.endswith("PASS") for line in lines[1:])
    names = {line.split("\t")[0] for line in lines[1:]}
    assert {"sum_of_squares", "volume", "confocal_recovery"} <= names


def test_verify_file_with_wrong_ellipsoid_fails(capsys):
    code, out, _ = run(["verify", DATA / "rotated_321.txt"], capsys)
    assert code == 0
    code, out, _ = run(["verify", DATA / "rotated_321.txt", "--ellipsoid", "3,2,1.5"], capsys)
    assert code == 1
    assert "FAIL" in out


def test_verify_needs_input(capsys):
    assert run(["verify"], capsys)[0] == 2
    assert run(["verify", "--random", "0", "--ellipsoid", "3,2,1"], capsys)[0] == 2


def test_constructible_pinned(capsys):
    code, out, _ = run(["constructible", "--a", "1", "--b", "2", "--x", "2", "--y", "1", "--zsq", "3"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["verdict"] == "solid"
    assert rep["trace"]["witness"]["reference_comparison"]["surd_part"]["match"] is False


def test_constructible_quartic_and_float_rejection(capsys):
    code, out, _ = run(["constructible", "--quartic", "1,0,-5,0,6"], capsys)
    assert code == 0 and json.loads(out)["results"]["verdict"] == "planar"
    code, _, err = run(["constructible", "--quartic", "1,0,-5.0,0,6"], capsys)
    assert code == 2 and "p/q" in err
    assert run(["constructible", "--a", "1"], capsys)[0] == 2
    assert run(["constructible", "--quartic", "0,1,0,0,1"], capsys)[0] == 2


@pytest.mark.parametrize("which,labels", [
    ("rytz", ["P", "Q", "M", "L"]),
    ("focal", ["F1", "F2", "A", "B"]),
    ("projection", ["A", "B", "C̄", "D̄", "m", "X1"]),
    ("axes", ["O", "P", "a1", "a2"]),
])
def test_figures_are_svg_with_labels(capsys, tmp_path, which, labels):
    out = tmp_path / f"{which}.svg"
    code, _, _ = run(["figure", DATA / "pinned.txt", "--which", which, "--out", out], capsys)
    assert code == 0
    text = out.read_text(encoding="utf-8")
    assert text.lstrip().startswith("<?xml") and "<svg" in text and 'version="1.1"' in text
    for lab in labels:
        assert f">{lab}<" in text or f"{lab}</text>" in text, lab


def test_figure_2d_rytz_only(capsys, tmp_path):
    out = tmp_path / "r.svg"
    assert run(["figure", DATA / "pair_2d.txt", "--which", "rytz", "--out", out], capsys)[0] == 0
    assert out.exists()
    assert run(["figure", DATA / "pair_2d.txt", "--which", "focal", "--out", out], capsys)[0] == 2


def test_parse_rows():
    assert parse_rows("# header\n1 2\n\n3 4  # note\n") == [[1.0, 2.0], [3.0, 4.0]]
    with pytest.raises(InputError, match="empty input"):
        parse_rows("# nothing\n")
    with pytest.raises(InputError, match="line 1: expected 2 numbers"):
        parse_rows("1 x\n2 3\n", 2)
    with pytest.raises(InputError, match="expected 2 semi-diameters"):
        parse_rows("1 2\n")


def test_env_tolerance_override(capsys, monkeypatch):
    monkeypatch.setenv("QUADRIC_AXES_TOL", "1e-6")
    code, out, _ = run(["axes", DATA / "rotated_321.txt"], capsys)
    assert code == 0 and json.loads(out)["inputs"]["tol"] == 1e-6
    monkeypatch.setenv("QUADRIC_AXES_TOL", "-1")
    assert run(["axes", DATA / "rotated_321.txt"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quadric_axes", "constructible", "--quartic", "1,0,0,0,-1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["verdict"] == "planar"
