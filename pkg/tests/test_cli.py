import json
import subprocess
import sys

import pytest

from oscbasis import cli, example_path

FIG8 = str(example_path("figure8"))
ALL_COMMANDS = ("info", "track", "basis", "nz", "sy", "solve", "check", "svg")


@pytest.fixture
def bad_file(tmp_path):
    p = tmp_path / "bad.tri"
    p.write_text("2\n1:0132 1:1230 1:2310\n0:0132 0:3201 0:3012 0:2103\n")
    return str(p)


def test_info(capsys):
    assert cli.main(["info", "--input", FIG8]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["tetrahedra"], doc["edges"], doc["ends"], doc["genera"]) == (2, 2, 1, [1])
    assert doc["euler_identity"]["holds"]


def test_positional_input(capsys):
    assert cli.main(["info", FIG8]) == 0
    assert json.loads(capsys.readouterr().out)["tetrahedra"] == 2


def test_check_passes(capsys):
    assert cli.main(["check", FIG8, "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "8/8 suites passed (seed 0)"
    assert "FAIL" not in out


def test_check_json(capsys):
    assert cli.main(["check", FIG8, "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 3
    assert all(s["passed"] for s in doc["suites"])


def test_malformed_input(bad_file, capsys):
    assert cli.main(["sy", "--input", bad_file]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: malformed: expected 4 face gluings, found 3")
    assert "line 2" in err


def test_json_errors(bad_file, capsys):
    assert cli.main(["sy", "--input", bad_file, "--json-errors"]) == 1
    doc = json.loads(capsys.readouterr().err)
    assert doc["error"] == "malformed"
    assert doc["line"] == 2
    assert doc["tet"] == 0


def test_missing_file(tmp_path, capsys):
    assert cli.main(["info", str(tmp_path / "nope.tri")]) == 1
    assert "error: io" in capsys.readouterr().err


def test_internal_failure_exit_code(monkeypatch, capsys):
    def boom(track):
        raise cli.CurveError("routing gave up")
    monkeypatch.setattr(cli, "build_basis", boom)
    assert cli.main(["basis", FIG8]) == 2
    assert "routing gave up" in capsys.readouterr().err


def test_csv_format(capsys):
    assert cli.main(["sy", FIG8, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "row,z0,z0',z1,z1'"
    assert [l.split(",")[0] for l in lines[1:]] == ["m0", "l0", "Gamma1", "C1"]


def _run_all(out_dir):
    for cmd in ALL_COMMANDS:
        assert cli.main([cmd, FIG8, "--out", str(out_dir)]) == 0
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


def test_outputs_are_byte_identical(tmp_path, capsys):
    first = _run_all(tmp_path / "a")
    second = _run_all(tmp_path / "b")
    assert first == second
    assert set(first) == {"info.json", "track.json", "basis.json", "nz.json", "nz.csv", "sy.json",
                          "sy.csv", "incidence.csv", "solution.json", "check.json", "end0.svg"}


def test_no_temp_files_left(tmp_path, capsys):
    cli.main(["sy", FIG8, "--out", str(tmp_path)])
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_svg_contains_every_row(tmp_path, capsys):
    assert cli.main(["svg", FIG8, "--out", str(tmp_path)]) == 0
    svg = (tmp_path / "end0.svg").read_text()
    assert svg.startswith("<svg")
    for name in ("m0", "l0", "Gamma1", "C1"):
        assert f"<title>{name}</title>" in svg


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oscbasis", "info", FIG8],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["edges"] == 2
