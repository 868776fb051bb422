import csv
import io
import json
import subprocess
import sys

import pytest

from linkorders.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_no_subcommand_prints_usage(capsys):
    code, _, err = run(capsys)
    assert code == 2
    assert "usage" in err


def test_ramified_point(capsys):
    code, out, _ = run(capsys, "verify", "--case", "ramified", "--p", "3", "--f", "1", "--n", "1", "--workers", "1")
    assert code == 0
    report = json.loads(out)
    fe = [c for c in report["checks"] if c["name"] == "fe.ramified"]
    assert fe and all(c["details"]["sign"] == 1 and c["status"] == "pass" for c in fe)


def test_all_cases_at_p2(capsys):
    code, out, _ = run(capsys, "verify", "--case", "all", "--p", "2", "--workers", "1")
    assert code == 0
    checks = json.loads(out)["checks"]
    assert len(checks) >= 12
    assert {c["name"].split(".")[0] for c in checks} >= {"fe", "lattice", "gauss", "heisenberg"}


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--case", "unramified", "--p", "7", "--f", "2"],
        ["verify", "--case", "level0", "--p", "3", "--theta", "4"],
        ["verify", "--case", "unramified", "--p", "3", "--b", "1"],
        ["verify", "--case", "lattice", "--p", "2", "--e", "2", "--n", "2"],
        ["verify", "--case", "all"],
        ["tables", "gauss", "--p", "4"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv, *(["--workers", "1"] if argv[0] == "verify" else []))
    assert code == 2
    assert err.startswith("linkorders: error:")
    assert out == ""


def test_size_cap_message(capsys):
    _, _, err = run(capsys, "verify", "--case", "unramified", "--p", "7", "--f", "2")
    assert "cap" in err


def test_sign_flip_fails_with_witness(capsys):
    code, out, _ = run(capsys, "verify", "--case", "unramified", "--p", "2", "--b", "2", "--inject-sign-flip", "--workers", "1")
    assert code == 1
    failed = [c for c in json.loads(out)["checks"] if c["status"] == "fail"]
    assert failed and "witness" in failed[0]


def test_reports_are_byte_identical(capsys):
    argv = ["verify", "--case", "level0", "--p", "2", "--workers", "1"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert all(c["elapsed_ms"] is None for c in json.loads(first)["checks"])
    _, timed, _ = run(capsys, *argv, "--timings")
    assert all(c["elapsed_ms"] is not None for c in json.loads(timed)["checks"])


def test_csv_and_human_formats(capsys):
    _, out, _ = run(capsys, "verify", "--case", "ramified", "--p", "2", "--format", "csv", "--workers", "1")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["name", "status", "max_abs_error", "tolerance", "params"]
    assert all(r[1] == "pass" for r in rows[1:])
    _, out, _ = run(capsys, "verify", "--case", "ramified", "--p", "2", "--format", "human", "--workers", "1")
    assert out.strip().endswith("checks passed")


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--case", "ramified", "--p", "3", "--output", str(target), "--workers", "1")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["suite"] == "ramified"


def test_gauss_table(capsys):
    code, out, _ = run(capsys, "tables", "gauss", "--p", "2", "--f", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    regular = [r for r in rows if r["regular"] == "True"]
    assert len(regular) == 2
    assert all(float(r["product"]) == 4.0 and float(r["abs"]) == 2.0 for r in regular)


def test_character_table(capsys):
    code, out, _ = run(capsys, "tables", "character", "--p", "3", "--f", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {float(r["degree"]) for r in rows} == {2.0}
    assert {float(r["norm"]) for r in rows} == {1.0}
    assert len({r["theta_index"] for r in rows}) == 6
    _, human, _ = run(capsys, "tables", "character", "--p", "2", "--format", "human")
    assert human.splitlines()[0].split()[:3] == ["q", "theta_index", "degree"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "linkorders", "tables", "gauss", "--p", "3"],
                         capture_output=True, text=True, check=True)
    assert len(out.stdout.splitlines()) == 9
