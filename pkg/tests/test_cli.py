import json

import pytest

from pgtrans import cli, suites
from pgtrans.suites import Check


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pbw(capsys):
    assert run(capsys, "pbw", "u+*u-") == (0, "u-*u+ + h\n", "")
    assert run(capsys, "pbw", "h^2-2*h+4*u+*u-", "--central", "1,3")[1] == "3\n"
    code, out, _ = run(capsys, "pbw", "a+-a-", "--json")
    assert code == 0 and json.loads(out)["normal_form"] == "h"


def test_pbw_parse_error_shows_caret(capsys):
    code, _, err = run(capsys, "pbw", "h + $")
    assert code == 2
    assert err.splitlines()[-1] == "  " + " " * 4 + "^"


@pytest.mark.parametrize("argv", [
    ["verify", "nonsense"],
    ["decompose", "no_such_scenario", "--k", "1"],
    ["decompose", "diag_0_5", "--k", "-1"],
    ["decompose", "diag_0_5"],
    ["sheaf", "--scenario", "trivial_0", "--level", "3"],
    ["pbw", "h", "--central", "1"],
    [],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_ok_and_failed(capsys, monkeypatch):
    code, out, _ = run(capsys, "verify", "series")
    assert code == 0 and out.splitlines()[-1].startswith("series: ")
    bad = lambda: [Check("fake", "broken", "never holds", False, "")]
    monkeypatch.setitem(suites.SUITES, "fake", bad)
    monkeypatch.setitem(cli.SUITES, "fake", bad)
    code, out, _ = run(capsys, "verify", "fake")
    assert code == 1 and out.startswith("FAIL")


def test_decompose_table_and_json(capsys):
    code, out, _ = run(capsys, "decompose", "diag_0_5", "--k", "1")
    assert code == 0 and "35" in out and "15" in out
    code, out, _ = run(capsys, "decompose", "diag_0_5", "--k", "1", "--json")
    rec = json.loads(out)
    assert rec["scenario"] == "diag_0_5" and [p["mu"] for p in rec["pieces"]] == ["35", "15"]


def test_decompose_scenario_file_error(capsys, tmp_path):
    f = tmp_path / "bad.yaml"
    f.write_text("name: x\nmodule:\n  trunc: 4\n  prime: 4\n  alpha: 0\n  nabla: [[\"0\"]]\n")
    code, _, err = run(capsys, "decompose", str(f), "--k", "1")
    assert code == 2 and "bad.yaml:4:" in err


def test_sheaf(capsys):
    code, out, _ = run(capsys, "sheaf", "--scenario", "diag_0_2", "--level", "1")
    assert code == 0 and "sum of Res = id: yes" in out
    code, out, _ = run(capsys, "sheaf", "--scenario", "trivial_0", "--level", "2", "--trunc", "12", "--json")
    rec = json.loads(out)
    assert rec["passed"] and len(rec["balls"]) == 4


def test_reports_are_written_and_stable(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.REPORT_ENV, str(tmp_path))
    assert run(capsys, "decompose", "diag_0_3half", "--k", "2")[0] == 0
    first = (tmp_path / "decompose-diag_0_3half-k2.txt").read_bytes()
    assert run(capsys, "decompose", "diag_0_3half", "--k", "2")[0] == 0
    assert (tmp_path / "decompose-diag_0_3half-k2.txt").read_bytes() == first
    assert run(capsys, "verify", "symk", "--json")[0] == 0
    assert json.loads((tmp_path / "verify-symk.json").read_text())["passed"]
    assert run(capsys, "sheaf", "--scenario", "trivial_0", "--level", "1")[0] == 0
    assert (tmp_path / "sheaf-trivial_0-n1.txt").exists()
