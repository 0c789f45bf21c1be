import json
import subprocess
import sys

import pytest

from arithhom import cli
from arithhom.homology import CheckReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_h0_golden(capsys):
    code, out, _ = run(capsys, "h0", "--field", "Q", "--sigma", "5")
    assert code == 0
    assert out.strip() == '{"free_rank": 0, "invariants": [2], "schema": "1"}'


def test_h1_golden(capsys):
    code, data = run_json(capsys, "h1", "--field", "Q", "--sigma", "")
    assert code == 0 and data["invariants"] == [2] and data["free_rank"] == 0


def test_verify_gysin(capsys):
    code, data = run_json(capsys, "verify", "gysin", "--field", "Q", "--remove", "5")
    assert code == 0 and data["exact"] is True
    assert data["groups"] == [[], [], [2], [4], [2], [], []]


@pytest.mark.parametrize("argv,key,expected", [
    (["rayclass", "--field", "x^2+5", "--sigma", "3:0,7:1"], "invariants", [12]),
    (["classgroup", "--field", "x^2-79"], "invariants", [3]),
    (["h0", "--q", "3", "--places", "0,inf"], "invariants", [2]),
    (["h1", "--q", "5"], "invariants", [4]),
    (["rec", "--modulus", "12", "--cycle", "7"], "is_identity", False),
    (["rec", "--modulus", "5", "--cycle", "11"], "is_identity", True),
    (["cycle-class", "--field", "Q", "--sigma", "5", "--cycle", "2=1"], "is_identity", False),
    (["oracle", "--field", "Q", "--sigma", "5", "--height-bound", "100"], "matches_rayclass", True),
    (["verify", "ff-rec0", "--q", "3", "--places", "0,inf"], "exact", True),
    (["verify", "mv-base", "--field", "Q", "--sigma", "5", "--remove-u", "2", "--remove-v", "3"],
     "exact", True),
    (["verify", "mv-cover", "--field", "Q", "--sigma", "2", "--sigma2", "3"], "exact", True),
    (["verify", "dense-open", "--field", "Q", "--sigma", "5", "--remove", "7"], "exact", True),
])
def test_subcommands(capsys, argv, key, expected):
    code, data = run_json(capsys, *argv)
    assert code == 0
    assert data[key] == expected
    assert data["schema"] == "1"


def test_units_and_residue_units(capsys):
    code, data = run_json(capsys, "units", "--field", "x^2-2")
    assert code == 0 and data["torsion_order"] == 2
    assert data["fundamental_units"] == [["1", "1"]]
    code, data = run_json(capsys, "residue-units", "--field", "Q", "--sigma", "5")
    assert code == 0 and data["factors"] == [{"generator": [2], "order": 4, "prime": "5"}]


def test_text_format(capsys):
    code, out, _ = run(capsys, "h0", "--field", "Q", "--sigma", "5", "--format", "text")
    assert code == 0 and "invariants: [2]" in out.splitlines()


@pytest.mark.parametrize("argv,needle", [
    (["h0", "--field", "x^3-5x"], "x^3-5x"),
    (["h0", "--field", "Q", "--sigma", "4"], "4"),
    (["h0", "--field", "Q", "--sigma", "5,5"], "repeated"),
    (["h0", "--q", "3", "--places", "3"], "3"),
    (["rec", "--modulus", "5", "--cycle", "5"], "5"),
])
def test_input_errors_exit_2(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("error:") and needle in err


@pytest.mark.parametrize("argv", [
    ["oracle", "--field", "Q", "--deg-bound", "0"],
    ["h0", "--bogus"],
    ["verify", "nothing"],
])
def test_argument_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_verification_failure_exit_1(capsys, monkeypatch):
    def broken(x, D):
        return CheckReport("gysin", {}, False, {"node": 1, "kind": "kernel", "element": [1]})
    monkeypatch.setattr(cli, "check_gysin", broken)
    code, data = run_json(capsys, "verify", "gysin", "--field", "Q", "--remove", "5")
    assert code == 1
    assert data["exact"] is False and data["witness"]["element"] == [1]


def test_identical_invocations_are_byte_identical():
    argv = [sys.executable, "-m", "arithhom", "verify", "mv-cover", "--field", "x^2+1",
            "--count", "3", "--seed", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["schema"] == "1"
