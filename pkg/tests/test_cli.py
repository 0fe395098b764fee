import json
import subprocess
import sys

import numpy as np
import pytest

from isotower import cli, harness, jsonio, ktheory
from isotower.builtins import EXPECTED_DEGREES
from isotower.errors import InvalidInput, UsageError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert cli.parse_group("2x3") == [2, 3]
    assert cli.parse_chars("0,1;1,2", 2) == [(0, 1), (1, 2)]
    assert cli.parse_chars("", 1) == []
    assert cli.parse_tol(["eq=1e-3"]) == {"eq": 1e-3}
    assert cli.parse_k_range("1,3") == [1, 3]
    for bad in (lambda: cli.parse_group("2xa"), lambda: cli.parse_group("0"),
                lambda: cli.parse_chars("0", 2), lambda: cli.parse_tol(["eq"]),
                lambda: cli.parse_k_range("a")):
        with pytest.raises(UsageError):
            bad()


@pytest.mark.parametrize("name", sorted(EXPECTED_DEGREES))
def test_degree_command(capsys, name):
    code, out, _ = run(capsys, "degree", "--map", name)
    assert code == 0
    assert f"degree {EXPECTED_DEGREES[name]} " in out


def test_koszul_nonsubrep(capsys):
    code, out, _ = run(capsys, "koszul", "--group", "2", "--v0", "0", "--v1", "1")
    assert code == 0
    assert "x_0 = +1 -1*L1" in out
    assert "subrepresentation of V1: False" in out


def test_koszul_subrep_z3(capsys):
    code, out, _ = run(capsys, "koszul", "--group", "3", "--v0", "1", "--v1", "0;1")
    assert code == 0 and "all differentials zero: True" in out


def test_koszul_trivial_group(capsys):
    code, out, _ = run(capsys, "koszul", "--group", "1", "--v0", "0", "--v1", "0;0")
    assert code == 0
    assert "all differentials zero: True" in out and "subrepresentation of V1: True" in out


def test_koszul_json(capsys):
    code, out, _ = run(capsys, "koszul", "--group", "2", "--v0", "0", "--v1", "1", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["complex"]["differentials"] == [[[[1, -1]]]]
    assert data["report"]["residue_convention"] == "dT"


def test_koszul_errors(capsys):
    assert run(capsys, "koszul", "--group", "2", "--v0", "0;1", "--v1", "0")[0] == 2
    code, _, err = run(capsys, "koszul", "--group", "2", "--v0", "0;0;0", "--v1", "0;0;0;1")
    assert code == 2 and "TooLarge" in err


def test_verify_pass_and_out(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "ndr", "--trials", "10", "--out", str(path))
    assert code == 0 and "summary:" in out and "FAIL" not in out
    data = json.loads(path.read_text())
    assert data["suite"] == "ndr" and data["summary"]["fail"] == 0
    assert data["config"]["trials"] == 10


def test_verify_corrupted_tolerance_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "calculus", "--d0", "2", "--trials", "3",
                       "--tol", "all=1e-30")
    assert code == 1 and "FAIL" in out


def test_verify_config_file_flags_win(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"suite": "calculus", "d0": 2, "trials": 3, "seed": 5,
                                "tol": {"all": 1e-30}}))
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--config", str(conf), "--seed", "9", "--tol", "all=1.0",
                     "--out", str(out_path))
    data = json.loads(out_path.read_text())
    assert code == 0
    assert data["config"]["seed"] == 9 and data["config"]["trials"] == 3
    assert data["suite"] == "calculus"


def test_verify_bad_config(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "verify", "--config", str(conf))[0] == 2
    assert run(capsys, "verify", "--config", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", "--suite", "ndr", "--d0", "3", "--d1", "2")[0] == 2


def test_verify_deterministic_output(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run(capsys, "verify", "--suite", "miller", "--d0", "2", "--trials", "3", "--seed", "4",
            "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_argparse_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2


def test_console_script_module():
    res = subprocess.run([sys.executable, "-m", "isotower.cli", "degree", "--map", "identity"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "degree 1" in res.stdout


def test_matrix_json_roundtrip(rng):
    M = harness.complex_gaussian(rng, (3, 2))
    assert np.array_equal(jsonio.matrix_from_json(jsonio.matrix_to_json(M)), M)
    with pytest.raises(InvalidInput):
        jsonio.matrix_from_json({"rows": 2, "cols": 2, "data": [[0, 0]]})
    with pytest.raises(InvalidInput):
        jsonio.matrix_from_json({"rows": 2})


def test_tower_point_json_roundtrip(rng):
    x = harness.random_tower_point(rng, 3, 4, 2)
    y = jsonio.tower_point_from_json(json.loads(json.dumps(jsonio.tower_point_to_json(x))))
    assert y.k == x.k and np.allclose(y.alpha, x.alpha) and np.allclose(y.beta, x.beta)


def test_thom_point_json_roundtrip(rng):
    z = harness.random_thom_point(rng, 3, 4, 2)
    w = jsonio.thom_point_from_json(jsonio.thom_point_to_json(z))
    assert np.array_equal(w.gamma, z.gamma) and np.array_equal(w.psi, z.psi) and w.k == z.k


def test_representation_json_roundtrip():
    obj = {"orders": [2, 3], "chars": [[0, 1], [1, 0], [1, 5]]}
    V = jsonio.representation_from_json(obj)
    assert V.chars == ((0, 1), (1, 0), (1, 2))
    assert jsonio.representation_from_json(jsonio.representation_to_json(V)) == V
    assert jsonio.group_from_json(obj) == ktheory.GroupSpec((2, 3))
