import json
import subprocess
import sys

import pytest

from orbiconf.cli import EXIT_CAPACITY, EXIT_FAILED, EXIT_INPUT, EXIT_OK, main, to_markdown


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_integral_sphere_torsion(capsys):
    code, out, _ = run(["homology", "--input", "s2.json", "--n", "2", "--coeff", "integral"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["torsion"][1] == [2]
    assert rep["betti"][:2] == [1, 0]


def test_disk_one_point(capsys):
    code, out, _ = run(["homology", "--input", "disk.json", "--n", "1", "--coeff", "rational"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["betti"][:2] == [1, 0]


def test_malformed_json_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["homology", "--input", str(bad), "--n", "1"], capsys)
    assert code == EXIT_INPUT and "malformed" in err


def test_missing_file_and_missing_flag(capsys):
    assert run(["homology", "--input", "nowhere.json", "--n", "1"], capsys)[0] == EXIT_INPUT
    assert run(["homology", "--input", "disk.json"], capsys)[0] == EXIT_INPUT
    assert run(["homology", "--input", "disk.json", "--n", "1", "--coeff", "weird"], capsys)[0] == EXIT_INPUT


def test_capacity_exit_code(capsys):
    code, _, err = run(["homology", "--input", "s2.json", "--n", "2", "--capacity", "10"], capsys)
    assert code == EXIT_CAPACITY and "capacity" in err


def test_verify_stability(capsys):
    code, out, _ = run(["verify", "stability", "--input", "disk.json", "--n-max", "3"], capsys)
    assert code == EXIT_OK and json.loads(out)["pass"]


def test_verify_dold(capsys):
    code, out, _ = run(["verify", "dold", "--input", "disk.json", "--n", "2"], capsys)
    assert code == EXIT_OK
    assert all(r["pass"] for r in json.loads(out)["rows"])


def test_verify_comma(capsys):
    code, out, _ = run(["verify", "comma", "--n", "4", "--m", "2", "--points", "6"], capsys)
    row = json.loads(out)["rows"][0]
    assert code == EXIT_OK
    assert row["skeleton_sizes"] == [6] and row["discrete"]


def test_verify_comma_with_base_file(capsys):
    code, out, _ = run(["verify", "comma", "--n", "3", "--input", "z2-six-points.json"], capsys)
    rep = json.loads(out)
    assert code == EXIT_OK and [r["skeleton_sizes"] for r in rep["rows"]] == [[1], [3], [3]]


@pytest.mark.parametrize("argv", [
    ["verify", "duality", "--input", "football.json", "--n", "1"],
    ["verify", "chi-c", "--input", "football.json", "--n", "2"],
    ["verify", "transfer", "--input", "cone3.json", "--n", "2"],
])
def test_other_checks_pass(argv, capsys):
    assert run(argv, capsys)[0] == EXIT_OK


def test_failed_check_exit_code(monkeypatch, capsys):
    import orbiconf.cli as cli
    monkeypatch.setattr(cli, "duality_check", lambda X, n, closed: {"pass": False, "rows": []})
    assert run(["verify", "duality", "--input", "football.json", "--n", "1"], capsys)[0] == EXIT_FAILED


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert main(["verify", "transfer", "--input", "disk.json", "--n", "3", "--output", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_markdown_output(capsys):
    code, out, _ = run(["homology", "--input", "s2.json", "--n", "2", "--coeff", "integral", "--format",
                        "markdown"], capsys)
    assert code == EXIT_OK
    assert "| 1 | 0 | Z/2 |" in out
    assert to_markdown({"command": "x", "rows": [{"a": 1}], "pass": True}).count("| a |") == 1


def test_subdiv_override(capsys):
    code, out, _ = run(["homology", "--input", "disk.json", "--n", "1", "--subdiv", "0"], capsys)
    assert code == EXIT_OK and json.loads(out)["subdiv"] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "orbiconf", "examples"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "disk.json" in json.loads(res.stdout)["inputs"]


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2
