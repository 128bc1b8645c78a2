import json
import subprocess
import sys
from pathlib import Path

import pytest

from hallforge.cli import main

QUIVERS = Path(__file__).resolve().parent.parent / "quivers"


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def base(name, q, bound):
    return ["--quiver", str(QUIVERS / f"{name}.json"), "--prime", str(q), "--max-dim", str(bound)]


def test_classify(capsys):
    code, out, _ = run(capsys, *base("a1", 2, 2), "classify")
    assert code == 0 and len(json.loads(out)["classes"]) == 3
    code, out, _ = run(capsys, *base("a2", 2, 2), "classify")
    doc = json.loads(out)
    assert len(doc["classes"]) == 7
    assert doc["classes"][5] == {"id": 5, "dim": [1, 1], "mats": [[1]]}


def test_nonprime_is_usage_error(capsys):
    code, _, err = run(capsys, *base("a1", 4, 2), "classify")
    assert code == 2 and "not prime" in err


def test_bad_schema_and_missing_file(capsys, tmp_path):
    bad = tmp_path / "loop.json"
    bad.write_text('{"vertices":["1"],"arrows":[["1","1"]]}')
    assert run(capsys, "--quiver", str(bad), "--prime", "2", "--max-dim", "2", "classify")[0] == 2
    assert run(capsys, "--quiver", str(tmp_path / "nope.json"), "--prime", "2", "--max-dim", "2", "classify")[0] == 2


def test_bad_flags():
    with pytest.raises(SystemExit) as exc:
        main(["--prime", "2", "classify"])
    assert exc.value.code == 2


def test_budget_exit_code(capsys):
    assert run(capsys, *base("a2", 2, 9), "verify", "all")[0] == 3
    assert run(capsys, *base("a1", 2, 1), "mul", "dh", "S1", "S1")[0] == 3


def test_mul_dh(capsys):
    code, out, _ = run(capsys, *base("a1", 2, 2), "mul", "dh", "u[S1]", "u[S1]")
    assert code == 0
    assert json.loads(out) == {
        "kind": "dh",
        "terms": [
            {"key": 0, "coeff": {"a": "0", "b": "1"}},
            {"key": 2, "coeff": {"a": "0", "b": "3/2"}},
        ],
    }


def test_mul_ihall_torus(capsys):
    code, out, _ = run(capsys, *base("a2", 2, 2), "mul", "ihall", "K(1,0)", "K(0,1)")
    assert code == 0
    assert json.loads(out)["terms"] == [{"key": {"class": 0, "alpha": [1, 1]}, "coeff": {"a": "1", "b": "0"}}]
    code, out, _ = run(capsys, *base("a2", 2, 2), "mul", "ihall", "S1*K(1,0)", "[0]")
    assert json.loads(out)["terms"] == [{"key": {"class": 1, "alpha": [1, 0]}, "coeff": {"a": "1", "b": "0"}}]


def test_mul_hall_unit_and_labels(capsys, tmp_path):
    code, out, _ = run(capsys, *base("a2", 2, 2), "mul", "hall", "[0]", "5")
    assert code == 0 and json.loads(out)["terms"] == [{"key": 5, "coeff": {"a": "1", "b": "0"}}]
    code, out, _ = run(capsys, *base("two_points", 2, 2), "mul", "hall", "Sb", "S1")
    keys = [t["key"] for t in json.loads(out)["terms"]]
    assert code == 0 and len(keys) == 1


@pytest.mark.parametrize("key", ["S9", "17", "K(1)", "foo", "S1*S2"])
def test_unknown_keys(capsys, key):
    algebra = "ihall" if "K" in key or "*" in key else "hall"
    assert run(capsys, *base("a2", 2, 2), "mul", algebra, key, "0")[0] == 2


def test_verify_pass_and_report(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, _, err = run(capsys, *base("a2", 2, 3), "--output", str(out_file), "verify", "serre")
    assert code == 0 and "[PASS] serre" in err
    report = json.loads(out_file.read_text())
    assert report["passed"] and report["suites"]["serre"][0]["cases"] == 4
    code, _, _ = run(capsys, *base("a1", 3, 2), "verify", "oracle")
    assert code == 0


def test_verify_failure_exit_code(capsys, monkeypatch):
    from hallforge import verify

    def broken(session):
        chk = verify.Check("always fails")
        chk.record(False, {"why": "forced"})
        return [chk]

    monkeypatch.setitem(verify.SUITE_FUNCS, "euler", broken)
    code, out, err = run(capsys, *base("a1", 2, 2), "verify", "euler")
    assert code == 1 and "[FAIL]" in err
    assert json.loads(out)["suites"]["euler"][0]["counterexamples"] == [{"why": "forced"}]


def test_export_table_deterministic(tmp_path):
    outputs = []
    for k in range(2):
        target = tmp_path / f"t{k}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "hallforge", *base("a1", 2, 2), "--output", str(target), "export-table"],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    g = json.loads(outputs[0])["g"]
    assert {"a": 1, "b": 1, "m": 2, "coeff": {"a": "0", "b": "3/2"}} in g


def test_output_flag_after_subcommand(tmp_path):
    after, before = tmp_path / "after.json", tmp_path / "before.json"
    base = ["--quiver", str(QUIVERS / "a1.json"), "--prime", "2", "--max-dim", "2"]
    assert main(base + ["export-table", "-o", str(after)]) == 0
    assert main(["-o", str(before)] + base + ["export-table"]) == 0
    assert after.read_bytes() == before.read_bytes()
