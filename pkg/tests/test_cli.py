from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from wmin.cli import EXIT_FAILS, EXIT_OK, EXIT_OPEN, EXIT_USAGE, load_config, main, UsageError


def run(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err, env or {})
    return code, out.getvalue(), err.getvalue()


def test_unitarity_exit_codes():
    assert run("unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "0", "--ell", "1/4")[0] == EXIT_OK
    assert run("unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "0", "--ell", "0")[0] == EXIT_FAILS
    assert run("unitarity", "--algebra", "spo(2|3)", "--k", "-3/4", "--nu", "0", "--ell", "0")[0] == EXIT_OK
    assert run("unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "0", "--ell", "1/4",
               "--sector", "ns")[0] == EXIT_OPEN


def test_unitarity_json():
    code, out, _ = run("unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "0", "--ell", "1/4", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["status"] == "Unitary" and js["A"] == "1/4"


def test_open_status_exit():
    # F(4), M_1 = 3, a nonextremal weight between A and B
    code, out, _ = run("unitarity", "--algebra", "f4", "--k", "-8/3", "--nu", "0,3/2,3/2,3/2", "--ell", "3/2")
    assert code == EXIT_OPEN and "UnknownConditional" in out
    code, _, _ = run("unitarity", "--algebra", "f4", "--k", "-8/3", "--nu", "0,3/2,3/2,3/2", "--ell", "3/2",
                     "--assume-conjecture")
    assert code == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "1,x", "--ell", "0"],
    ["unitarity", "--algebra", "nope", "--k", "-2", "--nu", "0", "--ell", "0"],
    ["unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "1,2,3", "--ell", "0"],
    ["unitarity", "--algebra", "psl22", "--k", "-2", "--nu", "0", "--ell", "0", "--sector", "x"],
    ["character", "--algebra", "psl22", "--k", "-2", "--nu", "0", "--ell", "0", "--order", "0"],
    ["identity", "verify", "--id", "nope"],
    ["identity", "verify", "--id", "deligne(E7)", "--order", "2"],
    ["bogus"],
    [],
])
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == EXIT_USAGE and "error" in err and out == ""


def test_table_csv_and_notes():
    code, out, _ = run("table", "--algebra", "spo3", "--k", "-3/4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("nu,") and len(lines) == 3
    code, out, _ = run("table", "--algebra", "spo3", "--k", "-5/4", "--format", "json")
    rows = json.loads(out)["rows"]
    assert [r["ramond_extremal"] for r in rows] == [True, False, False, True]
    code, out, _ = run("table", "--algebra", "spo3", "--k", "-1/3", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["rows"] == [] and js["notes"]


def test_character_default_order_from_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"default_order": "2", "output": "json"}))
    code, out, _ = run("--config", str(cfg), "character", "--algebra", "psl22", "--k", "-2", "--nu", "0",
                       "--ell", "1/4")
    js = json.loads(out)
    assert code == 0 and js["order"] == "2" and js["kind"] == "ramond_massless"


def test_identity_verify_and_list():
    code, out, _ = run("identity", "verify", "--id", "euler", "--order", "50")
    assert code == EXIT_OK and "equal" in out
    code, out, _ = run("identity", "verify", "--id", "gauss_triangular", "--order", "5", "--variant", "printed",
                       "--format", "json")
    assert code == EXIT_OPEN and json.loads(out)["equal"] is False
    code, out, _ = run("identity", "list", "--format", "json")
    assert "euler_partition" in json.loads(out)


def test_catalog_dump_is_json():
    code, out, _ = run("catalog", "dump")
    data = json.loads(out)
    assert code == 0 and {d["id"] for d in data} >= {"psl22", "spo3", "f4", "g3"}
    code, out, _ = run("catalog", "dump", "--algebra", "G(3)")
    assert json.loads(out)["id"] == "g3"


def test_outputs_are_deterministic():
    argv = ("table", "--algebra", "g3", "--k", "-9/4", "--format", "json")
    assert run(*argv)[1] == run(*argv)[1]


def test_config_and_env(tmp_path):
    assert load_config(None, {}).threads == 1
    assert load_config(None, {"WMIN_THREADS": "4"}).threads == 4
    with pytest.raises(UsageError):
        load_config(None, {"WMIN_THREADS": "x"})
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    with pytest.raises(UsageError):
        load_config(str(bad), {})
    bad.write_text(json.dumps({"output": "xml"}))
    with pytest.raises(UsageError):
        load_config(str(bad), {})
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"threads": 2, "monomial_limit": 1000}))
    cfg = load_config(str(good), {"WMIN_THREADS": "3"})
    assert cfg.threads == 3 and cfg.monomial_limit == 1000


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "wmin.cli", "unitarity", "--algebra", "psl22", "--k", "-2",
                        "--nu", "0", "--ell", "1/4"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("Unitary")
