import json

import pytest

from rigid_deform.cli import EXIT_OK, EXIT_UNCERTIFIED, EXIT_USAGE, run_capture


def test_lambda_json_is_deterministic():
    argv = ["asm", "lambda", "--p", "2", "--prec", "8", "--max-len", "4", "--format", "json"]
    code1, out1 = run_capture(argv)
    code2, out2 = run_capture(argv)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    data = json.loads(out1)
    assert data["config"]["prec"] == 8 and "timings" not in json.dumps(data)


def test_threads_do_not_change_output():
    base = ["asm", "lambda", "--p", "3", "--prec", "6", "--max-len", "2", "--format", "json"]
    c1, o1 = run_capture(base + ["--threads", "1"])
    c2, o2 = run_capture(base + ["--threads", "2"])
    assert c1 == c2
    d1, d2 = json.loads(o1), json.loads(o2)
    d1["config"].pop("threads"), d2["config"].pop("threads")
    assert d1 == d2


def test_uncertified_exit_code():
    code, _ = run_capture(["asm", "lambda", "--p", "3", "--prec", "40", "--max-len", "1"])
    assert code == EXIT_UNCERTIFIED


def test_tate_csv():
    code, out = run_capture(["tate", "lambda", "--prec", "4", "--format", "csv"])
    assert code == EXIT_OK
    assert out.splitlines() == ["exponent,coefficient", "0,1", "1,16", "2,128", "3,704", "precision,4"]


def test_tate_checks():
    assert run_capture(["tate", "j-check", "--prec", "20"])[0] == EXIT_OK
    assert run_capture(["tate", "inversion", "--prec", "20"])[0] == EXIT_OK
    assert run_capture(["crossratio", "prop4", "--prec", "8", "--max-len", "16"])[0] == EXIT_OK


def test_decide_conj():
    code, out = run_capture(["asm", "decide-conj", "--p", "3", "--t1", "s", "--t2", "2*s", "--format", "json"])
    assert code == EXIT_OK
    d = json.loads(out)["decision"]
    assert d["verdict"] and d["witness"] == "2" and d["diagnostics"]["generator_witness"]


def test_decide_iso_text():
    code, out = run_capture(["asm", "decide-iso", "--p", "3", "--l1", "t", "--l2", "2*t"])
    assert code == EXIT_OK and "verdict: true" in out


@pytest.mark.parametrize("argv", [
    ["asm", "lambda", "--p", "4"],
    ["asm", "lambda", "--prec", "-1"],
    ["asm", "lambda", "--format", "xml"],
    ["asm", "decide-iso", "--l1", "t"],
    ["asm", "decide-iso", "--l1", "t +* 1", "--l2", "t"],
    ["nonsense"],
    [],
])
def test_usage_errors(argv, capsys):
    code, _ = run_capture(argv)
    assert code == EXIT_USAGE
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert json.loads(err)["error"] == "usage"


def test_verify_subset():
    code, out = run_capture(["verify", "all", "--reduced", "--only", "1,2", "--format", "json"])
    assert code == EXIT_OK
    assert [c["criterion"] for c in json.loads(out)["criteria"]] == [1, 2]
