import csv
import io
import json

import pytest

from plancherel.cli import run


def _call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kernel_passthrough(capsys):
    from plancherel.kernels import kernel_J

    code, out, _ = _call(capsys, "kernel", "--family", "J", "--theta", "1", "--x", "0", "--y", "0")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["value"]) == kernel_J(0, 0, 1.0)


def test_gap_against_oracle(capsys):
    code, out, _ = _call(capsys, "gap", "--theta", "1", "--s", "3", "--eps", "1e-10", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["meta"]["subcommand"] == "gap"
    assert body["rows"][0]["gap"] == pytest.approx(0.9987407159242513, abs=1e-8)


def test_seventeen_digits(capsys):
    _, out, _ = _call(capsys, "kernel", "--family", "Sine", "--x", "1", "--y", "0")
    assert out.splitlines()[1].split(",")[2] == format(1 / 3.141592653589793, ".17g")


@pytest.mark.parametrize("argv", [["kernel", "--bogus"], ["nosuch"], ["verify", "nosuch"], ["gap", "--theta", "1"],
                                  ["edge-cdf", "--theta", "1", "--a", "1,2"], ["counts", "--theta", "1", "--points", "0,3,2"]])
def test_usage_errors(capsys, argv):
    try:
        code = run(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_numeric_failure(capsys):
    code, _, err = _call(capsys, "gap", "--theta", "1", "--s", "-30000")
    assert code == 1 and "numeric failure" in err


def test_sample_thread_independent(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.json"
    run(["sample", "--n", "200", "--count", "40", "--seed", "3", "--threads", "1", "--out", str(a)])
    first = a.read_text()
    run(["sample", "--n", "200", "--count", "40", "--seed", "3", "--threads", "3", "--out", str(a)])
    assert a.read_text() == first
    run(["sample", "--n", "200", "--count", "5", "--seed", "3", "--format", "json", "--out", str(b)])
    assert len(json.loads(b.read_text())["rows"]) == 5


def test_other_subcommands(capsys):
    assert _call(capsys, "counts", "--theta", "1", "--points", "0,3,3,6", "--n", "1")[0] == 0
    code, out, _ = _call(capsys, "edge-cdf", "--theta", "1", "--a", "3,2")
    assert code == 0 and float(out.splitlines()[1].split(",")[-1]) == pytest.approx(0.977633065825, abs=1e-10)
    assert _call(capsys, "corr", "--theta", "1", "--points", "1/2,-1/2")[0] == 0
    assert _call(capsys, "shape", "--n", "200", "--count", "2")[0] == 0
    code, out, _ = _call(capsys, "depoissonize", "--n", "20")
    assert code == 0 and float(out.splitlines()[1].split(",")[-1]) < 1e-10


def test_verify_exit_codes(capsys):
    code, out, _ = _call(capsys, "verify", "kernels")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert {"name", "observed", "tolerance", "passed"} <= set(report["checks"][0])
