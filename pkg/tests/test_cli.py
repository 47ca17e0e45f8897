import json

import pytest

from shapoform.cli import EXIT_CHECK, EXIT_OK, EXIT_USAGE, main, pretty
from shapoform.scalars import ONE, Q, q_int


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_roots_g2(capsys):
    code, out = run(capsys, "roots", "--type", "G2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["count"] == 6
    assert rep["schema_version"] == "1"


@pytest.mark.parametrize("argv", [
    ["roots", "--type", "X9"],
    ["verma", "--type", "A2", "--cutoff", "7"],
    ["fhat", "--type", "A2", "--module", "fund:5"],
    ["gram", "--type", "A1", "--nu", "a,b"],
    ["singular", "--type", "A1", "--module", "verma-dual"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_json_is_deterministic(capsys):
    argv = ["fhat", "--type", "A2", "--module", "fund:1", "--cutoff", "3"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
    assert len(json.loads(a)["entries"]) == 3


def test_verify_inverse_a1(capsys):
    code, out = run(capsys, "verify", "inverse", "--type", "A1", "--cutoff", "4", "--points", "2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["ok"] and rep["audit"]["ok"]
    assert len(rep["specialization"]) == 2


@pytest.mark.parametrize("what,module", [("abrr", "verma-dual"), ("singular", "fund:1"), ("intertwining", "fund:2")])
def test_verify_targets(capsys, what, module):
    code, out = run(capsys, "verify", what, "--type", "A2", "--cutoff", "3", "--module", module)
    assert code == EXIT_OK
    assert json.loads(out)["ok"]


def test_routes_view(capsys):
    code, out = run(capsys, "fhat", "--type", "A2", "--module", "fund:1", "--cutoff", "3", "--emit", "routes", "0", "2")
    assert code == EXIT_OK
    assert json.loads(out)["routes"] == [[0, 1, 2], [0, 2]]


def test_text_output_and_file(capsys, tmp_path):
    path = tmp_path / "gram.txt"
    code = main(["--format", "text", "--output", str(path), "gram", "--type", "A1", "--cutoff", "2", "--nu", "1"])
    assert code == EXIT_OK
    assert "[" in path.read_text()


def test_other_commands(capsys):
    for argv in (["verma", "--type", "B2", "--cutoff", "3", "--emit", "actions"],
                 ["rmatrix", "--type", "A1", "--module", "hw:2", "--cutoff", "3"],
                 ["singular", "--type", "B2", "--module", "fund:2", "--cutoff", "3"],
                 ["bench", "--type", "A1", "--cutoff", "3"]):
        code, out = run(capsys, *argv)
        assert code == EXIT_OK, argv
        json.loads(out)


def test_pretty_recognizes_q_integers():
    assert pretty(q_int(3)) == "[3]"
    assert pretty(-q_int(3)) == "-[3]"
    assert pretty(q_int(2) * q_int(3)) == "[2]*[3]"
    assert pretty(ONE / q_int(2)) == "1/([2])"
    assert pretty((Q - Q.inverse()) / q_int(3)) == "(q - q^(-1))/([3])"


def test_check_failure_code_is_distinct():
    assert EXIT_CHECK not in (EXIT_OK, EXIT_USAGE)
