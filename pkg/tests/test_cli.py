import json

import pytest

from cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_SCOPE, EXIT_USAGE, main
from services.coefficients import SkeinValue, UNKNOT
from services.homfly_engine import BraidWord, homfly
from services.verification_suite import CHECKS

UNKNOT_TEXT = "(a - a^(-1))/(q^(1/2) - q^(-1/2))"


def run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out.strip(), captured.err


def test_homfly_unknot_text(capsys):
    status, out, _ = run(capsys, "homfly", "n=1; w=", "--format", "text")
    assert status == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == f"○ = {UNKNOT_TEXT}"
    assert lines[1] == "framing_monomial: 1"
    assert lines[2] == "normalization: framed"


def test_homfly_ascii(capsys):
    status, out, _ = run(capsys, "homfly", "n=1; w=", "--format", "text", "--ascii")
    assert status == EXIT_OK
    assert out.splitlines()[0] == f"O = {UNKNOT_TEXT}"


def test_homfly_two_component_unlink(capsys):
    status, out, _ = run(capsys, "homfly", "n=2; w=1,-1", "--format", "text")
    assert status == EXIT_OK
    assert out.splitlines()[0] == f"○^2 = {UNKNOT * UNKNOT}"


def test_homfly_json(capsys):
    status, out, _ = run(capsys, "homfly", "n=2; w=1,1", "--format", "json")
    assert status == EXIT_OK
    payload = json.loads(out)
    assert SkeinValue.parse(payload["value"]) == homfly(BraidWord(2, (1, 1)))
    assert payload["framing_monomial"] == "a^2"
    assert payload["normalization"] == "framed"


def test_homfly_json_request_and_unframed(capsys):
    request = json.dumps({"strands": 2, "word": [1, 1], "normalization": "unframed"})
    status, out, _ = run(capsys, "homfly", request)
    assert status == EXIT_OK
    payload = json.loads(out)
    assert payload["normalization"] == "unframed"
    hopf = homfly(BraidWord(2, (1, 1)))
    assert SkeinValue.parse(payload["value"]) == hopf / SkeinValue.parse("a^2")


def test_homfly_csv(capsys):
    status, out, _ = run(capsys, "homfly", "n=1; w=", "--format", "csv")
    assert status == EXIT_OK
    header, row = out.splitlines()
    assert header == "braid,value,framing_monomial,normalization"
    assert row.endswith(",1,framed")


def test_repeated_invocations_are_identical(capsys):
    _, first, _ = run(capsys, "homfly", "n=3; w=1,-2,1,-2")
    _, second, _ = run(capsys, "homfly", "n=3; w=1,-2,1,-2")
    assert first == second


@pytest.mark.parametrize(
    "argv",
    [
        ["homfly", "n=2; w=1,x"],
        ["homfly", '{"strands": 0, "word": []}'],
        ["homfly", "n=1; w=", "--degree", "-1"],
        ["homfly", "n=1; w=", "--format", "yaml"],
        ["colored", "n=1; w=", "[1,2]"],
        ["colored", "n=2; w=1,1", "[1]", "--components", "0,x"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == EXIT_USAGE
    assert err


def test_parse_error_reports_position(capsys):
    status, _, err = run(capsys, "homfly", "n=2; w=1,x")
    assert status == EXIT_USAGE
    assert "position 9" in err


def test_colored_unknot(capsys):
    status, out, _ = run(capsys, "colored", "n=1; w=", "[1]", "--format", "text")
    assert status == EXIT_OK
    assert out.splitlines()[0] == f"○ = {UNKNOT_TEXT}"


def test_colored_components(capsys):
    status, out, _ = run(capsys, "colored", "n=2; w=1,1", "[2]", "--components", "0")
    assert status == EXIT_OK
    assert json.loads(out)["components"] == [0]


def test_colored_scope_limit(capsys):
    status, _, err = run(capsys, "colored", "n=1; w=", "[3]")
    assert status == EXIT_SCOPE
    assert "2 boxes" in err


def test_psi(capsys):
    status, out, _ = run(capsys, "ov", "psi", "--degree", "1", "--format", "text")
    assert status == EXIT_OK
    assert out == "W_∅⊗W_∅ + γ·W_(1)⊗W_(1)"


def test_psi_ascii(capsys):
    status, out, _ = run(capsys, "ov", "psi", "--degree", "1", "--format", "text", "--ascii")
    assert status == EXIT_OK
    assert out == "W[](x)W[] + gamma*W[1](x)W[1]"


def test_kernel(capsys):
    status, out, _ = run(capsys, "ov", "kernel", "--degree", "2", "--format", "json")
    assert status == EXIT_OK
    vectors = json.loads(out)
    assert len(vectors) == 2
    for vector in vectors:
        (term,) = vector["terms"]
        assert term["left"] == term["right"]


def test_partition_function(capsys):
    status, out, _ = run(capsys, "ov", "partition-function", "--degree", "1", "--format", "json")
    assert status == EXIT_OK
    payload = json.loads(out)
    assert payload["link"] == "unknot"
    assert [entry["partition"] for entry in payload["coefficients"]] == [[], [1]]
    assert payload["coefficients"][1]["value"] == str(UNKNOT)


def test_partition_function_scope(capsys):
    status, _, _ = run(capsys, "ov", "partition-function", "--link", "hopf", "--degree", "3")
    assert status == EXIT_SCOPE


def test_verify_json_lines(capsys):
    status, out, _ = run(capsys, "ov", "verify", "--degree", "1", "--trials", "5", "--format", "json")
    assert status == EXIT_OK
    reports = [json.loads(line) for line in out.splitlines()]
    assert [report["name"] for report in reports] == [name for name, _ in CHECKS]
    assert all(report["status"] == "pass" for report in reports)


def test_verify_scope(capsys):
    status, _, _ = run(capsys, "ov", "verify", "--degree", "99")
    assert status == EXIT_SCOPE


def test_verify_failure_exit_code(capsys, monkeypatch):
    import cli
    from models.verification import CheckReport

    monkeypatch.setattr(
        cli, "run_all", lambda degree, seed=None, trials=None: [CheckReport(name="x", status="fail", witness="w")]
    )
    status, out, _ = run(capsys, "ov", "verify", "--degree", "1", "--format", "text")
    assert status == EXIT_CHECK_FAILED
    assert out.startswith("FAIL x")
