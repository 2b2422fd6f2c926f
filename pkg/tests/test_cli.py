import json
from pathlib import Path

import pytest

from hermsig import cli
from hermsig.errors import ContractViolation

FIXTURES = Path(__file__).resolve().parents[1] / "demos" / "fixtures"


def _run(capsys, sub, doc, *extra):
    # bare names resolve inside the fixtures directory, absolute paths are kept
    path = str(FIXTURES / doc)
    code = cli.run([sub, "--input", path, "--json", *extra])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="in.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return _write


def test_ps_check(capsys):
    assert _run(capsys, "ps-check", "m2_adjoint_diag.json") == (
        0, {"holds": False, "witness": "1", "ordering": 0})
    code, out = _run(capsys, "ps-check", "m2_transpose.json")
    assert code == 0 and out["holds"]


def test_classify(capsys):
    code, out = _run(capsys, "classify", "hamilton.json")
    assert code == 0
    assert out == {"P0": {"nil": False, "lambda": 2, "nP": 1, "MP": 1, "mP": 1}}
    code, out = _run(capsys, "classify", "split_symplectic.json")
    assert out["P0"]["nil"]


def test_x_sigma(capsys):
    code, out = _run(capsys, "x-sigma", "m2_adjoint_diag.json")
    assert code == 0 and out["x_sigma"] == [] and out["x_tilde"] == [0]
    code, out = _run(capsys, "x-sigma", "hamilton.json")
    assert out["x_sigma"] == [0] and out["involution_signature"] == {"P0": 2}


def test_signature_and_maximal(capsys, write):
    alg = json.loads((FIXTURES / "hamilton.json").read_text())
    path = write({"algebra": alg, "form": {"gram": [
        [["1", "0", "0", "0"], ["0"] * 4],
        [["0"] * 4, ["-1", "0", "0", "0"]],
    ]}})
    code, out = _run(capsys, "signature", path)
    assert code == 0 and out == {"rank": 2, "signature": {"P0": 0}}
    path = write({"algebra": alg, "u": ["-1", "0", "0", "0"]})
    assert _run(capsys, "maximal", path) == (0, {"P0": False})
    assert _run(capsys, "maximal", "hamilton.json") == (0, {"P0": True})


def test_trace_form(capsys):
    code, out = _run(capsys, "trace-form", "hamilton.json")
    assert code == 0 and out["signature"] == {"P0": 4} and out["psd"] == {"P0": True}
    assert out["gram"][0] == ["2", "0", "0", "0"]


def test_audit(capsys):
    code, out = _run(capsys, "audit", "hamilton.json")
    assert code == 0 and out["agree"] and out["orderings"]["P0"]["maximal"]


def test_certify_verify_round_trip(capsys, write, tmp_path):
    code, cert = _run(capsys, "certify", "psd_matrix.json")
    assert code == 0 and cert["certificate"]["exponent"] == 2
    path = write(cert, "cert.json")
    assert _run(capsys, "verify", path) == (0, {"valid": True})
    cert["u"] = [["2", "1"], ["1", "3"]]
    path = write(cert, "bad.json")
    assert _run(capsys, "verify", path) == (0, {"valid": False})


def test_certify_in_hamilton(capsys, write):
    code, cert = _run(capsys, "certify", "hamilton_five.json")
    assert code == 0
    path = write(cert)
    assert _run(capsys, "verify", path) == (0, {"valid": True})


def test_domain_errors_exit_two(capsys, write):
    code, out = _run(capsys, "certify", "indefinite_matrix.json")
    assert code == 2
    assert out["error"]["code"] == "NotPSD"
    assert out["error"]["index"] == 1 and out["error"]["entry"] == "-3"
    alg = json.loads((FIXTURES / "hamilton.json").read_text())
    code, out = _run(capsys, "certify", write({"algebra": alg, "u": "-1"}))
    assert code == 2 and out["error"]["code"] == "SearchExhausted"
    code, out = _run(capsys, "ps-check", write({"field": {"kind": "Q"}, "division": {"kind": "split"},
                                                "ell": 2, "phi": [["1", "0"], ["0", "0"]]}))
    assert code == 2 and out["error"]["code"] == "SingularPhi"


def test_parse_errors_exit_64(capsys, write, tmp_path):
    code, out = _run(capsys, "classify", write("{not json"))
    assert code == 64 and out["error"]["code"] == "ParseError"
    code, _ = _run(capsys, "classify", str(tmp_path / "missing.json"))
    assert code == 64
    code, _ = _run(capsys, "classify", "hamilton.json", "--ordering", "3")
    assert code == 64


def test_contract_violation_exit_70(capsys, monkeypatch):
    def boom(doc, args):
        raise ContractViolation("internal check failed")
    monkeypatch.setitem(cli.HANDLERS, "classify", boom)
    code, out = _run(capsys, "classify", "hamilton.json")
    assert code == 70 and out["error"]["code"] == "ContractViolation"


def test_human_output(capsys):
    code = cli.run(["classify", "--input", str(FIXTURES / "hamilton.json")])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("P0:") and "lambda: 2" in out
