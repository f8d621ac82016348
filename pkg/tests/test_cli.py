import json

import jsonschema
import pytest

from qoscillator.cli import main
from qoscillator.report import REPORT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report_of(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_fock_verify(capsys):
    code, rep = report_of(capsys, "verify", "--realization", "fock", "--n", "2", "--N", "5")
    assert code == 0
    eq1 = [r for r in rep["records"] if r["relation_id"].startswith("eq1.")]
    assert eq1 and all(r["passed"] for r in eq1)
    jsonschema.validate(rep, REPORT_SCHEMA)
    kinds = {f["kind"] for f in rep["findings"]}
    assert "abar_power_N" in kinds


def test_cyclic_real_q_is_usage_error(capsys):
    code, out, err = run(capsys, "verify", "--realization", "cyclic", "--q-real", "0.5")
    assert code == 2 and "root of unity" in err and out == ""


def test_bargmann_real_reports_orthonormality(capsys):
    code, rep = report_of(capsys, "verify", "--realization", "bargmann", "--n", "1", "--q-real", "0.5", "--cutoff", "8")
    assert code == 0
    ids = {r["relation_id"] for r in rep["records"]}
    eq16 = [i for i in ids if i.startswith("eq16.")]
    assert len(eq16) == 21
    assert "eq16.u(5).u(5)" in ids and "eq17.n10" in ids and "eq14.x1.0" in ids


def test_bargmann_root_compares_with_fock(capsys):
    code, rep = report_of(capsys, "verify", "--realization", "bargmann", "--n", "1", "--N", "3")
    assert code == 0
    assert any(r["relation_id"].startswith("bargmann.fock_agreement.") for r in rep["records"])


def test_cyclic_default_mode_passes(capsys):
    code, rep = report_of(capsys, "verify", "--realization", "cyclic", "--n", "2", "--N", "3")
    assert code == 0
    assert rep["params"]["exponent_mode"] == "squared_h_q2"
    assert any(f["kind"] == "exponent_mode_scan" for f in rep["findings"])


def test_cyclic_literal_mode_fails(capsys):
    code, rep = report_of(capsys, "verify", "--realization", "cyclic", "--n", "1", "--N", "3", "--exponent-mode", "paper")
    assert code == 1 and rep["summary"]["failed"] > 0


def test_virasoro_fock(capsys):
    code, rep = report_of(capsys, "virasoro", "--realization", "fock", "--n", "1", "--N", "5", "--window", "4")
    assert code == 0
    ids = {r["relation_id"] for r in rep["records"]}
    assert "eq24.diag.i1.r4.m-1" in ids and "eq23.roundtrip.i1.m4" in ids


def test_virasoro_negative_power(capsys):
    code, out, err = run(capsys, "virasoro", "--realization", "fock", "--n", "1", "--N", "3", "--m", "-2")
    assert code == 2 and "nilpotent" in err


def test_classical_limit(capsys):
    code, rep = report_of(capsys, "virasoro", "--classical-limit", "--n", "1", "--cutoff", "10")
    assert code == 0
    by_id = {r["relation_id"]: r for r in rep["records"]}
    res = [by_id[f"limit.q{q}"]["residual"] for q in (0.9, 0.99, 0.999)]
    assert res[0] > res[1] > res[2]
    assert by_id["limit.scaling"]["passed"]


@pytest.mark.parametrize("argv,expected", [
    (("qnum", "--N", "5", "--x", "5"), "0"),
    (("qfact", "--q-real", "0.5", "--n", "3"), "2.625"),
])
def test_qcalc_exact(capsys, argv, expected):
    code, out, _ = run(capsys, "qcalc", *argv)
    assert code == 0 and out.strip() == expected


def test_qcalc_jackson(capsys):
    code, out, _ = run(capsys, "qcalc", "jackson", "--q-real", "0.5", "--moment", "2")
    assert code == 0 and abs(float(out) - 1.5) < 1e-12


def test_qcalc_errors(capsys):
    assert run(capsys, "qcalc", "exp", "--N", "5", "--x", "0.5")[0] == 2
    assert run(capsys, "qcalc", "qnum", "--N", "5", "--x", "1.5")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["qcalc", "nonsense"])
    assert exc.value.code == 2


def test_cap_exceeded(capsys):
    assert run(capsys, "verify", "--realization", "fock", "--n", "3", "--N", "7", "--cap", "100")[0] == 3


def test_missing_parameter(capsys):
    assert run(capsys, "verify", "--realization", "fock")[0] == 2
    assert run(capsys, "verify", "--realization", "fock", "--N", "3", "--q-real", "0.5")[0] == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, err = run(capsys, "verify", "--realization", "fock", "--N", "3", "--out", str(out))
    assert code == 0 and stdout == ""
    assert "passed" in err
    assert json.loads(out.read_text())["summary"]["failed"] == 0


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n_modes": 2, "N": 3, "tolerance": 1e-9}))
    _, rep = report_of(capsys, "verify", "--config", str(cfg), "--N", "4")
    assert rep["params"]["n_modes"] == 2
    assert rep["params"]["N"] == 4
    assert rep["params"]["tolerance"] == 1e-9
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "verify", "--config", str(bad), "--N", "3")[0] == 2


def test_report_schema(capsys):
    code, out, _ = run(capsys, "report-schema")
    assert code == 0 and json.loads(out) == json.loads(json.dumps(REPORT_SCHEMA))


def test_deterministic_modulo_timestamp(capsys):
    argv = ("verify", "--realization", "cyclic", "--n", "2", "--N", "3")
    _, a = report_of(capsys, *argv)
    _, b = report_of(capsys, *argv)
    a.pop("timestamp")
    b.pop("timestamp")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
