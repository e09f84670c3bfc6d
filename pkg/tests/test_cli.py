import json

import pytest

from yoknot import checks
from yoknot.cli import load_report, main, parse_braids, parse_params
from yoknot.scalars import CycloNum, RatFunc, parse_scalar, ring

PARAMS = json.dumps({"d": 2, "m": 2, "z": "q^2 + v1", "S": [0, 1], "lambda": {"1": {"0": "v2", "1": "1/3"}}})
BRAIDS = json.dumps(
    [
        {"n": 1, "word": []},
        {"n": 2, "word": [{"g": "s", "i": 1, "e": 1}]},
        {"n": 2, "word": [{"g": "s0", "e": 1}, {"g": "s", "i": 1, "e": 1}, {"g": "t", "i": 2, "e": 1}]},
    ]
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "--d", "2", "--m", "2", "--n", "2")
    report = load_report(out)
    assert code == 0 and report["status"] == "PASS"
    assert report["rows"][0]["sum_of_squares"] == 32


def test_dims_table_without_n(capsys):
    code, out, _ = run(capsys, "dims", "--d", "3", "--m", "1", "--max-rank", "200")
    rows = load_report(out)["rows"]
    assert code == 0 and [r["n"] for r in rows] == [1, 2, 3]


def test_esystem(capsys):
    code, out, _ = run(capsys, "esystem", "--d", "2", "--check")
    report = load_report(out)
    assert code == 0
    assert [s["S"] for s in report["solutions"]] == [[0], [1], [0, 1]]
    assert all(s["E_condition"] == "PASS" for s in report["solutions"])


def test_esystem_values_parse(capsys):
    _, out, _ = run(capsys, "esystem", "--d", "3")
    r = ring(3, 1)
    row = load_report(out)["solutions"][1]  # S = {1}
    assert [parse_scalar(v, r) for v in row["x0"]] == [RatFunc.const(r, CycloNum.zeta(3, j)) for j in range(3)]


def test_invariant_empty_word(capsys):
    code, out, _ = run(capsys, "invariant", "--params", PARAMS, "--braid", '{"n": 1, "word": []}')
    report = load_report(out)
    assert code == 0
    assert report["results"][0]["Gamma"]["base"] == "1"
    assert report["results"][0]["Gamma'"]["base"] == "1"


def test_invariant_keeps_input_order(capsys):
    code, out, _ = run(capsys, "invariant", "--params", PARAMS, "--braid", BRAIDS, "--variant", "Gamma'")
    report = load_report(out)
    assert code == 0
    assert [r["braid"] for r in report["results"]] == json.loads(BRAIDS)
    assert parse_braids([r["braid"] for r in report["results"]]) == parse_braids(json.loads(BRAIDS))
    assert report["results"][2]["Gamma'"]["sqrt_omega_parity"] == 1


def test_trace(capsys, tmp_path):
    pfile = tmp_path / "params.json"
    pfile.write_text(json.dumps({"d": 1, "m": 1, "z": "q^3"}))
    code, out, _ = run(capsys, "trace", "--params", str(pfile), "--braid", '{"n": 3, "word": [{"g":"s","i":1},{"g":"s","i":2}]}')
    report = load_report(out)
    assert code == 0 and report["tau"] == "q^6"


def test_output_is_deterministic(capsys):
    first = run(capsys, "invariant", "--params", PARAMS, "--braid", BRAIDS)
    second = run(capsys, "invariant", "--params", PARAMS, "--braid", BRAIDS)
    assert first == second
    a = run(capsys, "selfcheck", "--criteria", "6", "--samples", "2", "--seed", "5")
    b = run(capsys, "selfcheck", "--criteria", "6", "--samples", "2", "--seed", "5")
    assert a == b and a[0] == 0
    assert load_report(a[1])["seed"] == 5


def test_text_format(capsys):
    code, out, _ = run(capsys, "dims", "--d", "2", "--m", "2", "--n", "2", "--format", "text")
    assert code == 0 and "rows[0].sum_of_squares = 32" in out


def test_schur_round_trip(capsys):
    code, out, _ = run(capsys, "schur", "--d", "1", "--m", "1", "--n", "2")
    report = load_report(out)
    r = ring(1, 1)
    assert code == 0 and report["status"] == "PASS"
    assert parse_scalar(report["shapes"][0]["schur"], r) == parse_scalar("1 + q^-2", r)


def test_reps_verify(capsys):
    code, out, _ = run(capsys, "reps-verify", "--d", "2", "--m", "2", "--n", "2")
    assert code == 0 and load_report(out)["status"] == "PASS"


# -- errors -------------------------------------------------------------------------


def test_scalar_parse_error_exit_2(capsys):
    bad = json.dumps({"d": 2, "m": 1, "z": "q + * 2", "S": [0]})
    code, _, err = run(capsys, "invariant", "--params", bad, "--braid", '{"n":1}')
    assert code == 2 and "z:4" in err


def test_braid_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "invariant", "--params", PARAMS, "--braid", '[{"n":2,"word":[{"g":"s","i":5}]}]')
    assert code == 2 and "[0].word[0]" in err


def test_bad_json_exit_2(capsys):
    code, _, err = run(capsys, "trace", "--params", "{nope", "--braid", "{}")
    assert code == 2 and "column" in err


def test_zero_z_exit_3(capsys):
    params = json.dumps({"d": 2, "m": 1, "z": "0", "S": [0]})
    code, _, err = run(capsys, "invariant", "--params", params, "--braid", '{"n":1}')
    assert code == 3 and "z = 0" in err


def test_E_violation_exit_3_unless_overridden(capsys):
    params = json.dumps({"d": 2, "m": 1, "z": "3", "x": [{"a": 0, "b": 1, "value": "1/3"}]})
    code, _, err = run(capsys, "invariant", "--params", params, "--braid", '{"n":1,"word":[{"g":"t","i":1}]}')
    assert code == 3 and "E-condition" in err
    code, out, _ = run(capsys, "invariant", "--params", params, "--braid", '{"n":1,"word":[{"g":"t","i":1}]}', "--no-enforce-E")
    assert code == 0 and load_report(out)["results"][0]["Gamma"]["base"] == "1/3"


def test_rank_guard_exit_3(capsys, monkeypatch):
    code, _, err = run(capsys, "schur", "--d", "2", "--m", "2", "--n", "2", "--max-rank", "10")
    assert code == 3 and "exceeds" in err
    monkeypatch.setenv("YOKNOT_MAX_RANK", "10")
    code, _, _ = run(capsys, "schur", "--d", "2", "--m", "2", "--n", "2")
    assert code == 3


def test_selfcheck_violation_exit_4(capsys, monkeypatch):
    def broken(**_):
        res = checks.SuiteResult("broken")
        res.record(False, "deliberate")
        return res

    monkeypatch.setitem(checks.CRITERIA, 5, broken)
    code, out, err = run(capsys, "selfcheck", "--criteria", "5")
    assert code == 4
    assert "criterion 5 (broken)" in err
    assert load_report(out)["status"] == "FAIL"


def test_parse_params_forms():
    tp = parse_params({"d": 2, "m": "inf", "z": "q", "x": [{"a": -1, "b": 1, "value": "q^-1"}], "x_default": 0})
    assert tp.x(-1, 1) == parse_scalar("q^-1", tp.ring)
    assert tp.x(5, 0).is_zero()
    tp = parse_params({"d": 3, "m": 1, "z": 2, "S": [1]})
    assert tp.x(0, 1) == RatFunc.const(tp.ring, CycloNum.zeta(3, 1))


def test_unknown_report_rejected():
    with pytest.raises(ValueError):
        load_report('{"command": "nope"}')
