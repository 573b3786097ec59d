import json
from pathlib import Path

import numpy as np
import pytest

from tclab.cli import UsageError, main, parse_point

GOLDEN = json.loads((Path(__file__).parent / "golden" / "invariants.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("expr", sorted(GOLDEN))
def test_golden_invariants(capsys, expr):
    code, out, _ = run(capsys, "invariants", expr, "--json")
    assert code == 0
    d = json.loads(out)
    assert d["schema_version"] == 1
    want = GOLDEN[expr]
    assert d["cat"] == {"lo": want["cat"], "hi": want["cat"], "exact": True}
    assert d["tc"] == {"lo": want["tc"], "hi": want["tc"], "exact": True}
    if want["tcm"] is None:
        assert d["tcm"] is None
    else:
        assert d["tcm"]["lo"] == d["tcm"]["hi"] == want["tcm"]


def test_invariants_text_chain(capsys):
    code, out, _ = run(capsys, "invariants", "F(S1 x R^2, 2)")
    assert code == 0
    assert "TC   = 4 (exact)" in out
    chain = [ln.split()[0] for ln in out.splitlines() if ln[:1] == "R"]
    tc_lines = [ln for ln in out.splitlines() if ln.startswith("R") and " TC(" in ln]
    assert tc_lines[-1].startswith("R12")
    assert "R8" in chain
    code, out, _ = run(capsys, "invariants", "wedge(RP3, S5)")
    assert "TC   = 5 (exact)" in out and "R11" in out
    code, out, _ = run(capsys, "invariants", "pt")
    assert "cat  = 1 (exact)" in out and "TC   = 1 (exact)" in out


def test_fields_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TCLAB_FIELDS", "Z2")
    code, out, _ = run(capsys, "invariants", "RP3", "--json")
    d = json.loads(out)
    assert d["fields"] == ["Z2"]
    assert [r["field"] for r in d["rings"]] == ["Z2"]
    assert d["rings"][0]["cup"] == 3


def test_invariant_errors_exit_2(capsys):
    code, _, err = run(capsys, "invariants", "wedge(S1 S2)")
    assert code == 2 and "position 9" in err
    code, _, err = run(capsys, "invariants", "F(S2 x R^1, 2)")
    assert code == 2
    code, _, _ = run(capsys, "invariants", "S1", "--fields", "Z4")
    assert code == 2


def test_ring_command(capsys):
    code, out, _ = run(capsys, "ring", "trunc(a:1, h=4) @Z2", "--json")
    d = json.loads(out)
    assert code == 0
    assert (d["cup"], d["zcl"], d["betti"]) == (3, 3, [1, 1, 1, 1])
    code, out, _ = run(capsys, "ring", "tensor(S1, S2)")
    assert code == 0 and "cup = 2" in out and "zcl = 3" in out
    code, _, err = run(capsys, "ring", "tensor(S1,")
    assert code == 2


def test_plan_quarter_circle(capsys):
    code, out, _ = run(capsys, "plan", "circle", "0deg", "90deg", "--resolution", "4")
    d = json.loads(out)
    assert code == 0 and d["rule"] == 0
    pts = np.array([s["point"] for s in d["samples"]])
    assert np.allclose(pts[2], [np.sqrt(0.5), np.sqrt(0.5)])
    assert [s["t"] for s in d["samples"]] == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_plan_swap_is_collision_free(capsys):
    code, out, _ = run(capsys, "plan", "cylinder-config:1", "0deg:-1,180deg:1", "180deg:1,0deg:-1", "--resolution", "1000")
    d = json.loads(out)
    assert code == 0
    assert d["min_collision_margin"] > 0
    assert len(d["samples"]) == 1001


def test_plan_antipodal_poles(capsys):
    code, out, _ = run(capsys, "plan", "sphere:2", "0,0,1", "0,0,-1")
    assert code == 0 and json.loads(out)["rule"] in (1, 2)


def test_plan_input_errors(capsys):
    assert run(capsys, "plan", "cylinder-config:1", "0deg:0,0deg:0", "0deg:0,90deg:0")[0] == 2
    assert run(capsys, "plan", "sphere:2", "0,0,2", "0,0,1")[0] == 2
    assert run(capsys, "plan", "sphere:2", "0,1", "0,0,1")[0] == 2
    assert run(capsys, "plan", "sphere:2", "0,x,1", "0,0,1")[0] == 2


def test_parse_point():
    np.testing.assert_allclose(parse_point("90deg:2"), [0.0, 1.0, 2.0], atol=1e-15)
    np.testing.assert_allclose(parse_point("1, 0 ,0"), [1.0, 0.0, 0.0])
    with pytest.raises(UsageError):
        parse_point("1,,2")


def test_verify_command(capsys):
    code, out, err = run(capsys, "verify", "sphere:2", "--samples", "400", "--seed", "7")
    d = json.loads(out)
    assert code == 0 and d["passed"] and d["coverage_fraction"] == 1.0
    assert "timing_seconds" not in d
    assert "PASS" in err
    code, out, _ = run(capsys, "verify", "sphere:2", "--samples", "400", "--seed", "7")
    assert json.loads(out) == d
    code, out, _ = run(capsys, "verify", "circle", "--samples", "50", "--timing")
    assert "timing_seconds" in json.loads(out)


def test_usage_errors(capsys):
    assert run(capsys, "verify", "torus")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--json")
    d = json.loads(out)
    assert code == 0
    counts = {p["planner"]: p["rule_count"] for p in d["planners"]}
    assert counts["circle"] == 2 and counts["wedge:2"] == 3 and counts["cylinder-config:1"] == 4
    assert d["so_category"]["SO3"] == 4
    code, out, _ = run(capsys, "catalog")
    assert "cylinder-config:2" in out
