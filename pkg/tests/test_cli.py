import json
from pathlib import Path

import pytest

from secdss.cli import main

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_capacity(capsys):
    code, rep, _ = run(capsys, "capacity", "--n", "5", "--k", "3", "--model", "limited", "--ell", "1", "--b", "1")
    assert code == 0
    assert (rep["M"], rep["R"], rep["E"], rep["bl_capacity"]) == (9, 5, 4, 5)


def test_capacity_fractional_beta(capsys):
    code, rep, _ = run(capsys, "capacity", "--n", "4", "--k", "3", "--beta", "1/2")
    assert code == 0 and rep["M"] == 3


def test_capacity_bad_threat_exit_2(capsys):
    code, _, err = run(capsys, "capacity", "--n", "4", "--k", "3", "--ell", "3")
    assert code == 2 and "passive" in err


def test_layout(capsys):
    code, rep, _ = run(capsys, "layout", "--n", "4")
    assert code == 0 and rep["nodes"]["4"] == [3, 5, 6]


@pytest.mark.parametrize("preset,delete,want", [("single-repair", ["1", "2"], 1), ("two-repair", ["1"], 5)])
def test_mincut_presets(capsys, preset, delete, want):
    code, rep, _ = run(capsys, "mincut", "--preset", preset, "--delete", *delete)
    assert code == 0 and rep["min_cut"] == want


def test_mincut_chain_preset(capsys):
    code, rep, _ = run(capsys, "mincut", "--preset", "chain", "--n", "5", "--k", "3", "--delete", "6")
    assert code == 0 and rep["min_cut"] == 3 + 2


def test_mincut_trace_file(capsys, tmp_path):
    f = tmp_path / "t.json"
    f.write_text(json.dumps([
        {"event": "fail", "node": 3},
        {"event": "repair", "node": 5, "helpers": [1, 2, 4]},
        {"event": "collect", "collector_nodes": [1, 2, 5]},
    ]))
    code, rep, _ = run(capsys, "mincut", "--n", "4", "--k", "3", "--trace", str(f), "--delete", "1", "2")
    assert code == 0 and rep["min_cut"] == 1


def test_secret_roundtrip(capsys, tmp_path):
    pkg = tmp_path / "pkg.json"
    code, rep, _ = run(capsys, "encode-secret", "--n", "4", "--k", "3", "--ell", "2", "--q", "7",
                       "--seed", "1", "--secret", "3", "--out", str(pkg))
    assert code == 0 and rep["secret"] == [3]
    code, rep, _ = run(capsys, "decode-secret", "--package", str(pkg), "--collector", "2", "3", "4")
    assert code == 0 and rep["secret"] == [3]


def test_randomized_commands_need_a_seed(capsys):
    assert run(capsys, "encode-secret", "--n", "4", "--k", "3", "--ell", "1")[0] == 2
    assert run(capsys, "rnc-demo")[0] == 2


def test_attack_commands(capsys):
    code, rep, _ = run(capsys, "attack-omniscient", str(SCEN / "omniscient_n4.json"))
    assert code == 0 and rep["failures"] == 0
    code, rep, _ = run(capsys, "attack-limited", str(SCEN / "limited_n5.json"), "--seed", "9")
    assert code == 0 and rep["seed"] == 9
    code, _, err = run(capsys, "attack-limited", str(SCEN / "omniscient_n4.json"))
    assert code == 2 and "scheme" in err


def test_model_violation_exit_3(capsys, tmp_path):
    doc = json.loads((SCEN / "omniscient_n4.json").read_text())
    doc["trace"].insert(0, {"event": "compromise", "slot": 2, "control": True})
    f = tmp_path / "s.json"
    f.write_text(json.dumps(doc))
    code, _, err = run(capsys, "attack-omniscient", str(f))
    assert code == 3 and "budget" in err


def test_verify(capsys):
    code, rep, _ = run(capsys, "verify", "--seed", "0")
    assert code == 0 and rep["ok"] and len(rep["checks"]) == 8


def test_rnc_demo(capsys):
    code, rep, _ = run(capsys, "rnc-demo", "--seed", "3")
    assert code == 0 and rep["eve_rank"] == 6 and rep["secrecy_rate"] == 0


def test_timing_is_opt_in(capsys):
    _, rep, _ = run(capsys, "layout", "--n", "3")
    assert "wall_clock_s" not in rep
    _, rep, _ = run(capsys, "layout", "--n", "3", "--timing")
    assert "wall_clock_s" in rep
