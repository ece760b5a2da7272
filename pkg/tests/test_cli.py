from __future__ import annotations

import json
import subprocess
import sys

import pytest

from bdk2.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_sl2(capsys):
    code, out, _ = run(capsys, "invariants", "--root-datum", "presets:SL2", "--matrix", "[[1]]")
    assert code == 0
    data = json.loads(out)
    assert data["Q"] == {"rank": 1, "upper": {"0,0": 1}}
    assert data["D"]["terms"] == [{"base": "4", "form": [[1]]}]
    assert data["weylInvariant"] is True


def test_invariants_strict_obstruction(capsys):
    code, out, _ = run(capsys, "invariants", "--root-datum", "presets:GL2", "--matrix", "[[1,0],[0,0]]", "--strict")
    assert code == 1
    assert json.loads(out)["weylInvariant"] is False


def test_symbol_outputs(capsys):
    code, out, _ = run(capsys, "symbol", "--u", "t", "--v", "t-2")
    assert code == 0
    data = json.loads(out)
    assert data["coords"] == [
        {"place": "t", "value": "2"},
        {"place": "t+3", "value": "2"},
        {"place": "inf", "value": "4"},
    ]
    assert data["sign2"] is None and data["signReal"] is None
    code, out, _ = run(capsys, "symbol", "--u", "2", "--v", "t^3", "--place", "t")
    assert json.loads(out) == {"place": "t", "value": "3"}
    code, out, _ = run(capsys, "symbol", "--field", "Q", "--u=-1", "--v=-1")
    data = json.loads(out)
    assert data["signReal"] == -1 and data["sign2"] == -1


@pytest.mark.parametrize(
    "argv, token",
    [
        (["symbol", "--u", "t^^2", "--v", "t"], "'^'"),
        (["symbol", "--u", "t", "--v", "t", "--place", "t^2+1"], "'t^2+1'"),
        (["symbol", "--field", "G7", "--u", "1", "--v", "1"], "'G7'"),
        (["invariants", "--root-datum", "presets:E8", "--matrix", "[[1]]"], "'presets:E8'"),
        (["invariants", "--root-datum", "presets:SL2", "--matrix", "[[1,x]]"], "'[[1,x]]'"),
        (["decide-model", "--triple", "{not json"], "'{not json'"),
    ],
)
def test_parse_errors_exit_2(capsys, argv, token):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert token in err


def test_decide_model_pgl2(capsys, tmp_path):
    code, out, _ = run(capsys, "presets", "--triple", "pgl2-odd")
    assert code == 0
    path = tmp_path / "pgl2_odd.json"
    path.write_text(out)
    code, out, _ = run(capsys, "decide-model", "--triple", str(path), "--place", "t")
    assert code == 0
    data = json.loads(out)
    assert data["exists"] is False
    assert data["obstruction"]["equations"] == ["2·h = 1"]
    code, _, _ = run(capsys, "decide-model", "--triple", str(path), "--place", "t", "--strict")
    assert code == 1


def test_decide_model_from_root_datum(capsys):
    code, out, _ = run(capsys, "decide-model", "--root-datum", "presets:GL2", "--matrix", "[[1,1],[-1,1]]")
    data = json.loads(out)
    assert code == 0 and data["exists"] is True and data["torsor_rank"] == 1


def test_residual_val_morphism_baer(capsys, tmp_path):
    _, out, _ = run(capsys, "presets", "--triple", "sl2")
    path = tmp_path / "sl2.json"
    path.write_text(out)
    code, out, _ = run(capsys, "residual", "--triple", str(path), "--place", "t+2")
    assert code == 0 and json.loads(out)["split"] is True
    code, out, _ = run(capsys, "val", "--triple", str(path), "--place", "inf")
    assert code == 0 and json.loads(out)["psiLinear"] == [0]
    code, out, _ = run(capsys, "baer-sum", "--triple", str(path), "--triple", str(path))
    assert json.loads(out)["Q"]["upper"] == {"0,0": 2}
    code, out, _ = run(capsys, "morphism", "--root-datum", "presets:SL2", "--matrix", "[[1]]", "--matrix", "[[2]]", "--strict")
    assert code == 1 and json.loads(out)["exists"] is False


def test_incarnate(capsys):
    code, out, _ = run(capsys, "incarnate", "--matrix", "[[1]]", "--left", "t", "--right", "t")
    data = json.loads(out)
    assert code == 0 and data["s"] == ["t^2"]
    assert {"place": "t", "value": "4"} in data["coords"]["coords"]


def test_presets_listing(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0 and "Sp4" in json.loads(out)["rootData"]
    code, out, _ = run(capsys, "presets", "--name", "GL2")
    assert json.loads(out)["coroots"] == [[1, -1]]


def test_output_is_deterministic(capsys):
    argv = ["invariants", "--root-datum", "presets:Sp4", "--matrix", "[[1,0],[0,1]]"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    proc = subprocess.run([sys.executable, "-m", "bdk2", *argv], capture_output=True, text=True, check=True)
    assert proc.stdout == first


def test_verify_models(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "models")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_verify_steinberg():
    proc = subprocess.run([sys.executable, "-m", "bdk2", "verify", "--suite", "steinberg"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[FAIL]" not in proc.stdout
