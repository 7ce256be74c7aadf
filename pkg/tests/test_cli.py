import json
import subprocess
import sys
from pathlib import Path

import pytest

from rrealize.cli import main
from rrealize.setcode import as_code, decode

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def field(out, key):
    for line in out.splitlines():
        if line.startswith(key + ": "):
            return line.split(": ", 1)[1]
    raise KeyError(key)


def test_ord_normalizes(capsys):
    code, out, _ = run(capsys, "ord", "w*2 + 3")
    assert code == 0 and field(out, "ordinal") == "w*2+3"


def test_ord_pairing(capsys):
    code, out, _ = run(capsys, "ord", "3", "--pair-with", "4", "--json")
    data = json.loads(out)
    code2, out2, _ = run(capsys, "ord", data["report"]["code"], "--unpair")
    assert code == code2 == 0
    assert field(out2, "pair") == "3 4"


def test_realize_check_fixture(capsys):
    code, out, _ = run(capsys, "realize", "check", "--formula", FIX / "f.fml", "--realizer", FIX / "r.rlz",
                       "--universe-rank", "3")
    assert code == 0 and field(out, "verdict") == "Realized"


def test_realize_check_refuted(capsys, tmp_path):
    (tmp_path / "g.fml").write_text("{} in {}\n")
    code, out, _ = run(capsys, "realize", "check", "--formula", tmp_path / "g.fml", "--realizer", FIX / "r.rlz")
    assert code == 1 and field(out, "verdict").startswith("Refuted")


def test_rec_test_fixture(capsys):
    code, out, _ = run(capsys, "rec", "test", "--program", FIX / "eq.otm", "--param", "{2}", "--pool",
                       FIX / "pool.txt")
    assert code == 0 and field(out, "verdict") == "recognizes {2}"


def test_code_encode_decode(capsys):
    code, out, _ = run(capsys, "code", "encode", "{{}}")
    assert code == 0 and field(out, "code") == "{2}"
    code, out, _ = run(capsys, "code", "decode", "{2}")
    assert code == 0 and "{{}}" in out


def test_formula_commands(capsys):
    assert field(run(capsys, "formula", "classify", "(all x)(ex y)(x in y)")[1], "class") == "Pi2"
    code, out, _ = run(capsys, "formula", "eval", "(ex y in x)(y = {})", "--env", "x={{}}")
    assert code == 0 and field(out, "value") == "true"
    assert run(capsys, "formula", "eval", "{} in {}")[0] == 1


def test_proof_check_and_extract(capsys, tmp_path):
    code, out, _ = run(capsys, "proof", "check", FIX / "identity.proof")
    assert code == 0
    rlz = tmp_path / "id.rlz"
    code, _, _ = run(capsys, "proof", "extract", FIX / "identity.proof", "--out", rlz)
    assert code == 0 and rlz.exists()
    fml = tmp_path / "id.fml"
    fml.write_text("{} = {} -> {} = {}\n")
    code, out, _ = run(capsys, "realize", "check", "--formula", fml, "--realizer", rlz)
    assert code == 0 and field(out, "verdict") == "Realized"


def test_kp_emit_pairing(capsys, tmp_path):
    code, out, _ = run(capsys, "kp", "emit", "Pairing", "--set", "a={}", "--set", "b={{}}", "--json",
                       "--out", tmp_path / "em")
    assert code == 0
    assert (tmp_path / "em" / "realizer.rlz").exists()
    assert json.loads(out)["report"]["verdict"] == "Realized"


def test_kp_infinity_is_unknown(capsys):
    assert run(capsys, "kp", "emit", "Infinity")[0] == 2


@pytest.mark.parametrize("argv", [[], ["nosuch"], ["ord"], ["ord", "w^"], ["code", "encode", "{"],
                                  ["realize", "check", "--formula", "/no/such/file", "--realizer", "x"],
                                  ["otm", "run", "lib:nonesuch"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and err


def test_malformed_instance_is_invalid(capsys):
    code, out, _ = run(capsys, "kp", "emit", "Pairing")
    assert code == 1 and "MalformedInstance" in out


def test_reports_are_deterministic(capsys):
    argv = ["rec", "test", "--program", FIX / "eq.otm", "--param", "{2}", "--pool", FIX / "pool.txt"]
    a = run(capsys, *argv)[1].splitlines()
    b = run(capsys, *argv)[1].splitlines()
    assert a[0].startswith("# generated") and a[1:] == b[1:]


def test_json_embeds_manifest(capsys):
    data = json.loads(run(capsys, "code", "encode", "{}", "--json")[1])
    assert data["manifest"]["command"] == "code encode"
    assert data["manifest"]["flags"]["value"] == "{}"


def test_entry_point_module():
    out = subprocess.run([sys.executable, "-m", "rrealize.cli", "ord", "w+1"], capture_output=True, text=True)
    assert out.returncode == 0 and "w+1" in out.stdout
