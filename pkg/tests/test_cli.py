import json

import pytest

from main import run

ZETA = "omega=tag; Q=pi^-1/2; G(1/2*s+0)\n"
GAMMA = "omega=tag; Q=1; G(1*s+0)\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def test_invariants_zeta(write, capsys):
    assert run(["invariants", write("zeta.gamma", ZETA), "--depth", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:3] == ["d = 1", "q = 1", "omega_F = tag"]
    assert "H*(0) = 1" in out
    assert "H*(2) = 2/3" in out


def test_invariants_json_with_extension(write, capsys):
    assert run(["invariants", write("zeta.gamma", ZETA), "--depth", "3", "--json", "--extension", "h:1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == 1
    assert doc["degree"] == "1"
    assert doc["conductor"] == []
    assert len(doc["h_values"]) == 4
    assert doc["extension_value"] == "-1"


def test_transform_split_has_zero_deltas(write, capsys):
    assert run(["transform", write("g.gamma", GAMMA), "--script", "split(0,2)"]) == 0
    out = capsys.readouterr().out
    assert "step 1 split(0,2): Δd=0 Δq=1 Δω=1" in out
    assert "Q=2^1;" in out
    assert "G(1/2*s+0) G(1/2*s+1/2)" in out


def test_transform_json(write, capsys):
    assert run(["transform", write("g.gamma", GAMMA), "--script", "split(0,2), merge(0..1,2)", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [step["all_zero"] for step in doc["steps"]] == [True, True]
    assert doc["result_text"] == GAMMA


def test_transform_rejects_illegal_move(write, capsys):
    assert run(["transform", write("g.gamma", GAMMA), "--script", "expand(0)"]) == 1
    assert "expand(0)" in capsys.readouterr().err


def test_reduce(write, capsys):
    assert run(["reduce", write("g.gamma", "omega=tag; Q=1; G(1*s+5/2)")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == [
        "omega=tag; Q=1; G(1*s+1/2)",
        "R: kappa=1; roots=[-3/2, -1/2]; poles=[]",
        "trace: expand(0), expand(0)",
    ]


def test_equiv(write, capsys):
    a = write("a.gamma", GAMMA)
    assert run(["equiv", a, a, "--depth", "6"]) == 0
    assert capsys.readouterr().out.strip() == "fingerprint-equal(6)"

    b = write("b.gamma", "omega=tag; Q=1; G(1*s+1)")
    assert run(["equiv", a, b]) == 0
    assert capsys.readouterr().out.startswith("distinct (")


def test_verify_duplication(write, capsys):
    a = write("a.gamma", GAMMA)
    b = write("b.gamma", "omega=tag; Q=2; G(1/2*s+0) G(1/2*s+1/2)")
    assert run(["verify", a, b, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"]
    assert doc["c_re"] == pytest.approx(0.28209479177387814, abs=1e-9)


def test_verify_mismatch_exits_2(write, capsys):
    a = write("a.gamma", GAMMA)
    b = write("b.gamma", "omega=tag; Q=1; G(1*s+1/2)")
    assert run(["verify", a, b]) == 2


def test_bad_input_exits_1(write, capsys):
    assert run(["invariants", write("bad.gamma", "omega=tag; Q=1; G(-1*s+0)")]) == 1
    assert "λ must be positive" in capsys.readouterr().err
    assert run(["invariants", write("broken.gamma", "omega=")]) == 1
    assert run(["invariants", "/nonexistent/file.gamma"]) == 1


def test_json_input(write, capsys):
    doc = {"omega": {"tag": "tag"}, "Q": [{"base": "pi", "exp": "-1/2"}], "factors": [{"lam": "1/2", "mu": {"re": "0"}}]}
    assert run(["invariants", write("zeta.json", json.dumps(doc)), "--depth", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[:2] == ["d = 1", "q = 1"]


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == 1


def test_fuzz_record_and_history(tmp_path, capsys):
    db_url = f"sqlite:///{tmp_path / 'ledger.db'}"
    assert run(["fuzz", "--seed", "7", "--cases", "10", "--record", "--db-url", db_url]) == 0
    out = capsys.readouterr().out
    assert out.startswith("seed 7: 10 cases")
    assert "failures: 0" in out

    assert run(["history", "--db-url", db_url, "--json"]) == 0
    runs = json.loads(capsys.readouterr().out)["runs"]
    assert len(runs) == 1
    assert runs[0]["seed"] == 7
    assert runs[0]["ok"] is True


def test_fuzz_rejects_bad_config(capsys):
    assert run(["fuzz", "--cases", "-1"]) == 1
