import json
from pathlib import Path

import pytest

from tamedeg.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv, golden", [
    (["classify", "--type", "E6", "--sink", "3", "--vrange", "1"], "classify_e6_sink3_v1.txt"),
    (["extposet", "--tube", "p=4", "E1:10", "E3:10"], "extposet_p4.txt"),
    (["homtable", "--type", "E6", "--sink", "3", "P(3)", "P(1)", "I(3)", "E1_1(1)"], "homtable_e6.txt"),
    (["poset", "--tube", "p=4", "E1:10", "E3:10", "--dot", "-"], "fig1.dot"),
    (["poset", "--tube", "p=4", "E1:10", "E3:10", "--json", "-"], "fig1.json"),
])
def test_golden_outputs(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "classify", "--type", "E6", "--sink", "3", "--vrange", "2", "--json", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_fig1_dot_content():
    text = (GOLDEN / "fig1.dot").read_text()
    assert 'label="E1_1(10)+E1_3(10)", codim=0' in text
    assert text.count("style=bold") == 6
    assert text.isascii()


def test_small_commands(capsys):
    code, out, _ = run(capsys, "hom", "--type", "E6", "--sink", "3", "P(3)", "I(3)^+1")
    assert code == 0 and out == "hom=2 ext=0\n"
    code, out, _ = run(capsys, "eshift", "--tube", "p=4", "E1_2(3)", "--times", "4")
    assert out == "E1_2(7)\n"
    code, out, _ = run(capsys, "periodic-shift", "--type", "E6", "--sink", "3", "P(3)", "I(3)^+1",
                       "E1_1(1)+E1_2(1)+E1_3(1)")
    assert code == 0 and "tau^7 I(3)" in out and "(codim 1)" in out


def test_empty_vrange(capsys):
    code, out, _ = run(capsys, "classify", "--type", "E6", "--sink", "3", "--vrange", "-1")
    assert code == 0
    assert out == "|Q|\tU\tV\tk\tM_k\tcodim\n"


def test_classify_audit_round_trip(capsys, tmp_path):
    path = tmp_path / "run.json"
    code, _, _ = run(capsys, "classify", "--type", "E6", "--sink", "3", "--vrange", "2", "--audit",
                     "--json", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["calibration"]["perm"] == [1, 2, 3]
    assert data["audit"]["codimension"]["violations"] == []
    code, out, _ = run(capsys, "audit", str(path))
    assert code == 0 and "codimension: ok" in out
    # a forged codim is reported with exit code 1
    data["blocs"][0]["codim"] = 3
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "audit", str(path))
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv, code", [
    (["hom", "--type", "E6", "--sink", "3", "P(3)", "Q(1)"], 2),
    (["hom", "--type", "E6", "--sink", "9", "P(3)", "P(1)"], 2),
    (["hom", "--type", "X9", "P(1)", "P(1)"], 2),
    (["hom", "P(1)", "P(1)"], 2),
    (["audit", "/nonexistent/run.json"], 2),
    (["poset", "--type", "E6", "--sink", "3", "P(3)", "I(3)^+3", "--cap", "2"], 3),
    (["poset", "--type", "E6", "--sink", "3", "P(3)", "I(3)", "--cap", "0"], 2),
    (["extposet", "--type", "E6", "--sink", "3", "E1_1(1)", "E2_1(1)"], 4),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_bad_tube_flag():
    with pytest.raises(SystemExit) as exc:
        main(["hom", "--tube", "q=4", "E1:1", "E1:1"])
    assert exc.value.code == 2
