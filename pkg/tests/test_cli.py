import json
from pathlib import Path

import pytest

from symbreak.circuit import GateCircuit
from symbreak.cli import main

DATA = Path(__file__).parent / "data"
SPECS = sorted((DATA / "specs").glob("*.json"))
TRACTABLE = [p for p in SPECS if p.name != "johnson10_2.json"]


def spec(name):
    return str(DATA / "specs" / name)


def graph(name):
    return str(DATA / "graphs" / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_natural(capsys):
    code, out, err = run(capsys, "gen", "--spec", spec("natural5.json"))
    assert code == 0
    assert "p cnf 5 4\n" in out
    assert out.splitlines()[-4:] == ["-1 2 0", "-2 3 0", "-3 4 0", "-4 5 0"]
    assert "clauses 4" in err


def test_gen_intractable(capsys):
    code, _, err = run(capsys, "gen", "--spec", spec("johnson10_2.json"))
    assert code == 3
    assert "polynomial" in err


def test_gen_path3_golden(capsys, tmp_path):
    out_file = tmp_path / "p3.cnf"
    code, out, _ = run(capsys, "gen", "--spec", spec("path3.json"), "--out", str(out_file))
    assert code == 0
    assert out == "core 3 aux 0 clauses 1 literals 2\n"
    assert out_file.read_text() == (
        "c core-vars 3\nc aux-vars 0\nc map 1 x_1\nc map 2 x_2\nc map 3 x_3\np cnf 3 1\n-1 3 0\n"
    )


@pytest.mark.parametrize("fmt", ["dimacs", "gates"])
@pytest.mark.parametrize("path", TRACTABLE, ids=lambda p: p.stem)
def test_round_trip_corpus(capsys, tmp_path, path, fmt):
    pred = tmp_path / "pred"
    assert main(["gen", "--spec", str(path), "--format", fmt, "--out", str(pred)]) == 0
    if fmt == "gates":
        c = GateCircuit.from_text(pred.read_text())
        if c.input_count - (c.core_count or c.input_count) > 8:
            pytest.skip("aux inputs of gate files are checked exhaustively; too many here")
    capsys.readouterr()
    code, out, _ = run(capsys, "check", "--spec", str(path), "--pred", str(pred), "--format", "report-json")
    assert code == 0, out
    assert json.loads(out)["verdict"] == "complete"


def test_check_mutation(capsys, tmp_path):
    pred = tmp_path / "p.cnf"
    main(["gen", "--spec", spec("natural5.json"), "--out", str(pred)])
    lines = pred.read_text().splitlines()
    lines = [ln for ln in lines if ln != "-2 3 0"]
    lines = [ln.replace("p cnf 5 4", "p cnf 5 3") for ln in lines]
    pred.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    code, out, _ = run(capsys, "check", "--spec", spec("natural5.json"), "--pred", str(pred))
    assert code == 1
    assert "verdict: incomplete" in out
    assert "accepts" in out


def test_check_bit_cap(capsys, tmp_path):
    pred = tmp_path / "p.cnf"
    main(["gen", "--spec", spec("natural5.json"), "--out", str(pred)])
    code, _, _ = run(capsys, "check", "--spec", spec("natural5.json"), "--pred", str(pred), "--bit-cap", "4")
    assert code == 3


def test_check_size_mismatch(capsys, tmp_path):
    pred = tmp_path / "p.cnf"
    main(["gen", "--spec", spec("natural3.json"), "--out", str(pred)])
    code, _, _ = run(capsys, "check", "--spec", spec("natural5.json"), "--pred", str(pred))
    assert code == 2


@pytest.mark.parametrize(
    "name,expected", [("natural3.json", "4/4"), ("rowcol2x2.json", "7/7"), ("johnson4_2.json", "11/11")]
)
def test_orbits(capsys, name, expected):
    code, out, _ = run(capsys, "orbits", "--spec", spec(name))
    assert (code, out) == (0, expected + "\n")


def test_orbits_json(capsys):
    code, out, _ = run(capsys, "orbits", "--spec", spec("wreath2_3.json"), "--format", "report-json")
    assert code == 0
    assert json.loads(out) == {"burnside": 10, "enumerated": 10}


@pytest.mark.parametrize("mode", ["rowcol", "johnson"])
def test_gni_noniso(capsys, mode):
    code, out, _ = run(capsys, "gni", "--graph1", graph("path4.txt"), "--graph2", graph("star4.dimacs"), "--mode", mode)
    assert code == 0
    assert out == "NON-ISOMORPHIC (certificate verified)\n"


@pytest.mark.parametrize("mode", ["rowcol", "johnson"])
def test_gni_iso(capsys, mode):
    code, out, _ = run(
        capsys, "gni", "--graph1", graph("path4.txt"), "--graph2", graph("path4_relabelled.txt"), "--mode", mode
    )
    assert code == 1
    assert out == "NO CERTIFICATE (isomorphic or oracle limit)\n"


def test_gni_johnson_cap(capsys):
    code, _, _ = run(capsys, "gni", "--graph1", graph("edge11.txt"), "--graph2", graph("edge11.txt"), "--mode", "johnson")
    assert code == 3


def test_gni_shape_mismatch(capsys):
    code, out, _ = run(capsys, "gni", "--graph1", graph("path4.txt"), "--graph2", graph("tree_path3.txt"))
    assert code == 0
    assert out.startswith("NON-ISOMORPHIC")


def test_tree_goldens(capsys):
    code, out, _ = run(capsys, "tree", "--tree", graph("tree_path3.txt"))
    assert code == 0
    assert json.loads(out) == {
        "kind": "disjoint",
        "degree": 3,
        "parts": [
            {
                "spec": {"kind": "wreath", "base": {"kind": "trivial", "degree": 1}, "top": {"kind": "natural", "n": 2}},
                "support": [1, 3],
            }
        ],
    }
    _, out, _ = run(capsys, "tree", "--tree", graph("tree_star4.txt"))
    assert json.loads(out)["parts"] == [
        {
            "spec": {"kind": "wreath", "base": {"kind": "trivial", "degree": 1}, "top": {"kind": "natural", "n": 3}},
            "support": [2, 3, 4],
        }
    ]
    _, out, _ = run(capsys, "tree", "--tree", graph("tree_single.txt"))
    assert out == '{"degree": 1, "kind": "trivial"}\n'


def test_bad_inputs(capsys):
    assert run(capsys, "tree", "--tree", graph("notatree.txt"))[0] == 2
    assert run(capsys, "orbits", "--spec", "missing.json")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "gen")[0] == 2
    assert run(capsys, "orbits", "--spec", spec("natural3.json"), "--group-cap", "0")[0] == 2


def test_byte_stable(capsys):
    outputs = set()
    for _ in range(2):
        main(["gen", "--spec", spec("disjoint9.json")])
        outputs.add(capsys.readouterr().out)
    assert len(outputs) == 1
