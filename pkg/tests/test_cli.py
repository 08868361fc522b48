"""CLI subcommands, problem file parsing, exit codes, serialization."""

import json

import pytest

from normrec.cli import main

PELL_FILE = {
    "field": [-2, 0, 1],
    "alphas": [[1, 0], [0, 1]],
    "m": 1,
    "units": [[3, 2]],
    "component": 1,
    "recurrence": {
        "vars": 1,
        "terms": [
            {"coeff": ["3/2", "1"], "base": [["17", "12"]]},
            {"coeff": ["3/2", "-1"], "base": [["17", "-12"]]},
        ],
    },
    "search": {"k_box": 10, "h_box": 30},
}


@pytest.fixture
def pell_file(tmp_path):
    p = tmp_path / "pell.json"
    p.write_text(json.dumps(PELL_FILE))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_solve(pell_file, capsys):
    code, doc = run(capsys, ["solve", pell_file, "--box", "100"])
    assert code == 0
    assert doc["count"] == 14
    assert [3, 2] in doc["solutions"] and [1, 0] in doc["solutions"]


def test_solve_empty(tmp_path, capsys):
    doc = dict(PELL_FILE, m=5)
    p = tmp_path / "m5.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, ["solve", str(p), "--box", "50"])
    assert code == 0 and out["solutions"] == []


def test_solve_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"field": [-2, 0')
    assert main(["solve", str(p)]) == 2
    capsys.readouterr()


def test_solve_missing_m(tmp_path, capsys):
    doc = {k: v for k, v in PELL_FILE.items() if k != "m"}
    p = tmp_path / "nom.json"
    p.write_text(json.dumps(doc))
    assert main(["solve", str(p)]) == 2
    capsys.readouterr()


def test_recurrences_tau_values(pell_file, capsys):
    code, doc = run(capsys, ["recurrences", pell_file, "--component", "1"])
    assert code == 0
    rec = doc["recurrences"][0]["recurrence"]
    taus = sorted(m["value"] for t in rec["terms"] for m in t["coeff"])
    assert taus == [["1/2", "0"], ["1/2", "0"]]


def test_recurrences_component_two(pell_file, capsys):
    code, doc = run(capsys, ["recurrences", pell_file, "--component", "2"])
    assert code == 0
    rec = doc["recurrences"][0]["recurrence"]
    taus = sorted(m["value"] for t in rec["terms"] for m in t["coeff"])
    # +-1/(2 sqrt 2) = +-sqrt(2)/4
    assert taus == [["0", "-1/4"], ["0", "1/4"]]


def test_recurrences_out_of_range(pell_file, capsys):
    assert main(["recurrences", pell_file, "--component", "3"]) == 2
    capsys.readouterr()


def test_intersect_certificate(pell_file, capsys):
    code, doc = run(capsys, ["intersect", pell_file])
    assert code == 0
    assert doc["classification"] == "reduced-exception"
    assert doc["a_matrix"] == [[2]] and doc["b_vector"] == [1]


def test_intersect_finite(tmp_path, capsys):
    doc = dict(
        PELL_FILE,
        recurrence={"vars": 1, "terms": [{"coeff": 1, "base": [2]}]},
        search={"k_box": 30, "h_box": 12},
    )
    p = tmp_path / "pow2.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, ["intersect", str(p)])
    assert code == 0
    assert out["classification"] == "finite-within-box"
    assert out["hits"] == [{"x": "1", "k": [0], "h": [0]}]


def test_intersect_hypothesis_violation(tmp_path, capsys):
    doc = dict(
        PELL_FILE,
        recurrence={
            "vars": 2,
            "terms": [{"coeff": 1, "base": ["1/2", 2]}],
        },
        search={"k_box": 5, "h_box": 5},
    )
    p = tmp_path / "nonint.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, ["intersect", str(p)])
    assert code == 0
    assert out["classification"].startswith("hypothesis-violation")


def test_essbound(capsys):
    code, doc = run(capsys, ["essbound", "--n", "2", "--r", "1"])
    assert code == 0 and doc["E"] == "5971968"
    code, doc = run(capsys, ["essbound", "--n", "1", "--r", "0"])
    assert code == 0 and doc["E"] == "216"


def test_essbound_invalid(capsys):
    assert main(["essbound", "--n", "0", "--r", "1"]) == 2
    capsys.readouterr()


def test_smlzeros(tmp_path, capsys):
    doc = {
        "field": [0, 1],
        "recurrence": {
            "vars": 1,
            "terms": [{"coeff": 1, "base": [-1]}, {"coeff": 1, "base": [1]}],
        },
    }
    p = tmp_path / "sml.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, ["smlzeros", str(p), "--bound", "50"])
    assert code == 0
    assert out["progressions"] == [{"offset": 1, "step": 2}]
    assert out["sporadic"] == []


def test_smlzeros_nonsimple_exit3(tmp_path, capsys):
    doc = {
        "field": [0, 1],
        "recurrence": {
            "vars": 1,
            "terms": [
                {
                    "coeff": {"monomials": [{"exps": [1], "value": 1}]},
                    "base": [2],
                }
            ],
        },
    }
    p = tmp_path / "nonsimple.json"
    p.write_text(json.dumps(doc))
    assert main(["smlzeros", str(p)]) == 3
    capsys.readouterr()


def test_uniteq(tmp_path, capsys):
    doc = {
        "field": [0, 1],
        "a": [1, 1],
        "generators": [[2, 2]],
        "search": {"expo_bound": 3},
    }
    p = tmp_path / "ueq.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, ["uniteq", str(p)])
    assert code == 0
    assert len(out["solutions"]) == 1
    assert out["solutions"][0]["y"] == [["1/2"], ["1/2"]]
    assert out["solutions"][0]["degenerate"] is False


def test_output_deterministic(pell_file, capsys):
    main(["intersect", pell_file])
    first = capsys.readouterr().out
    main(["intersect", pell_file])
    second = capsys.readouterr().out
    assert first == second
