import json

import pytest

from lass import catalog
from lass.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_check_catalog_entry(capsys):
    code, out, _ = run(capsys, "check", "sl2")
    assert code == 0 and "PASS" in out and "FAIL" not in out


def test_check_file_payload(tmp_path, capsys):
    path = write(tmp_path, "g.json", catalog.load("heisenberg3").payload)
    assert run(capsys, "check", path)[0] == 0


def test_check_broken_bracket(tmp_path, capsys):
    data = catalog.load("sl2").payload
    data = dict(data, brackets=[dict(b) for b in data["brackets"]])
    data["brackets"].append({"i": 1, "j": 0, "coeffs": {"1": "1"}})
    code, out, _ = run(capsys, "check", write(tmp_path, "bad.json", data))
    assert code == 1 and "FAIL" in out


def test_malformed_inputs(tmp_path, capsys):
    code, _, err = run(capsys, "check", write(tmp_path, "x.json", "{\"dim\": 2,"))
    assert code == 2 and "line" in err
    code, _, err = run(capsys, "betti", write(tmp_path, "y.json", {"brackets": []}))
    assert code == 2 and "dim" in err
    assert run(capsys, "betti", "no_such_entry")[0] == 2
    assert run(capsys, "catalog", "show", "no_such_entry")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_betti(capsys):
    code, out, _ = run(capsys, "betti", "sl2")
    assert code == 0 and out.split() == ["1", "0", "0", "1"]
    code, out, _ = run(capsys, "betti", "heisenberg3", "--out", "json")
    assert json.loads(out) == {"betti": [1, 2, 2, 1]}
    code, out, _ = run(capsys, "betti", "quadratic_jet")
    assert out.split() == ["2", "2"]


def test_ss_hs(capsys):
    code, out, _ = run(capsys, "ss", "hs", "sl2_cartan", "--verify")
    assert code == 0 and "stabilization page: 3" in out and "FAIL" not in out
    code, out, _ = run(capsys, "ss", "hs", "heisenberg_center", "--out", "json", "--pages", "2")
    data = json.loads(out)
    assert code == 0 and len(data["pages"]) == 3 and data["betti"] == [1, 2, 2, 1]


def test_ss_hs_non_subalgebra(tmp_path, capsys):
    data = dict(catalog.load("sl2").payload, subalgebra=[[0, 1, 0], [0, 0, 1]])
    assert run(capsys, "ss", "hs", write(tmp_path, "s.json", data))[0] == 1


def test_ss_bad_pages(capsys):
    assert run(capsys, "ss", "hs", "sl2_cartan", "--pages", "many")[0] == 2


def test_ss_jet(capsys):
    code, out, _ = run(capsys, "ss", "jet", "sl2_standard_jet", "--order", "2", "--verify")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "ss", "jet", "quadratic_jet", "--out", "json")
    data = json.loads(out)
    assert data["stabilization"] == 2 and data["betti"] == [2, 2] and data["linear"] is False
    assert run(capsys, "ss", "jet", "sl2")[0] == 2
    assert run(capsys, "ss", "jet", "scaling_jet", "--order", "-1")[0] == 2


def test_d2check(capsys):
    code, out, _ = run(capsys, "d2check", "heisenberg_center")
    assert code == 0 and "(p,q)=(0,1): engine rank 1, oracle rank 1, equal=true" in out
    code, out, _ = run(capsys, "d2check", "free_nilpotent3_center", "--out", "json")
    data = json.loads(out)
    assert code == 0 and data["verdict"]["ok"] and all(c["equal"] for c in data["cells"])
    assert run(capsys, "d2check", "sl2_cartan")[0] == 1
    assert run(capsys, "d2check", "sl2")[0] == 2


def test_catalog_verbs(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and all(n in out for n in catalog.names())
    code, out, _ = run(capsys, "catalog", "list", "--out", "json")
    assert {e["name"] for e in json.loads(out)["entries"]} == set(catalog.names())
    code, out, _ = run(capsys, "catalog", "show", "sl2", "--out", "json")
    assert json.loads(out)["expected"]["betti"] == [1, 0, 0, 1]


def test_catalog_entry_file_round_trip(tmp_path, capsys):
    path = write(tmp_path, "e.json", catalog.load("aff1_ideal").to_json())
    code, out, _ = run(capsys, "d2check", path)
    assert code == 0
