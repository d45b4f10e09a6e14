from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from stablecm.cli import run


def call(argv, doc=None, tmp_path=None):
    if doc is not None:
        path = tmp_path / "job.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        argv = [argv[0], str(path)] + argv[1:]
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def test_etriangle_on_spinor():
    code, text = call(["etriangle", "--module", "quadric2/spinor"])
    res = json.loads(text)["result"]
    assert code == 0 and (res["formula"], res["oracle"], res["cover"]) == (2, 2, 2)


def test_etriangle_truncation_backend():
    code, text = call(["etriangle", "--module", "ade:E6:1"])
    res = json.loads(text)["result"]
    assert code == 0 and res["backend"] == "truncation" and res["formula"] == res["oracle"] == 3


def test_hilbert_job(tmp_path):
    doc = {"schema": "stablecm/1", "ring": "p=5; vars x,y", "relations": ["x^2"]}
    code, text = call(["hilbert"], doc, tmp_path)
    res = json.loads(text)["result"]
    assert code == 0 and res["e"] == [2, 1] and res["samples"]


def test_verify_axioms(tmp_path):
    doc = {"schema": "stablecm/1", "ring": "catalog:quadric2",
           "modules": {"S": {"catalog": "quadric2/spinor"}, "F": {"free": [0]}}, "params": {"cones": 4}}
    code, text = call(["verify-axioms", "--seed", "5"], doc, tmp_path)
    rep = json.loads(text)
    assert code == 0 and rep["result"]["passed"] and rep["result"]["witnesses"] >= 10


def test_link_job(tmp_path):
    doc = {"schema": "stablecm/1", "ring": "q; vars x,y", "ideals": {"I": ["x", "y"], "q": ["x^3", "y"]}}
    code, text = call(["link"], doc, tmp_path)
    res = json.loads(text)["result"]
    assert code == 0 and res["J"] == ["x^2", "y"] and res["linked"]


def test_failed_check_exits_2(tmp_path):
    # x: A -> A is not injective onto a sequence ending in A/(y)
    doc = {"schema": "stablecm/1", "ring": "catalog:quadric2",
           "modules": {"F": {"free": [0]}, "G": {"free": [0]}, "C": {"cyclic": ["y"]}},
           "params": {"M1": "F", "M2": "G", "M3": "C", "alpha": [["0"]], "beta": [["1"]]}}
    code, text = call(["verify-ses"], doc, tmp_path)
    rep = json.loads(text)
    assert code == 2 and rep["status"] == "check-failed" and rep["failures"]


def test_input_errors_exit_1(tmp_path):
    code, text = call(["theta"], {"schema": "stablecm/1", "ring": "p=6; vars x", "params": {"module": "A"}}, tmp_path)
    rep = json.loads(text)
    assert code == 1 and rep["error"] == "NonPrime"
    code, _ = call(["theta"])
    assert code == 1
    code, _ = call(["theta"], {"schema": "other/9"}, tmp_path)
    assert code == 1


def test_table_output():
    code, text = call(["etriangle", "--module", "x2/cyclic_x", "--table"])
    assert code == 0 and any(line.startswith("result.formula") for line in text.splitlines())


def test_catalog_listing():
    code, text = call(["catalog"])
    res = json.loads(text)["result"]
    assert code == 0 and "quadric2" in res["rings"] and "ade:E8:1" in res["ade"]["E8"]


@pytest.mark.parametrize("argv", [["verify-axioms", "--module", "quadric2/spinor_sum", "--seed", "11"],
                                  ["theta", "--module", "quadric2/power2", "--seed", "3"]])
def test_repeated_runs_are_byte_identical(argv):
    cmd = [sys.executable, "-m", "stablecm"] + argv
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
