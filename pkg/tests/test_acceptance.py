"""Acceptance suite: twelve end-to-end criteria, one pass/fail line each.

Run ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to see the summary lines.
"""

from __future__ import annotations

import subprocess
import sys
from typing import Callable, List, Tuple

import pytest

from stablecm import catalog
from stablecm.etriangle import (check_e1_superadditive, check_mod_superficial, check_pretriangle,
                                check_triangle, e_triangle, e_triangle_from_cover, e_triangle_oracle,
                                make_xi, seeded_witnesses, syzygy_ses)
from stablecm.gmodule import (cyclic_module, direct_power, free_module, is_stably_iso,
                              power_quotient, residue_field, zero_module)
from stablecm.hilbert import hilbert_function_H, multiplicity
from stablecm.mcm_linkage import (backend_agreement, check_approx_triangle, check_horizontal,
                                  check_theta_bound, colon_ideal, dim1_linkage_window, filtration_ses,
                                  growth_experiment, horizontal_link_partner, ideals_equal, link_ideal,
                                  mcm_approximation, theta)
from stablecm.mf import (TruncatedMF, ade_catalog, catalog_entry, mf_validate, trunc_e_triangle,
                         trunc_e_triangle_from_cover, trunc_e_triangle_oracle)
from stablecm.polyalg import parse_poly, parse_ring

Result = Tuple[bool, str]


def _quad():
    return catalog.ring("quadric2")


def _stably(M, N) -> str:
    return is_stably_iso(M, N).verdict


# 1 ---------------------------------------------------------------------------

KNOWN = {"x2/cyclic_x": 1, "quadric2/spinor": 2, "x2/free1": 0, "x2/free2": 0, "quadric2/free1": 0,
         "quadric2/free2": 0, "quadric3/free1": 0}


def triple_agreement() -> Result:
    rows = []
    for name in catalog.MCM_CATALOG:
        M = catalog.module(name)
        rows.append((name, e_triangle(M), e_triangle_oracle(M), e_triangle_from_cover(syzygy_ses(M))))
    for n in (1, 2, 3, 4):
        for e in ade_catalog("A", n):
            M = TruncatedMF(e)
            rows.append(("ade:" + e.label, trunc_e_triangle(M), trunc_e_triangle_oracle(M),
                         trunc_e_triangle_from_cover(M)))
    agree = all(a == b == c for _, a, b, c in rows)
    known = all(dict((r[0], r[1]) for r in rows)[k] == v for k, v in KNOWN.items())
    return agree and known and len(rows) >= 10, f"{len(rows)} modules, known constants {'match' if known else 'differ'}"


# 2, 3 ------------------------------------------------------------------------


def _suite():
    A = _quad()
    mods = [catalog.module("quadric2/spinor"), catalog.module("quadric2/spinor_other"), free_module(A, 1)]
    return seeded_witnesses(mods, seed=2024, cones=8)


def axiom_suite() -> Result:
    xi = make_xi("ET")
    pool = _suite()
    failures = 0
    tri = 0
    for kind, w in pool:
        rep = check_pretriangle(xi, w) if kind == "ses" else check_triangle(xi, w)
        if kind == "tri":
            tri += 1
            failures += not all(rep.checks[k] for k in ("4a", "4b", "4c"))
        failures += not rep.passed
    return failures == 0 and len(pool) >= 20 and tri > 0, f"{len(pool)} witnesses ({tri} cones), {failures} failures"


def sequence_inequalities() -> Result:
    seqs = [w for k, w in _suite() if k == "ses"]
    seqs.append(syzygy_ses(catalog.module("x2/cyclic_x")))
    xi = make_xi("ET")
    bad = 0
    for ses in seqs:
        bad += not check_e1_superadditive(ses).passed
        bad += not check_pretriangle(xi, ses).checks["subadditive"]
    return bad == 0, f"{len(seqs)} certified sequences, {bad} violations"


# 4 ---------------------------------------------------------------------------


def hyperplane_sections() -> Result:
    S = catalog.module("quadric2/spinor")
    forms = set()
    ok = True
    for seed in range(12):
        rep = check_mod_superficial(S, seed=seed)
        x = rep.notes[-1]
        if x in forms:
            continue
        forms.add(x)
        ok &= rep.values["eT_A(M)"] == 2 and rep.values["eT_B(N)"] == 2
        ok &= rep.values["e0(M)"] == rep.values["e0(M/x)"] and rep.values["e0(A)"] == rep.values["e0(A/x)"]
        if len(forms) == 3:
            break
    return ok and len(forms) >= 3, f"{len(forms)} superficial forms, e^T 2 on both sides"


# 5 ---------------------------------------------------------------------------


def freeness() -> Result:
    ok = True
    for name in catalog.MCM_CATALOG:
        M = catalog.module(name)
        v = e_triangle(M)
        free = _stably(M, zero_module(M.ring)) == "yes"
        ok &= (v == 0) == free
        if not free:
            ok &= v >= multiplicity(syzygy_ses(M).M1)
    return ok, f"{len(catalog.MCM_CATALOG)} modules checked"


# 6 ---------------------------------------------------------------------------


def approximation_triangles() -> Result:
    A = _quad()
    Xk = mcm_approximation(residue_field(A)).X
    ok = True
    notes = []
    for n in (1, 2, 3):
        rep = check_approx_triangle(filtration_ses(free_module(A, 1), n))
        H = hilbert_function_H(free_module(A, 1), n)
        ok &= rep.passed and H == 2 * n + 1
        ok &= _stably(rep.X_left, direct_power(Xk, H)) == "yes"
        notes.append(f"n={n}:H={H}")
    return ok, ", ".join(notes)


# 7 ---------------------------------------------------------------------------


def growth() -> Result:
    rep = growth_experiment(free_module(_quad(), 1), n_max=4)
    b = rep["bound"]
    increasing = all(x < y for x, y in zip(b, b[1:]))
    R = catalog.ring("poly3")
    zeros = [theta(power_quotient(R, n)) for n in (1, 2, 3, 4)]
    return increasing and b[3] > b[0] and zeros == [0, 0, 0, 0], f"bound {b}, regular {zeros}"


# 8 ---------------------------------------------------------------------------


def theta_bound() -> Result:
    A = _quad()
    rows = []
    for N in (residue_field(A), power_quotient(A, 2), power_quotient(A, 3)):
        rep = check_theta_bound(N)
        rows.append((rep.theta_A, rep.e0, rep.theta_B_k, rep.holds))
    ok = all(t <= e * b and h for t, e, b, h in rows)
    return ok, "; ".join(f"{t} <= {e}*{b}" for t, e, b, _ in rows)


# 9 ---------------------------------------------------------------------------


def linkage() -> Result:
    R = catalog.ring("poly2")
    P = lambda *g: [parse_poly(s, R.S) for s in g]
    J, W = link_ideal(R, P("x", "y"), P("x^3", "y"))
    ok = ideals_equal(R, J, P("x^2", "y")) and W.linked and ideals_equal(R, W.back, P("x", "y"))
    B = catalog.ring("cubic1")
    partner = horizontal_link_partner(cyclic_module(B, ["x"]))
    ok &= _stably(partner, cyclic_module(B, ["x^2"])) == "yes"
    ok &= check_horizontal(cyclic_module(B, ["x"]), partner).verdict == "yes"
    pairs = [(("x", "y"), ("x^3", "y")), (("x", "y"), ("x", "y^2")), (("x^2", "y"), ("x^4", "y^3")),
             (("x", "y^2"), ("x^2", "y^2")), (("x^2", "x*y", "y^2"), ("x^2", "y^2"))]
    count = 0
    for I, q in pairs:
        J, W = link_ideal(R, P(*I), P(*q))
        if W.linked and W.proper:
            count += 1
            ok &= ideals_equal(R, colon_ideal(R, P(*q), J), P(*I))
    return ok and count >= 4, f"J = (x^2, y); {count} double links return the original ideal"


# 10 --------------------------------------------------------------------------


def dim1_window() -> Result:
    S = parse_ring("p=5; vars x,y")
    y = parse_poly("y", S)
    notes = []
    ok = True
    for f in ("x^2", "x^2 + y^3"):
        rep = dim1_linkage_window(parse_poly(f, S), y, window=(2, 8))
        ok &= rep.holds and rep.onset is not None
        notes.append(f"{f}: onset {rep.onset}")
    return ok, ", ".join(notes)


# 11 --------------------------------------------------------------------------


def backend_agreement_all() -> Result:
    S = parse_ring("p=5; vars x,y")
    P = lambda s: parse_poly(s, S)
    mfs = [catalog_entry("ade:A1:j=1"), catalog_entry("ade:Q3"), catalog_entry("ade:Q4"),
           mf_validate([["x"]], [["x"]], P("x^2"))]
    colons = {3: [([], [P("x")]), ([P("y^2")], [P("y")]), ([P("x*y")], [P("y")])]}
    reps = [backend_agreement(m, (0, 6), colons.get(i, ())) for i, m in enumerate(mfs)]
    n = sum(len(v) for r in reps for v in r["samples"].values())
    return all(r["agree"] for r in reps), f"{n} shared samples over n in [0, 6]"


# 12 --------------------------------------------------------------------------

CLI_RUNS = [
    ["etriangle", "--module", "quadric2/spinor"],
    ["verify-axioms", "--module", "quadric2/spinor_sum", "--seed", "7"],
    ["theta", "--module", "quadric2/residue", "--seed", "3"],
    ["growth", "--module", "quadric2/free1", "--seed", "1"],
    ["catalog", "--module", "ade:D4:a1"],
]


def determinism() -> Result:
    same = 0
    for argv in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "stablecm"] + argv, capture_output=True).stdout
                for _ in range(2)]
        same += outs[0] == outs[1] and bool(outs[0])
    return same == len(CLI_RUNS), f"{same}/{len(CLI_RUNS)} commands byte-identical"


CRITERIA: List[Tuple[str, Callable[[], Result]]] = [
    ("oracle triple agreement", triple_agreement),
    ("triangle axiom suite", axiom_suite),
    ("e1 super-additivity and e^T sub-additivity", sequence_inequalities),
    ("hyperplane sections preserve e^T", hyperplane_sections),
    ("freeness characterization", freeness),
    ("approximation triangles of filtrations", approximation_triangles),
    ("growth mechanism", growth),
    ("theta bound", theta_bound),
    ("linkage", linkage),
    ("dimension-one colon window", dim1_window),
    ("backend agreement", backend_agreement_all),
    ("CLI determinism", determinism),
]


@pytest.mark.parametrize("index", range(len(CRITERIA)), ids=[f"c{i + 1:02d}" for i in range(len(CRITERIA))])
def test_criterion(index, capsys):
    label, fn = CRITERIA[index]
    ok, detail = fn()
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {index + 1:2d}. {label}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, (label, fn) in enumerate(CRITERIA):
        ok, detail = fn()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {i + 1:2d}. {label}: {detail}")
    sys.exit(1 if failed else 0)
