from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablecm import catalog
from stablecm.errors import ParameterPropertyFails, QNotCI
from stablecm.etriangle import e_triangle, e_triangle_oracle, split_ses
from stablecm.gmodule import (QuotientRing, cosyzygy_module, cyclic_module, direct_power, direct_sum,
                              free_module, is_mcm, is_stably_iso, minimalize, power_quotient,
                              residue_field, syzygy_module)
from stablecm.hilbert import hilbert_function_H, hilbert_samuel, multiplicity
from stablecm.mcm_linkage import (check_approx_triangle, check_horizontal, check_theta_bound, codimension,
                                  colon_ideal, dim1_linkage_window, filtration_ses, fingerprint_experiment,
                                  growth_experiment, horizontal_link_partner, ideal_module_consistency,
                                  ideals_equal, link_ideal, mcm_approximation, theta, theta_report)
from stablecm.polyalg import parse_poly, parse_ring

QUAD = catalog.ring("quadric2")
QUAD3 = catalog.ring("quadric3")
Q2 = catalog.ring("poly2")


def stably(M, N) -> str:
    return is_stably_iso(M, N).verdict


def polys(A, *gens):
    return [parse_poly(g, A.S) for g in gens]


def test_approximation_of_hyperplane_is_free():
    N = cyclic_module(QUAD, ["x - y"])
    W = mcm_approximation(N)
    assert W.certified and theta(N) == 0


def test_approximation_of_residue_field():
    k = residue_field(QUAD)
    W = mcm_approximation(k)
    assert W.certified and W.codim == 2
    rep = theta_report(k)
    assert rep["theta"] == rep["oracle"] == 4
    assert rep["theta"] >= rep["e0_syzygy"] > 0
    assert rep["well_defined"] == "yes"
    assert stably(W.X, direct_power(catalog.module("quadric2/spinor"), 2)) == "yes"


def test_approximation_of_mcm_module():
    S = catalog.module("quadric2/spinor")
    W = mcm_approximation(S)
    assert W.codim == 0 and minimalize(W.Y).rank == 0 and stably(W.X, S) == "yes"


def test_theta_values():
    assert theta(free_module(QUAD, 2)) == 0
    assert theta(residue_field(Q2)) == 0
    t2 = theta(power_quotient(QUAD, 2))
    assert t2 == 8 == e_triangle_oracle(mcm_approximation(power_quotient(QUAD, 2)).X)
    assert t2 <= multiplicity(power_quotient(QUAD, 2)) * theta(residue_field(QUAD))


def test_perturbed_resolution_gives_same_class():
    k = residue_field(QUAD)
    a, b = mcm_approximation(k), mcm_approximation(k, perturb=7)
    assert b.certified and stably(a.X, b.X) == "yes"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_filtration_triangles(n):
    rep = check_approx_triangle(filtration_ses(free_module(QUAD, 1), n))
    assert rep.passed, rep.as_dict()
    Xk = mcm_approximation(residue_field(QUAD)).X
    H = hilbert_function_H(free_module(QUAD, 1), n)
    assert H == 2 * n + 1
    assert stably(rep.X_left, direct_power(Xk, H)) == "yes"


def test_split_sequence_gives_split_triangle():
    k, P2 = residue_field(QUAD), power_quotient(QUAD, 2)
    rep = check_approx_triangle(split_ses(k, P2))
    assert rep.passed
    assert stably(rep.X_mid, direct_sum(rep.X_left, rep.X_right)) == "yes"


def test_ext_dual_codim_two_on_threefold():
    N = cyclic_module(QUAD3, ["x", "y", "z + 2*w"])
    assert codimension(N) == 2
    W = mcm_approximation(N)
    assert W.certified and is_mcm(W.X) and theta(N) == 4


def test_ideal_linkage():
    I, q = polys(Q2, "x", "y"), polys(Q2, "x^3", "y")
    J, W = link_ideal(Q2, I, q)
    assert ideals_equal(Q2, J, polys(Q2, "x^2", "y"))
    assert W.linked and W.proper and ideals_equal(Q2, W.back, I)
    J, W = link_ideal(Q2, I, polys(Q2, "x", "y^2"))
    assert ideals_equal(Q2, J, I)
    J, W = link_ideal(Q2, q, q)
    assert not W.proper and W.flags == ["NotAProperLink"]
    with pytest.raises(QNotCI):
        link_ideal(Q2, I, polys(Q2, "x^3", "x*y"))


def test_horizontal_linkage():
    B = catalog.ring("cubic1")
    M = cyclic_module(B, ["x"])
    partner = horizontal_link_partner(M)
    assert stably(partner, cyclic_module(B, ["x^2"])) == "yes"
    assert check_horizontal(M, partner).verdict == "yes"
    assert minimalize(horizontal_link_partner(free_module(B, 1))).rank == 0


def test_artinian_reduction_involution():
    B = QuotientRing(QUAD.S, list(QUAD.relations) + ["y", "z"])
    k = residue_field(B)
    p = horizontal_link_partner(k)
    assert stably(horizontal_link_partner(p), k) == "yes"


def test_ideal_and_module_linkage_agree():
    for I, q in ((("x", "y"), ("x^3", "y")), (("x", "y"), ("x^2", "y^2")), (("x^2", "y"), ("x^4", "y^3"))):
        rep = ideal_module_consistency(Q2, polys(Q2, *I), polys(Q2, *q))
        assert rep["linkage"] and rep["partner_vs_colon"] == "yes"


def test_dim1_window():
    S = parse_ring("p=5; vars x,y")
    rep = dim1_linkage_window(parse_poly("x^2", S), parse_poly("y", S), window=(2, 8))
    assert rep.holds and rep.onset == 2 and rep.s == 1
    rep = dim1_linkage_window(parse_poly("x^2 + y^3", S), parse_poly("y", S), window=(2, 8))
    assert rep.holds and rep.onset is not None
    with pytest.raises(ParameterPropertyFails):
        dim1_linkage_window(parse_poly("x^2", S), parse_poly("x", S), window=(2, 8))


def test_growth():
    rep = growth_experiment(free_module(QUAD, 1), n_max=3)
    assert rep["H"] == [3, 5, 7] and rep["bound"] == [12, 20, 28] and rep["checks"]["bound_increasing"]
    rep2 = growth_experiment(catalog.module("quadric2/free2"), n_max=3)
    assert rep2["bound"] == [2 * b for b in rep["bound"]]
    reg = growth_experiment(ring=catalog.ring("poly3"), n_max=3)
    assert reg["bound"] == [0, 0, 0] and reg["checks"]["all_zero"]


def test_theta_bound():
    for N in (residue_field(QUAD), power_quotient(QUAD, 2), power_quotient(QUAD, 3)):
        rep = check_theta_bound(N)
        assert rep.holds and rep.theta_A <= rep.e0 * rep.theta_B_k


def test_fingerprints():
    ideals = [polys(QUAD3, "x", "y"), polys(QUAD3, "x", "z"), polys(QUAD3, "x", "y", "z + 2*w")]
    rep = fingerprint_experiment(QUAD3, ideals, 2)
    thetas = [e["theta"] for e in rep["entries"]]
    assert thetas == [0, 0, 4]
    assert all(e["within_bound"] for e in rep["entries"])
    assert fingerprint_experiment(QUAD3, [], 1)["entries"] == []


# properties


@given(n=st.integers(1, 3))
def test_colon_of_power(n):
    A = QuotientRing(parse_ring("p=5; vars x,y"), ["x^2"])
    gens = colon_ideal(A, [A.S.monomial((i, n + 1 - i)) for i in range(n + 2)], polys(A, "x"))
    assert ideals_equal(A, gens, polys(A, "x", f"y^{n}"))


@given(a=st.integers(1, 3), b=st.integers(1, 3))
def test_links_are_involutive(a, b):
    I = polys(Q2, f"x^{a}", f"y^{b}")
    q = polys(Q2, f"x^{a + 1}", f"y^{b + 2}")
    J, W = link_ideal(Q2, I, q)
    assert W.linked and ideals_equal(Q2, colon_ideal(Q2, q, J), I)


@given(n=st.integers(1, 3))
def test_theta_is_additive(n):
    k = residue_field(QUAD)
    assert theta(direct_power(k, n)) == n * theta(k)


@given(seed=st.integers(0, 50))
def test_theta_independent_of_resolution(seed):
    N = power_quotient(QUAD, 2)
    assert stably(mcm_approximation(N).X, mcm_approximation(N, perturb=seed).X) == "yes"


@given(n=st.integers(0, 3))
def test_syzygy_shift_invariance(n):
    S = catalog.module("quadric2/spinor")
    X = syzygy_module(S, n) if n else S
    assert e_triangle(X) == e_triangle(cosyzygy_module(X)) == 2
    assert hilbert_samuel(X, 0) == 2
