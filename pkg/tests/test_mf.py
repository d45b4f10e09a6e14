from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablecm import catalog
from stablecm.errors import NotAFactorization, StableCMError, UnsupportedCatalogEntry
from stablecm.etriangle import e_triangle
from stablecm.gmodule import QuotientRing, cyclic_module, is_mcm, is_stably_iso
from stablecm.mcm_linkage import backend_agreement
from stablecm.mf import (TruncatedAlgebra, TruncatedMF, ade_catalog, catalog_entry, mf_iso, mf_module,
                         mf_validate, trunc_e0_syzygy, trunc_e1_ring, trunc_e_triangle,
                         trunc_e_triangle_from_cover, trunc_e_triangle_oracle, trunc_samples)
from stablecm.polyalg import parse_poly, parse_ring

F2 = parse_ring("p=5; vars x,y")
F3 = parse_ring("p=5; vars x,y,z")


def P(s, R=F2):
    return parse_poly(s, R)


def test_validation():
    mf_validate([["x"]], [["x"]], P("x^2"))
    for n in (1, 2, 3, 4):
        for j in range(1, n + 1):
            mf_validate([["x", f"y^{j}"], [f"y^{n + 1 - j}", "-x"]],
                        [["x", f"y^{j}"], [f"y^{n + 1 - j}", "-x"]], P(f"x^2 + y^{n + 1}"))
    with pytest.raises(NotAFactorization):
        mf_validate([["x"]], [["y"]], P("x^2"))


def test_modules_from_factorizations():
    M, Om = mf_module(mf_validate([["x"]], [["x"]], P("x^2")))
    A = M.ring
    assert is_stably_iso(M, cyclic_module(A, ["x"])).verdict == "yes"
    assert is_stably_iso(Om, M).verdict == "yes"
    q = mf_validate([["x", "y + 2*z"], ["y - 2*z", "-x"]], [["x", "y + 2*z"], ["y - 2*z", "-x"]],
                    P("x^2 + y^2 + z^2", F3))
    S, _ = mf_module(q)
    assert S.rank == 2 and is_mcm(S) and e_triangle(S) == 2
    with pytest.raises(StableCMError):
        mf_module(mf_validate([["x^2 + y^2 + z^2"]], [["1"]], P("x^2 + y^2 + z^2", F3)))


def test_catalog_entries():
    a1 = [e.label for e in ade_catalog("A", 1)]
    assert "A1:+" in a1 and "A1:-" in a1
    plus = catalog_entry("ade:A1:+")
    assert len(plus.phi) == 1
    a3 = {e.label: e for e in ade_catalog("A", 3)}
    assert mf_iso(a3["A3:j=1"], a3["A3:j=3"])
    assert not mf_iso(a3["A3:j=1"], a3["A3:j=2"])
    with pytest.raises(UnsupportedCatalogEntry):
        catalog_entry("ade:Z9")


def test_truncated_samples():
    f = P("x^2 + y^3")
    assert [trunc_samples("hilbert_samuel", n, f) for n in range(1, 6)] == [2 * n + 1 for n in range(1, 6)]
    assert trunc_e1_ring(f) == 1
    mf = catalog_entry("ade:A2:j=1")
    tors = [trunc_samples("tor_length", n, mf.f, mf) for n in range(2, 7)]
    assert len(set(tors)) == 1
    g = P("x^2")
    for n in range(1, 6):
        # (m^{n+1} : x) = (x, y^n), colength n
        assert trunc_samples("colon", n, g, by=[P("x")]) == n


def test_truncated_algebra_colon():
    T = TruncatedAlgebra(P("x^2"), 8)
    gens = [P(f"x^{i}*y^{4 - i}") for i in range(5)]
    C = T.colon(gens, [P("x")])
    ref = T.ideal([P("x"), P("y^3"), P("x^2")])
    assert C.rank == ref.rank


def test_triangle_values_truncated():
    for kind, n in (("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4), ("E6", 0), ("E7", 0), ("E8", 0)):
        for e in ade_catalog(kind, n):
            M = TruncatedMF(e)
            v = trunc_e_triangle(M)
            assert v == trunc_e_triangle_oracle(M) == trunc_e_triangle_from_cover(M)
            assert v >= trunc_e0_syzygy(M) > 0


def test_backend_agreement_quadrics():
    for ident in ("ade:A1:j=1", "ade:Q3", "ade:Q4"):
        rep = backend_agreement(catalog_entry(ident), (0, 4))
        assert rep["agree"], rep
    x2 = mf_validate([["x"]], [["x"]], P("x^2"))
    rep = backend_agreement(x2, (1, 5), colons=[([], [P("x")]), ([P("y^2")], [P("y")])])
    assert rep["agree"], rep


@given(j=st.integers(1, 4), n=st.integers(0, 5))
def test_backend_agreement_random(j, n):
    # odd j: a 2x2 factorization of x^2 + y^2; even j: the linear factors (x + 2y)(x - 2y) over F5
    f = P("x^2 + y^2")
    phi = [["x", "y"], ["-y", "x"]] if j % 2 else [["x + 2*y"]]
    psi = [["x", "-y"], ["y", "x"]] if j % 2 else [["x - 2*y"]]
    mf = mf_validate(phi, psi, f)
    rep = backend_agreement(mf, (n, n), colons=[([P("y")], [P("x")])])
    assert rep["agree"], rep


@given(seed=st.integers(0, 3))
def test_truncation_order_is_irrelevant(seed):
    e = ade_catalog("A", 3)[seed % 3]
    base = trunc_e_triangle(TruncatedMF(e))
    assert trunc_e_triangle(TruncatedMF(e, 14 + seed)) == base


def test_catalog_module_ring_is_gorenstein():
    A = QuotientRing(F3, ["x^2 + y^2 + z^2"])
    assert A.gorenstein.kind == "hypersurface"
    assert catalog.ring("quadric2").dim == 2
