from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablecm import catalog
from stablecm.errors import MalformedDescriptor, NotMCM
from stablecm.etriangle import (check_e1_superadditive, check_mod_superficial, check_pretriangle,
                                check_triangle, cover_ses, e_triangle, e_triangle_from_cover,
                                e_triangle_oracle, make_xi, seeded_witnesses, split_ses, syzygy_ses,
                                tor_length)
from stablecm.gmodule import (cyclic_module, direct_power, direct_sum, free_module, identity_map, cone,
                              residue_field)
from stablecm.hilbert import e1, hilbert_coefficients, multiplicity

X2 = catalog.ring("x2")
QUAD = catalog.ring("quadric2")


def spinor():
    return catalog.module("quadric2/spinor")


def test_formula_values():
    assert e_triangle(cyclic_module(X2, ["x"])) == 1
    assert e_triangle(spinor()) == 2
    assert e_triangle(free_module(QUAD, 3)) == 0


def test_formula_decomposition():
    # mu(M) e1(A) - e1(M) - e1(ΩM) on the spinor: 2*1 - 0 - 0
    S = spinor()
    assert e1(free_module(QUAD, 1)) == 1 and e1(S) == 0
    assert e_triangle(S) == 2 * 1 - e1(S) - e1(syzygy_ses(S).M1)


def test_covers():
    N = cyclic_module(X2, ["x"])
    assert e_triangle_from_cover(syzygy_ses(N)) == 1
    assert e_triangle_from_cover(cover_ses(N, [0])) == 1
    assert e_triangle_from_cover(syzygy_ses(free_module(X2, 2))) == 0


def test_tor_lengths():
    N = cyclic_module(X2, ["x"])
    assert tor_length(N, 3) == 1
    assert all(tor_length(free_module(QUAD, 2), n) == 0 for n in range(4))
    assert tor_length(spinor(), 0) == 2


def test_oracle():
    assert e_triangle_oracle(cyclic_module(X2, ["x"])) == 1
    assert e_triangle_oracle(spinor()) == 2
    assert e_triangle_oracle(free_module(QUAD, 1)) == 0


def test_oracle_rejects_non_mcm():
    with pytest.raises(NotMCM):
        e_triangle(residue_field(QUAD))


def test_descriptors():
    et, d0, d2 = make_xi("ET"), make_xi("D(ET,0)"), make_xi(("Derived", "ET", 2))
    for name in catalog.MCM_CATALOG[:8]:
        M = catalog.module(name)
        assert d0(M) == et(M)
    assert d2(spinor()) == et(spinor())
    assert make_xi("ET + D(ET,1)")(free_module(QUAD, 2)) == 0
    assert make_xi("3*ET")(spinor()) == 6
    with pytest.raises(MalformedDescriptor):
        make_xi("ET +")
    with pytest.raises(MalformedDescriptor):
        make_xi(("Derived", "ET", -1))


def test_pretriangle_checks():
    xi = make_xi("ET")
    S = spinor()
    rep = check_pretriangle(xi, split_ses(S, S))
    assert rep.passed and rep.values["M2"] == rep.values["M1"] + rep.values["M3"]
    rep = check_pretriangle(xi, syzygy_ses(S))
    assert rep.passed and rep.values["M2"] == 0


def test_triangle_checks():
    S = spinor()
    rep = check_triangle(make_xi("ET"), cone(identity_map(S)))
    assert rep.passed and rep.values["C"] == 0


def test_e1_superadditivity():
    N = cyclic_module(X2, ["x"])
    rep = check_e1_superadditive(syzygy_ses(N))
    assert rep.passed
    assert rep.values["e1(M2)"] == 1 and rep.values["e1(M1)"] == 0 and rep.values["e1(M3)"] == 0


def test_seeded_witnesses():
    mods = [spinor(), catalog.module("quadric2/spinor_other"), free_module(QUAD, 1)]
    pool = seeded_witnesses(mods, seed=3, cones=6)
    assert sum(1 for k, _ in pool if k == "tri") == 6
    xi = make_xi("ET")
    for kind, w in pool:
        rep = check_pretriangle(xi, w) if kind == "ses" else check_triangle(xi, w)
        assert rep.passed, rep.as_dict()
        if kind == "ses":
            assert check_e1_superadditive(w).passed


def test_hyperplane_section():
    rep = check_mod_superficial(spinor(), seed=0)
    assert rep.passed
    assert rep.values["eT_A(M)"] == rep.values["eT_B(N)"] == 2
    assert rep.values["e0(A)"] == rep.values["e0(A/x)"] == 2
    rep = check_mod_superficial(free_module(QUAD, 1), seed=1)
    assert rep.values["eT_A(M)"] == rep.values["eT_B(N)"] == 0


# properties


@given(a=st.integers(0, 3), b=st.integers(0, 3))
def test_additive_on_sums(a, b):
    parts = [spinor()] * a + [free_module(QUAD, 1)] * b
    if not parts:
        return
    assert e_triangle(direct_sum(*parts)) == 2 * a


@given(m=st.integers(1, 3))
def test_routes_agree_on_powers(m):
    M = direct_power(spinor(), m)
    v = e_triangle(M)
    assert v == e_triangle_oracle(M) == e_triangle_from_cover(syzygy_ses(M)) == 2 * m


@given(seed=st.integers(0, 10 ** 6))
def test_lower_bound_by_syzygy_multiplicity(seed):
    name = ["quadric2/spinor", "quadric2/spinor_sum", "x2/cyclic_x", "quadric3/spinor"][seed % 4]
    M = catalog.module(name)
    assert e_triangle(M) >= multiplicity(syzygy_ses(M).M1) > 0
    assert hilbert_coefficients(M).e(0) == multiplicity(M)
