from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablecm import catalog
from stablecm.errors import NonGorensteinRing, RingMismatch
from stablecm.gmodule import (ModuleMap, ModulePresentation, QuotientRing, cone, cosyzygy_module,
                              cyclic_module, depth, direct_power, direct_sum, dual, ext_dual,
                              find_isomorphism, free_module, hom_space, identity_map, is_mcm,
                              is_stably_free, is_stably_iso, minimalize, residue_field, shift,
                              strip_free, syzygy_module, transpose, zero_map, zero_module)
from stablecm.hilbert import hilbert_function_H
from stablecm.polyalg import parse_ring

X2 = catalog.ring("x2")
QUAD = catalog.ring("quadric2")
QUAD3 = catalog.ring("quadric3")
PHI = [["x", "y + 2*z"], ["y - 2*z", "-x"]]


def stably(M, N) -> str:
    return is_stably_iso(M, N).verdict


def test_gorenstein_detection():
    assert X2.gorenstein.kind == "hypersurface"
    assert catalog.ring("poly3").gorenstein.kind == "regular"
    S = parse_ring("p=5; vars x,y")
    with pytest.raises(NonGorensteinRing):
        QuotientRing(S, ["x^2", "x*y", "y^2"]).require_gorenstein()


def test_minimalize():
    M = ModulePresentation.from_matrix(X2, [["1"], ["-x"]], [1, 0])
    Mm = minimalize(M)
    assert Mm.rank == 1 and len(Mm.relations) == 0
    N = cyclic_module(X2, ["x"])
    assert minimalize(N).rank == 1 and len(minimalize(N).relations) == 1
    P = ModulePresentation.from_matrix(X2, [["1", "0"], ["-1", "x"]])
    Pm = minimalize(P)
    assert Pm.rank == 1 and stably(Pm, N) == "yes"


def test_syzygies_and_cosyzygies():
    N = cyclic_module(X2, ["x"])
    assert stably(syzygy_module(N), N) == "yes"
    assert syzygy_module(free_module(X2, 3)).rank == 0
    R = catalog.ring("poly2")
    Om = minimalize(syzygy_module(residue_field(R)))
    assert Om.rank == 2 and len(Om.relations) == 1
    S = catalog.module("quadric2/spinor")
    assert stably(cosyzygy_module(S), S) == "yes"
    assert minimalize(cosyzygy_module(free_module(QUAD, 2))).rank == 0
    assert stably(syzygy_module(cosyzygy_module(S)), S) == "yes"


def test_duals_and_transposes():
    N = cyclic_module(X2, ["x"])
    assert minimalize(dual(residue_field(QUAD))).rank == 0
    assert stably(dual(N), N) == "yes"
    assert dual(free_module(QUAD, 2)).rank == 2
    assert stably(transpose(N), N) == "yes"
    assert minimalize(transpose(free_module(QUAD, 2))).rank == 0
    S = catalog.module("quadric2/spinor")
    phiT = ModulePresentation.from_matrix(QUAD, [[PHI[j][i] for j in range(2)] for i in range(2)])
    assert stably(transpose(S), phiT) == "yes"


def test_ext_duals():
    k = residue_field(QUAD)
    E = minimalize(ext_dual(k, 2))
    assert E.rank == 1 and stably(E, shift(k, E.shifts[0])) == "yes"
    S = catalog.module("quadric2/spinor")
    assert stably(ext_dual(S, 0), dual(S)) == "yes"
    N = cyclic_module(QUAD3, ["x", "y"])
    E = ext_dual(N, 2)
    assert depth(E) == 1
    back = minimalize(ext_dual(E, 2))
    assert find_isomorphism(back, N, N.shifts[0] - back.shifts[0], 200, 0) is not None


def test_direct_sums():
    S = catalog.module("quadric2/spinor")
    assert minimalize(direct_sum(S, zero_module(QUAD))).rank == S.rank
    T = catalog.module("quadric2/free2")
    assert minimalize(direct_sum(S, T)).rank == minimalize(S).rank + minimalize(T).rank
    for n in range(6):
        assert hilbert_function_H(direct_sum(S, T), n) == hilbert_function_H(S, n) + hilbert_function_H(T, n)
    with pytest.raises(RingMismatch):
        direct_sum(S, free_module(X2, 1))


def test_cones():
    S = catalog.module("quadric2/spinor")
    assert is_stably_free(cone(identity_map(S)).C)
    T = catalog.module("quadric2/spinor_other")
    c = cone(zero_map(S, T)).C
    assert stably(c, direct_sum(T, cosyzygy_module(S))) == "yes"


def test_stable_isomorphism():
    S = catalog.module("quadric2/spinor")
    assert stably(direct_sum(S, free_module(QUAD, 3)), S) == "yes"
    assert stably(cyclic_module(X2, ["x"]), residue_field(X2)) == "no"
    assert stably(syzygy_module(S, 2), S) == "yes"
    stripped, r = strip_free(direct_sum(S, free_module(QUAD, [0, 1])))
    assert r == 2 and stripped.rank == 2


def test_mcm_and_depth():
    assert is_mcm(catalog.module("quadric2/spinor"))
    assert not is_mcm(residue_field(QUAD)) and depth(residue_field(QUAD)) == 0
    assert is_mcm(free_module(QUAD, 1))
    assert depth(cyclic_module(QUAD3, ["x", "y"])) == 1


# properties


@given(n=st.integers(0, 3), m=st.integers(0, 2))
def test_free_summands_are_stripped(n, m):
    S = catalog.module("quadric2/spinor")
    M = direct_sum(direct_power(S, m), free_module(QUAD, list(range(n))))
    stripped, r = strip_free(M)
    assert r == n and minimalize(stripped).rank == 2 * m


@given(seed=st.integers(0, 10 ** 6))
def test_random_maps_are_well_defined(seed):
    import random

    rng = random.Random(seed)
    S, T = catalog.module("quadric2/spinor"), catalog.module("quadric2/spinor_other")
    basis = hom_space(S, T, 1)
    imgs = [{} for _ in range(S.rank)]
    from stablecm.groebner import vec_add, vec_scale

    for mp in basis:
        c = rng.randrange(5)
        for i in range(S.rank):
            imgs[i] = vec_add(imgs[i], vec_scale(mp[i], c, QUAD.field), QUAD.field)
    f = ModuleMap(S, shift(T, -1), imgs)
    assert f.is_well_defined()
