from __future__ import annotations

import itertools

from hypothesis import given
from hypothesis import strategies as st

from stablecm import catalog
from stablecm.gmodule import QuotientRing, cyclic_module, direct_sum, free_module, residue_field, zero_module
from stablecm.hilbert import (e1, hilbert_coefficients, hilbert_function_H, hilbert_samuel,
                              hilbert_samuel_linear, hilbert_series, multiplicity)
from stablecm.polyalg import parse_poly, parse_ring

X2 = catalog.ring("x2")
QUAD = catalog.ring("quadric2")


def _monomials(nv, d):
    for c in itertools.combinations_with_replacement(range(nv), d):
        e = [0] * nv
        for i in c:
            e[i] += 1
        yield tuple(e)


def _rank_mod_p(rows, p):
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        piv = rows.pop()
        if not piv:
            continue
        k = min(piv)
        inv = pow(piv[k], -1, p)
        rank += 1
        nxt = []
        for r in rows:
            if k in r:
                c = r[k] * inv
                for kk, v in piv.items():
                    r[kk] = (r.get(kk, 0) - c * v) % p
                r = {kk: v for kk, v in r.items() if v}
            if r:
                nxt.append(r)
        rows = nxt
    return rank


def brute_hilbert(polys, nv, d, p=5):
    """dim_k (S/I)_d by spanning I_d with monomial multiples of the generators."""
    mons = list(_monomials(nv, d))
    idx = {m: i for i, m in enumerate(mons)}
    rows = []
    for g in polys:
        dg = g.degree()
        if dg > d:
            continue
        for m in _monomials(nv, d - dg):
            rows.append({idx[tuple(a + b for a, b in zip(e, m))]: c % p for e, c in g.terms.items()})
    return len(mons) - _rank_mod_p(rows, p)


def test_series_of_rings():
    assert str(hilbert_series(free_module(X2, 1))) == "(1 + z)/(1 - z)^1"
    hs = hilbert_series(free_module(QUAD, 1))
    assert str(hs) == "(1 + z)/(1 - z)^2" and hs.dim == 2
    assert [hilbert_function_H(free_module(QUAD, 1), n) for n in range(5)] == [1, 3, 5, 7, 9]
    assert str(hilbert_series(free_module(X2, [1]))) == "(z + z^2)/(1 - z)^1"


def test_samuel_function():
    assert hilbert_samuel(free_module(X2, 1), 3) == 7
    assert [hilbert_samuel(free_module(QUAD, 1), n) for n in range(6)] == [(n + 1) ** 2 for n in range(6)]
    assert all(hilbert_samuel(zero_module(QUAD), n) == 0 for n in range(4))


def test_coefficients():
    assert hilbert_coefficients(free_module(X2, 1)).coefficients == (2, 1)
    assert hilbert_coefficients(free_module(QUAD, 1)).coefficients == (2, 1, 0)
    S = catalog.module("quadric2/spinor")
    assert hilbert_coefficients(S).coefficients[:2] == (2, 0)
    assert [hilbert_samuel(S, n) for n in range(5)] == [(n + 1) * (n + 2) for n in range(5)]
    assert multiplicity(S) == 2 and e1(S) == 0


def test_first_differences():
    k = residue_field(QUAD)
    assert hilbert_function_H(k, 0) == 1 and all(hilbert_function_H(k, n) == 0 for n in range(1, 5))


def test_ring_values_against_brute_force():
    S = parse_ring("p=5; vars x,y,z")
    f = parse_poly("x^2 + y^2 + z^2", S)
    A = free_module(QUAD, 1)
    for d in range(7):
        assert hilbert_function_H(A, d) == brute_hilbert([f], 3, d)


# properties

forms = st.lists(st.tuples(st.integers(1, 3), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 4)),
                                                       min_size=1, max_size=3)), min_size=1, max_size=3)


def _ideal(shape, S):
    out = []
    for d, tl in shape:
        g = S.zero()
        for i, j, c in tl:
            i, j = min(i, d), min(j, d - min(i, d))
            g = g + S.const(c) * S.monomial((i, j, d - i - j))
        if not g.is_zero():
            out.append(g)
    return out


@given(shape=forms)
def test_cyclic_quotients_match_brute_force(shape):
    S = QUAD.S
    gens = _ideal(shape, S)
    if not gens:
        return
    A = QuotientRing(S, [])
    M = cyclic_module(A, gens)
    for d in range(5):
        assert hilbert_function_H(M, d) == brute_hilbert(gens, 3, d)


@given(shape=forms, n=st.integers(0, 5))
def test_two_samuel_routes_agree(shape, n):
    gens = _ideal(shape, QUAD.S)
    M = cyclic_module(QUAD, gens) if gens else free_module(QUAD, 1)
    assert hilbert_samuel(M, n) == hilbert_samuel_linear(M, n)
    assert hilbert_function_H(M, n) >= 0


@given(a=st.integers(0, 2), b=st.integers(0, 2), n=st.integers(0, 5))
def test_samuel_is_additive(a, b, n):
    S = catalog.module("quadric2/spinor")
    M = direct_sum(*([S] * a + [free_module(QUAD, 1)] * b)) if a + b else zero_module(QUAD)
    assert hilbert_samuel(M, n) == a * hilbert_samuel(S, n) + b * (n + 1) ** 2
