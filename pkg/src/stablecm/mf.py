"""Matrix factorizations, the truncation backend and the ADE catalog.

For a hypersurface ``A = S/(f)`` a matrix factorization ``(phi, psi)`` with
``phi psi = psi phi = f I`` gives the 2-periodic resolution
``... -> A^r --psi--> A^r --phi--> A^r -> coker phi -> 0``.

When ``f`` is not homogeneous the graded machinery does not apply, and all
m-adic quantities are computed in the finite-dimensional algebra
``T_N = S/((f) + m^N)``.  Syzygies are never computed there: the
factorization already provides them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (NotAFactorization, StableCMError, TruncationTooSmall,
                     UnsupportedCatalogEntry)
from .gmodule import ModulePresentation, QuotientRing, infer_shifts
from .groebner import vec_from_polys
from .hilbert import coefficients_from_fit, fit_polynomial
from .linalg import Echelon
from .polyalg import BaseField, PolyRing, Polynomial, parse_poly

TRUNCATION_CAP = 64


def _poly_matrix(rows, S: PolyRing) -> Tuple[Tuple[Polynomial, ...], ...]:
    return tuple(tuple(parse_poly(x, S) if isinstance(x, str) else x for x in row) for row in rows)


def _matmul(a, b, S: PolyRing):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(m)), S.zero()) for j in range(k)] for i in range(n)]


@dataclass(frozen=True)
class MatrixFactorization:
    f: Polynomial
    phi: Tuple[Tuple[Polynomial, ...], ...]
    psi: Tuple[Tuple[Polynomial, ...], ...]
    label: str = ""

    @property
    def S(self) -> PolyRing:
        return self.f.ring

    @property
    def size(self) -> int:
        return len(self.phi)

    @property
    def homogeneous(self) -> bool:
        return self.f.is_homogeneous()

    def swap(self) -> "MatrixFactorization":
        """``(psi, phi)``: the factorization of the syzygy module."""
        return MatrixFactorization(self.f, self.psi, self.phi, self.label + "'")

    def transpose(self) -> "MatrixFactorization":
        t = lambda m: tuple(tuple(m[j][i] for j in range(len(m))) for i in range(len(m)))
        return mf_validate(t(self.phi), t(self.psi), self.f, self.label + "^T")

    def direct_sum(self, other: "MatrixFactorization") -> "MatrixFactorization":
        def block(a, b):
            n, m = len(a), len(b)
            z = self.S.zero()
            rows = [list(r) + [z] * m for r in a] + [[z] * n + list(r) for r in b]
            return rows
        return mf_validate(block(self.phi, other.phi), block(self.psi, other.psi), self.f,
                           f"{self.label}+{other.label}")

    def is_reduced(self) -> bool:
        """No unit entries, so ``coker phi`` has no free summand and ``psi`` is minimal."""
        for m in (self.phi, self.psi):
            for row in m:
                for p in row:
                    if p.constant_coefficient():
                        return False
        return True

    def as_dict(self) -> dict:
        return {"f": str(self.f), "phi": [[str(p) for p in r] for r in self.phi],
                "psi": [[str(p) for p in r] for r in self.psi], "label": self.label}


def mf_validate(phi, psi, f, label: str = "") -> MatrixFactorization:
    """Certify ``phi psi = psi phi = f I`` by exact arithmetic."""
    if isinstance(f, str):
        raise StableCMError("pass f as a Polynomial")
    S = f.ring
    phi = _poly_matrix(phi, S)
    psi = _poly_matrix(psi, S)
    r = len(phi)
    if any(len(row) != r for row in phi) or len(psi) != r or any(len(row) != r for row in psi):
        raise NotAFactorization("matrices must be square of the same size")
    for name, prod in (("phi*psi", _matmul(phi, psi, S)), ("psi*phi", _matmul(psi, phi, S))):
        for i in range(r):
            for j in range(r):
                want = f if i == j else S.zero()
                if prod[i][j] != want:
                    raise NotAFactorization(f"{name}[{i}][{j}] = {prod[i][j]}, expected {want}")
    return MatrixFactorization(f, phi, psi, label)


def _cols(m) -> List[dict]:
    r = len(m)
    return [vec_from_polys([m[i][j] for i in range(r)]) for j in range(len(m[0]) if m else 0)]


def mf_module(mf: MatrixFactorization, ring: Optional[QuotientRing] = None):
    """``(coker phi, coker psi)`` as graded presentations (homogeneous ``f`` only)."""
    if not mf.homogeneous:
        raise StableCMError("inhomogeneous f: use the truncation backend (TruncatedMF)")
    if not mf.is_reduced():
        raise StableCMError("factorization has unit entries; coker phi would split off a free summand")
    A = ring or QuotientRing(mf.S, [mf.f])
    pc, qc = _cols(mf.phi), _cols(mf.psi)
    sh = infer_shifts(pc, mf.size)
    M = ModulePresentation(A, sh, pc)
    # psi: generators of ΩM sit in the degrees of the phi columns
    degs = tuple(min(sum(e) + sh[p] for (p, e) in c) for c in pc)
    N = ModulePresentation(A, degs, qc)
    M._cache["mcm"] = True
    N._cache["mcm"] = True
    return M, N


# ---------------------------------------------------------------------------
# truncation backend


@lru_cache(maxsize=64)
def _monomials_below(nvars: int, N: int) -> Tuple[Tuple[int, ...], ...]:
    out = []
    for d in range(N):
        for c in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return tuple(out)


class TruncatedAlgebra:
    """``T = S/((f) + m^N)``, a finite-dimensional model of ``A/m^N``.

    Elements of ``(S/m^N)^r`` are rows ``{coordinate: coeff}`` over the
    monomials of degree ``< N``; the submodule ``f (S/m^N)^r`` is kept in
    echelon form so that subspaces of ``T^r`` are compared exactly.
    """

    def __init__(self, f: Polynomial, N: int):
        if N > TRUNCATION_CAP:
            raise TruncationTooSmall(f"truncation order {N} exceeds the cap {TRUNCATION_CAP}")
        self.f = f
        self.S = f.ring
        self.field: BaseField = self.S.field
        self.N = N
        self.monomials = _monomials_below(self.S.nvars, N)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self._fmult: Dict[int, List[Dict[int, object]]] = {}

    @property
    def nmon(self) -> int:
        return len(self.monomials)

    def require(self, n: int):
        if self.N < n + 3:
            raise TruncationTooSmall(f"N={self.N} too small for sample n={n} (need N >= n+3)")

    def row(self, poly: Dict[Tuple[int, ...], object], pos: int = 0, cut: Optional[int] = None) -> Dict[int, object]:
        cut = self.N if cut is None else cut
        out = {}
        base = pos * self.nmon
        for e, c in poly.items():
            if sum(e) < cut:
                out[base + self.index[e]] = c
        return out

    def mul(self, a: Dict, b: Dict, cut: Optional[int] = None) -> Dict:
        cut = self.N if cut is None else cut
        p = self.field.p
        out: Dict = {}
        for ea, ca in a.items():
            da = sum(ea)
            for eb, cb in b.items():
                if da + sum(eb) >= cut:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        if p:
            return {e: c % p for e, c in out.items() if c % p}
        return {e: c for e, c in out.items() if c}

    def f_rows(self, rank: int, cut: Optional[int] = None) -> List[Dict[int, object]]:
        """Spanning set of ``f * (S/m^cut)^rank``."""
        cut = self.N if cut is None else cut
        rows = []
        for pos in range(rank):
            for m in self.monomials:
                if sum(m) >= cut:
                    break
                prod = self.mul({m: self.field.one}, self.f.terms, cut)
                if prod:
                    rows.append(self.row(prod, pos, cut))
        return rows

    def power_rows(self, k: int, rank: int, cut: Optional[int] = None) -> List[Dict[int, object]]:
        """``m^k (S/m^cut)^rank`` as coordinate vectors."""
        cut = self.N if cut is None else cut
        one = self.field.one
        return [{pos * self.nmon + self.index[m]: one} for pos in range(rank)
                for m in self.monomials if k <= sum(m) < cut]

    def column_rows(self, cols: Sequence[Sequence[Polynomial]], cut: Optional[int] = None) -> List[Dict[int, object]]:
        """Monomial multiples of the given columns (each a list of entries)."""
        cut = self.N if cut is None else cut
        rows = []
        for col in cols:
            for m in self.monomials:
                if sum(m) >= cut:
                    break
                row = {}
                for pos, entry in enumerate(col):
                    if entry:
                        row.update(self.row(self.mul({m: self.field.one}, entry.terms, cut), pos, cut))
                if row:
                    rows.append(row)
        return rows

    def span(self, rows) -> Echelon:
        ech = Echelon(self.field)
        for r in rows:
            if r:
                ech.add(r)
        return ech

    def ideal(self, gens: Sequence[Polynomial], cut: Optional[int] = None) -> Echelon:
        """``(gens) + (f)`` inside ``S/m^cut``."""
        return self.span(self.f_rows(1, cut) + self.column_rows([[g] for g in gens], cut))

    # -- lengths -----------------------------------------------------------
    def length_quotient(self, cols: Sequence[Sequence[Polynomial]], rank: int, n: int) -> int:
        """``length(T^rank / (im cols + m^{n+1}))`` = length of ``coker/m^{n+1}coker``."""
        self.require(n)
        cut = n + 1
        rows = self.f_rows(rank, cut) + self.column_rows(cols, cut)
        total = rank * sum(1 for m in self.monomials if sum(m) < cut)
        return total - self.span(rows).rank

    def hilbert_samuel(self, n: int) -> int:
        return self.length_quotient([], 1, n)

    def tor_length(self, mf: MatrixFactorization, n: int) -> int:
        """``length ker(phi) / im(psi)`` on ``(A/m^{n+1})^r``."""
        self.require(n)
        cut = n + 1
        r = mf.size
        W = self.span(self.f_rows(r, cut))
        dimT = r * sum(1 for m in self.monomials if sum(m) < cut) - W.rank

        def rank_of(mat):
            cols = [[mat[i][j] for i in range(r)] for j in range(r)]
            ech = self.span(self.f_rows(r, cut))
            base = ech.rank
            for row in self.column_rows(cols, cut):
                ech.add(row)
            return ech.rank - base

        return dimT - rank_of(mf.phi) - rank_of(mf.psi)

    def colon(self, ideal_gens: Sequence[Polynomial], by: Sequence[Polynomial]) -> Echelon:
        """``((ideal) : (by))`` computed in ``T``; exact when ``m^N`` lies in the ideal."""
        J = self.ideal(ideal_gens)
        nm = self.nmon
        # unknown u = sum u_m m ; constraint: u*b in J for each b
        one = self.field.one
        cols = []
        for m in self.monomials:
            images = []
            for b in by:
                prod = self.mul({m: one}, b.terms)
                images.append(J.reduce(self.row(prod), full=True))
            cols.append(images)
        # solve for the kernel of u -> (u*b mod J)_b by elimination on stacked coordinates
        rows_by_eq: Dict[Tuple[int, int], Dict[int, object]] = {}
        for mi, images in enumerate(cols):
            for bi, img in enumerate(images):
                for k, c in img.items():
                    rows_by_eq.setdefault((bi, k), {})[mi] = c
        from .linalg import nullspace

        basis = nullspace(list(rows_by_eq.values()), nm, self.field)
        ech = Echelon(self.field)
        for r in J.pivots.values():
            ech.add(r)
        for v in basis:
            ech.add({i: c for i, c in enumerate(v) if c})
        return ech

    def nakayama_contains(self, k: int, gens: Sequence[Polynomial]) -> bool:
        """``m^k`` inside ``(gens)`` in ``A``, via ``m^k`` inside ``(gens) + m^{k+1}`` (needs N > k)."""
        if self.N <= k:
            raise TruncationTooSmall(f"N={self.N} cannot see m^{k + 1}")
        J = self.span(self.f_rows(1, k + 1) + self.column_rows([[g] for g in gens], k + 1))
        return all(J.contains(r) for r in self.power_rows(k, 1, k + 1))


def _auto(fn, f: Polynomial, n: int, N: Optional[int]):
    N = N or n + 4
    while True:
        if N > TRUNCATION_CAP:
            raise TruncationTooSmall(f"truncation needed beyond the cap {TRUNCATION_CAP}")
        if N >= n + 3:
            return fn(TruncatedAlgebra(f, N))
        N *= 2


def trunc_samples(kind: str, n: int, f: Polynomial, mf: Optional[MatrixFactorization] = None,
                  ideal: Sequence[Polynomial] = (), by: Sequence[Polynomial] = (),
                  N: Optional[int] = None) -> int:
    """One sample of the truncation backend.

    ``hilbert_samuel``: ``length(M/m^{n+1}M)`` for ``M = coker phi`` (or ``A``);
    ``tor_length``: ``length Tor_1(coker phi, A/m^{n+1})``;
    ``colon``: colength of ``(ideal + m^{n+1} : by)`` in ``A``.
    """
    if kind == "hilbert_samuel":
        if mf is None:
            return _auto(lambda T: T.hilbert_samuel(n), f, n, N)
        cols = [[mf.phi[i][j] for i in range(mf.size)] for j in range(mf.size)]
        return _auto(lambda T: T.length_quotient(cols, mf.size, n), f, n, N)
    if kind == "tor_length":
        if mf is None:
            raise StableCMError("tor_length needs a matrix factorization")
        return _auto(lambda T: T.tor_length(mf, n), f, n, N)
    if kind == "colon":
        def run(T: TruncatedAlgebra):
            T.require(n)
            gens = list(ideal) + _power_gens(f.ring, n + 1)
            C = T.colon(gens, list(by))
            W = T.span(T.f_rows(1))
            return (T.nmon - W.rank) - (C.rank - W.rank)
        return _auto(run, f, n, N)
    raise StableCMError(f"unknown sample kind {kind!r}")


def _power_gens(S: PolyRing, k: int) -> List[Polynomial]:
    return [S.monomial(e) for e in _monomials_below(S.nvars, k + 1) if sum(e) == k]


@dataclass
class TruncatedMF:
    """An MCM module ``coker phi`` over a (possibly inhomogeneous) hypersurface,
    evaluated through the truncation backend."""

    mf: MatrixFactorization
    trunc: Optional[int] = None

    @property
    def f(self) -> Polynomial:
        return self.mf.f

    @property
    def dim(self) -> int:
        return self.f.ring.nvars - 1

    def mu(self) -> int:
        """Minimal number of generators: size minus rank of the constant part of phi."""
        from .linalg import rank as matrix_rank

        r = self.mf.size
        rows = [{j: self.mf.phi[i][j].constant_coefficient() for j in range(r)
                 if self.mf.phi[i][j].constant_coefficient()} for i in range(r)]
        return r - matrix_rank(rows, self.f.ring.field)

    def samuel(self, n: int) -> int:
        return trunc_samples("hilbert_samuel", n, self.f, self.mf, N=self.trunc)

    def tor(self, n: int) -> int:
        return trunc_samples("tor_length", n, self.f, self.mf, N=self.trunc)

    def syzygy(self) -> "TruncatedMF":
        return TruncatedMF(self.mf.swap(), self.trunc)


def trunc_coefficients(sample, r: int) -> Tuple[int, ...]:
    fit = fit_polynomial(sample, r)
    return coefficients_from_fit(fit, r)


def trunc_e1_ring(f: Polynomial, trunc: Optional[int] = None, rank: int = 1) -> int:
    r = f.ring.nvars - 1
    return trunc_coefficients(lambda n: rank * trunc_samples("hilbert_samuel", n, f, N=trunc), r)[1] if r >= 1 else 0


def trunc_e1(M: TruncatedMF) -> int:
    r = M.dim
    return trunc_coefficients(M.samuel, r)[1] if r >= 1 else 0


def trunc_e_triangle(M: TruncatedMF) -> int:
    """``mu(M) e_1(A) - e_1(M) - e_1(ΩM)`` with every e_1 from truncated lengths."""
    if not M.mf.is_reduced():
        raise StableCMError("factorization has unit entries; reduce it first")
    return M.mu() * trunc_e1_ring(M.f, M.trunc) - trunc_e1(M) - trunc_e1(M.syzygy())


def trunc_e_triangle_from_cover(M: TruncatedMF) -> int:
    """``e_1(A^r) - e_1(M) - e_1(ΩM)`` from ``0 -> coker psi -> A^r -> coker phi -> 0``,
    with ``e_1(A^r)`` sampled on the free module itself."""
    r = M.mf.size

    def free_samples(n):
        return _auto(lambda T: T.length_quotient([], r, n), M.f, n, M.trunc)

    e1F = trunc_coefficients(free_samples, M.dim)[1] if M.dim >= 1 else 0
    return e1F - trunc_e1(M) - trunc_e1(M.syzygy())


def trunc_e_triangle_oracle(M: TruncatedMF) -> int:
    d = M.dim
    fit = fit_polynomial(M.tor, d - 1)
    value = fit.forward_difference(d - 1)
    if value.denominator != 1:
        raise StableCMError("non-integral leading coefficient")
    return int(value)


def trunc_e0_syzygy(M: TruncatedMF) -> int:
    return trunc_coefficients(M.syzygy().samuel, M.dim)[0]


# ---------------------------------------------------------------------------
# isomorphism of factorizations


def mf_iso(a: MatrixFactorization, b: MatrixFactorization, budget: int = 2000, seed: int = 0) -> bool:
    """Search constant invertible ``P, Q`` with ``P phi_a = phi_b Q``.

    For reduced factorizations of the same size a constant equivalence is a
    graded isomorphism of the cokernels.  Solved as a linear system in the
    entries of ``P`` and ``Q`` followed by a search for an invertible point.
    """
    import random

    from .linalg import nullspace, rank as matrix_rank

    if a.size != b.size or a.f != b.f:
        return False
    r = a.size
    S = a.S
    fld = S.field
    # unknowns: P (r*r) then Q (r*r); equation: sum_k P_ik a_kj - sum_k b_ik Q_kj = 0
    eqs: Dict[Tuple[int, int, tuple], Dict[int, object]] = {}
    for i in range(r):
        for j in range(r):
            for k in range(r):
                for e, c in a.phi[k][j].terms.items():
                    row = eqs.setdefault((i, j, e), {})
                    u = i * r + k
                    row[u] = fld.reduce(row.get(u, 0) + c)
                for e, c in b.phi[i][k].terms.items():
                    row = eqs.setdefault((i, j, e), {})
                    u = r * r + k * r + j
                    row[u] = fld.reduce(row.get(u, 0) - c)
    basis = nullspace([{k: v for k, v in row.items() if v} for row in eqs.values()], 2 * r * r, fld)
    if not basis:
        return False
    rng = random.Random(seed)

    def invertible(vec, off):
        rows = [{j: vec[off + i * r + j] for j in range(r) if vec[off + i * r + j]} for i in range(r)]
        return matrix_rank(rows, fld) == r

    for t in range(budget):
        if t < len(basis):
            coeffs = [fld.one if s == t else fld.zero for s in range(len(basis))]
        else:
            coeffs = [fld(rng.randrange(fld.p) if fld.p else rng.randint(-4, 4)) for _ in basis]
        vec = [fld.zero] * (2 * r * r)
        for c, bv in zip(coeffs, basis):
            if c:
                vec = [fld.reduce(x + c * y) for x, y in zip(vec, bv)]
        if invertible(vec, 0) and invertible(vec, r * r):
            return True
    return False


# ---------------------------------------------------------------------------
# ADE catalog


def _sqrt_minus_one(fld: BaseField) -> Optional[int]:
    if not fld.p:
        return None
    for i in range(1, fld.p):
        if (i * i + 1) % fld.p == 0:
            return i
    return None


def _adj2(m):
    (a, b), (c, d) = m
    return [[d, -b], [-c, a]]


def ade_catalog(kind: str, n: int = 0, field: BaseField = BaseField(5)) -> List[MatrixFactorization]:
    """Standard reduced factorizations for the two-variable simple curves and the
    quadrics in three and four variables.

    ``kind`` is one of ``A``, ``D``, ``E6``, ``E7``, ``E8``, ``Q3``, ``Q4``.
    Completeness of the list is not certified.
    """
    if field.p == 2:
        raise UnsupportedCatalogEntry("characteristic 2 is excluded")
    if kind in ("Q3", "Q4"):
        i = _sqrt_minus_one(field)
        if i is None:
            raise UnsupportedCatalogEntry("quadric factorizations need a square root of -1 in the field")
        if kind == "Q3":
            S = PolyRing(field, ("x", "y", "z"))
            x, y, z = S.gens()
            f = x * x + y * y + z * z
            phi = [[x, y + i * z], [y - i * z, -x]]
            return [mf_validate(phi, phi, f, "Q3")]
        S = PolyRing(field, ("x", "y", "z", "w"))
        x, y, z, w = S.gens()
        f = x * x + y * y + z * z + w * w
        phi1 = [[x + i * y, z + i * w], [-(z - i * w), x - i * y]]
        phi2 = [[x + i * y, z - i * w], [-(z + i * w), x - i * y]]
        return [mf_validate(phi1, _adj2(phi1), f, "Q4:1"), mf_validate(phi2, _adj2(phi2), f, "Q4:2")]
    S = PolyRing(field, ("x", "y"))
    x, y = S.gens()
    out = []
    if kind == "A":
        if n < 1:
            raise UnsupportedCatalogEntry("A_n needs n >= 1")
        f = x * x + y ** (n + 1)
        for j in range(1, n + 1):
            phi = [[x, y ** j], [y ** (n + 1 - j), -x]]
            out.append(mf_validate(phi, phi, f, f"A{n}:j={j}"))
        i = _sqrt_minus_one(field)
        if n % 2 == 1 and i is not None:
            h = y ** ((n + 1) // 2)
            out.append(mf_validate([[x + i * h]], [[x - i * h]], f, f"A{n}:+"))
            out.append(mf_validate([[x - i * h]], [[x + i * h]], f, f"A{n}:-"))
        return out
    if kind == "D":
        if n < 4:
            raise UnsupportedCatalogEntry("D_n needs n >= 4")
        f = x * x * y + y ** (n - 1)
        g = x * x + y ** (n - 2)
        out.append(mf_validate([[y]], [[g]], f, f"D{n}:y"))
        out.append(mf_validate([[g]], [[y]], f, f"D{n}:g"))
        for j in range(1, n - 2):
            al = [[x, y ** j], [y ** (n - 2 - j), -x]]
            yal = [[y * p for p in row] for row in al]
            out.append(mf_validate(al, yal, f, f"D{n}:a{j}"))
            out.append(mf_validate(yal, al, f, f"D{n}:b{j}"))
        return out
    if kind == "E6":
        f = x ** 3 + y ** 4
        for phi, lab in (([[x, y], [-y ** 3, x * x]], "1"), ([[x, y * y], [-y * y, x * x]], "2")):
            out.append(mf_validate(phi, _adj2(phi), f, f"E6:{lab}"))
            out.append(mf_validate(_adj2(phi), phi, f, f"E6:{lab}'"))
        return out
    if kind == "E7":
        f = x ** 3 + x * y ** 3
        phi = [[x, y], [-x * y * y, x * x]]
        out.append(mf_validate(phi, _adj2(phi), f, "E7:1"))
        out.append(mf_validate(_adj2(phi), phi, f, "E7:1'"))
        out.append(mf_validate([[x]], [[x * x + y ** 3]], f, "E7:x"))
        return out
    if kind == "E8":
        f = x ** 3 + y ** 5
        for phi, lab in (([[x, y], [-y ** 4, x * x]], "1"), ([[x, y * y], [-y ** 3, x * x]], "2")):
            out.append(mf_validate(phi, _adj2(phi), f, f"E8:{lab}"))
            out.append(mf_validate(_adj2(phi), phi, f, f"E8:{lab}'"))
        return out
    raise UnsupportedCatalogEntry(f"unknown catalog type {kind!r}")


def catalog_entry(ident: str) -> MatrixFactorization:
    """Resolve identifiers such as ``ade:A3:j=1``, ``ade:E6:1``, ``ade:Q3`` (default field F_5)."""
    parts = ident.split(":")
    if len(parts) < 2 or parts[0] != "ade":
        raise UnsupportedCatalogEntry(f"bad catalog id {ident!r}")
    typ = parts[1]
    p = 5
    rest = parts[2:]
    for r in list(rest):
        if r.startswith("p="):
            p = int(r[2:])
            rest.remove(r)
    fld = BaseField(p)
    if typ[0] in "AD" and typ[1:].isdigit():
        entries = ade_catalog(typ[0], int(typ[1:]), fld)
    else:
        entries = ade_catalog(typ, 0, fld)
    want = typ + (":" + ":".join(rest) if rest else "")
    for e in entries:
        if e.label == want:
            return e
    if not rest and entries:
        return entries[0]
    raise UnsupportedCatalogEntry(f"no catalog entry {ident!r}")
