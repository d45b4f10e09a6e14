"""MCM approximations, the θ invariant, linkage, and the growth experiments.

For a Cohen-Macaulay module ``N`` of codimension ``n`` over a graded
Gorenstein ring the approximation ``0 -> Y -> X -> N -> 0`` is read off a
free resolution ``F`` of ``N^v = Ext^n(N, A)``: ``X`` is the dual of the
``n``-th syzygy, i.e. ``ker(d_{n+1}^T)`` inside ``F_n^*``, and ``Y`` is the
image of ``d_n^T``.  Every construction carries the certificates needed to
trust it (exactness, depth, finite projective dimension).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (CheckFailed, CodimMismatch, ParameterPropertyFails, QNotCI, QNotInsideI,
                     StableCMError, TruncationTooSmall, UncertifiedWitness, WrongCodimension)
from .etriangle import SESWitness, e_triangle, e_triangle_oracle, tor_length
from .gmodule import (ModuleMap, ModulePresentation, QuotientRing, Syzygies,
                      cosyzygy_module, cyclic_module, depth, direct_sum, find_isomorphism,
                      free_module, is_mcm, is_stably_free, is_stably_iso, minimal_map,
                      minimalize, minimalize_with_maps, residue_field, resolve,
                      rows_of, strip_free, submodule_presentation, syzygy_module, transpose,
                      zero_module)
from .groebner import (Vec, groebner_basis, kernel, minimal_generators, vec_add,
                       vec_degree, vec_map_matrix, vec_mul_poly, vec_scale)
from .hilbert import (hilbert_function_H, hilbert_samuel, hilbert_series, multiplicity,
                      poly_mul_int)
from .mf import MatrixFactorization, TruncatedAlgebra, _power_gens, mf_module, trunc_samples
from .polyalg import Polynomial, parse_poly

# ---------------------------------------------------------------------------
# small helpers


def _zero(S) -> tuple:
    return (0,) * S.nvars


def codimension(N: ModulePresentation) -> int:
    hs = hilbert_series(minimalize(N))
    if hs.dim < 0:
        raise WrongCodimension("the zero module has no codimension")
    return N.ring.dim - hs.dim


def is_cohen_macaulay(N: ModulePresentation) -> bool:
    Nm = minimalize(N)
    if Nm.rank == 0:
        return True
    return depth(Nm) == hilbert_series(Nm).dim


def _dual_columns(cols: Sequence[Vec], nrows: int) -> List[Vec]:
    """Columns of ``d^T`` (indexed by the dual of the target of ``d``)."""
    return rows_of(cols, nrows)


def _pullback(phi: Vec, images: Sequence[Vec], fld) -> Vec:
    """``phi o g`` for a functional ``phi`` on ``F'`` and ``g: F -> F'`` given by images."""
    comps: Dict[int, Dict] = {}
    for (q, e), c in phi.items():
        comps.setdefault(q, {})[e] = c
    out: Vec = {}
    for p, img in enumerate(images):
        for (q, e), c in img.items():
            f = comps.get(q)
            if not f:
                continue
            out = vec_add(out, vec_mul_poly({(p, e): c}, f, fld), fld)
    return out


def _lifter(gens: Sequence[Vec], shifts, degs, A: QuotientRing, modulo: Sequence[Vec] = ()) -> Syzygies:
    return Syzygies(list(gens), tuple(shifts), A.S, A.gb, list(modulo)).with_source_degrees(tuple(degs))


def _resolution_data(M: ModulePresentation, length: int):
    """Differentials and shifts of a minimal resolution, padded with zero maps."""
    res = resolve(M, length)
    mats = [list(m) for m in res.matrices]
    shifts = [tuple(s) for s in res.shifts]
    while len(shifts) < length + 1:
        shifts.append(())
    while len(mats) < length:
        mats.append([])
    return mats, shifts


# ---------------------------------------------------------------------------
# MCM approximation


@dataclass
class ApproximationWitness:
    """``0 -> Y --alpha--> X --beta--> N -> 0`` with ``X`` MCM and ``pd Y`` finite."""

    N: ModulePresentation
    X: ModulePresentation
    Y: ModulePresentation
    alpha: ModuleMap
    beta: ModuleMap
    codim: int
    y_resolution_length: Optional[int]
    certificate: Dict[str, bool] = field(default_factory=dict)
    provenance: str = "minimal resolution"

    @property
    def certified(self) -> bool:
        return bool(self.certificate) and all(self.certificate.values())

    def require(self):
        if not self.certified:
            bad = [k for k, v in self.certificate.items() if not v]
            raise UncertifiedWitness(f"approximation fails: {', '.join(bad)}")

    def as_dict(self) -> dict:
        return {
            "codim": self.codim,
            "X": self.X.describe(),
            "Y": self.Y.describe(),
            "pd_Y": self.y_resolution_length,
            "certificate": dict(self.certificate),
            "provenance": self.provenance,
        }


def _random_form(S, degree: int, rng: random.Random) -> Dict:
    from .hilbert import standard_monomials

    fld = S.field
    out = {}
    for e in standard_monomials((), S.nvars, degree):
        c = fld(rng.randrange(fld.p) if fld.p else rng.randint(-2, 2))
        if c:
            out[e] = c
    return out


def _perturb(mats, shifts, n: int, A: QuotientRing, seed: int):
    """A non-minimal resolution: a trivial summand ``A -1-> A`` in degrees
    ``n, n-1`` followed by a random unipotent change of basis of ``F_n``."""
    fld = A.field
    S = A.S
    zero = _zero(S)
    rng = random.Random(seed)
    mats = [list(m) for m in mats]
    shifts = [tuple(s) for s in shifts]
    c = shifts[n][0] if shifts[n] else (shifts[n - 1][0] if shifts[n - 1] else 0)
    pm = len(shifts[n - 1])
    shifts[n] = shifts[n] + (c,)
    shifts[n - 1] = shifts[n - 1] + (c,)
    mats[n - 1] = mats[n - 1] + [{(pm, zero): fld.one}]
    sn = shifts[n]
    rank = len(sn)
    order = sorted(range(rank), key=lambda i: (sn[i], i))
    rankpos = {p: k for k, p in enumerate(order)}
    U: List[Vec] = []          # columns of the nilpotent part
    for q in range(rank):
        col: Vec = {}
        for p in range(rank):
            if rankpos[p] < rankpos[q] and sn[q] - sn[p] >= 0:
                f = _random_form(S, sn[q] - sn[p], rng)
                col = vec_add(col, {(p, e): v for e, v in f.items()}, fld)
        U.append(col)
    # u = 1 + U, u^{-1} = sum (-U)^k
    def apply_U(v: Vec) -> Vec:
        return vec_map_matrix(v, U, fld)

    def apply_u(v: Vec) -> Vec:
        return vec_add(v, apply_U(v), fld)

    def apply_uinv(v: Vec) -> Vec:
        out, term = dict(v), dict(v)
        for _ in range(rank):
            term = vec_scale(apply_U(term), fld.reduce(-1), fld)
            if not term:
                break
            out = vec_add(out, term, fld)
        return out

    nxt = mats[n] if n < len(mats) else []
    mats_n = [apply_u(col) for col in nxt]
    uinv_cols = [apply_uinv({(q, zero): fld.one}) for q in range(rank)]
    mats_prev = [vec_map_matrix(col, mats[n - 1], fld) for col in uinv_cols]
    mats[n - 1] = mats_prev
    if n < len(mats):
        mats[n] = mats_n
    return mats, shifts


def _approximation_from(N: ModulePresentation, n: int, mats, shifts, provenance: str,
                        budget: int, seed: int) -> ApproximationWitness:
    A = N.ring
    fld = A.field
    zero = _zero(A.S)
    dn_shift = tuple(-s for s in shifts[n])
    up_shift = tuple(-s for s in shifts[n + 1])
    d_next = mats[n] if n < len(mats) else []
    K = kernel(_dual_columns(d_next, len(shifts[n])), dn_shift, up_shift, A.S, A.gb) if d_next \
        else [{(p, zero): fld.one} for p in range(len(dn_shift))]
    degK = tuple(vec_degree(g, dn_shift) for g in K)
    ygens = [g for g in _dual_columns(mats[n - 1], len(shifts[n - 1]))] if n >= 1 else []
    yd = [(g, -shifts[n - 1][p]) for p, g in enumerate(ygens) if g]
    ygens = [g for g, _ in yd]
    P = free_module(A, dn_shift)
    X = submodule_presentation(P, K) if K else zero_module(A)
    lift = _lifter(K, dn_shift, degK, A)
    alpha_imgs = [lift.lift(y) for y in ygens]
    Y = submodule_presentation(P, ygens) if ygens else zero_module(A)
    alpha = ModuleMap(Y, X, alpha_imgs, check=False)
    # coker alpha is Ext^n(N^v, A); identify it with N
    Np = ModulePresentation(A, degK, list(X.relations) + alpha_imgs, check=False)
    Npm, to_min, _ = minimalize_with_maps(Np)
    Nm = minimalize(N)
    a = hilbert_series(Npm).shift_against(hilbert_series(Nm))
    iso = find_isomorphism(Npm, Nm, 0, budget, seed) if a == 0 else None
    if iso is None:
        raise UncertifiedWitness("could not identify Ext^n(N^v, A) with N")
    beta = ModuleMap(X, Nm, [vec_map_matrix(v, iso.images, fld) for v in to_min], check=False)
    cert: Dict[str, bool] = {}
    ses = SESWitness(Y, X, Nm, alpha, beta, "approximation")
    cert.update(ses.certify())
    cert["X_mcm"] = is_mcm(X)
    ylen = None
    if Y.rank == 0:
        ylen = -1
        cert["pd_Y_finite"] = True
    else:
        r = resolve(Y, A.S.nvars + 2)
        cert["pd_Y_finite"] = r.terminated
        ylen = r.length if r.terminated else None
    return ApproximationWitness(Nm, X, Y, alpha, beta, n, ylen, cert, provenance)


def mcm_approximation(N: ModulePresentation, budget: int = 200, seed: int = 0,
                      perturb: Optional[int] = None) -> ApproximationWitness:
    """MCM approximation of a Cohen-Macaulay module.

    With ``perturb`` set, the resolution of ``N^v`` is made non-minimal
    (trivial summand plus a seeded change of basis) before dualizing.
    """
    A = N.ring
    Nm = minimalize(N)
    if Nm.rank == 0:
        Z = zero_module(A)
        return ApproximationWitness(Nm, Z, Z, ModuleMap(Z, Z, []), ModuleMap(Z, Z, []), 0, -1,
                                    {"zero_module": True}, "zero")
    n = codimension(Nm)
    if n == 0:
        if not is_mcm(Nm):
            raise WrongCodimension("codimension 0 input must be maximal Cohen-Macaulay")
        Z = zero_module(A)
        one = A.field.one
        ident = [{(i, _zero(A.S)): one} for i in range(Nm.rank)]
        return ApproximationWitness(Nm, Nm, Z, ModuleMap(Z, Nm, []), ModuleMap(Nm, Nm, ident, check=False),
                                    0, -1, {"X_mcm": True, "pd_Y_finite": True}, "identity")
    A.require_gorenstein()
    if not is_cohen_macaulay(Nm):
        raise WrongCodimension("input is not Cohen-Macaulay")
    from .gmodule import ext_dual

    E = ext_dual(Nm, n)
    mats, shifts = _resolution_data(E, n + 1)
    prov = "minimal resolution"
    if perturb is not None:
        mats, shifts = _perturb(mats, shifts, n, A, perturb)
        prov = f"non-minimal resolution (seed {perturb})"
    return _approximation_from(Nm, n, mats, shifts, prov, budget, seed)


def _e_triangle_or_zero(X: ModulePresentation) -> int:
    if minimalize(X).rank == 0:
        return 0
    return e_triangle(X)


def theta(N: ModulePresentation, verify: bool = False, budget: int = 200, seed: int = 0) -> int:
    """``e^T(X_N)``; with ``verify`` the approximation from a second,
    non-minimal resolution must be stably isomorphic to the first."""
    W = mcm_approximation(N, budget, seed)
    W.require()
    if verify and W.codim > 0:
        W2 = mcm_approximation(N, budget, seed, perturb=seed + 1)
        W2.require()
        v = is_stably_iso(W.X, W2.X, budget, seed)
        if v.verdict == "no":
            raise CheckFailed("approximation uniqueness",
                              "approximations from two resolutions are not stably isomorphic")
    return _e_triangle_or_zero(W.X)


def theta_report(N: ModulePresentation, budget: int = 200, seed: int = 0) -> dict:
    W = mcm_approximation(N, budget, seed)
    W2 = mcm_approximation(N, budget, seed, perturb=seed + 1) if W.codim > 0 else W
    v = is_stably_iso(W.X, W2.X, budget, seed)
    X = W.X
    val = _e_triangle_or_zero(X)
    out = {
        "codim": W.codim,
        "theta": val,
        "X_generators": minimalize(X).rank,
        "X_stably_free": is_stably_free(X) if X.rank else True,
        "approximation_certified": W.certified,
        "second_resolution_certified": W2.certified,
        "well_defined": v.verdict,
    }
    if X.rank and not out["X_stably_free"]:
        out["oracle"] = e_triangle_oracle(X)
        out["e0_syzygy"] = multiplicity(syzygy_module(X))
    return out


# ---------------------------------------------------------------------------
# the approximation triangle of a short exact sequence


@dataclass
class _ExtData:
    mats: list
    shifts: list
    K: List[Vec]
    degK: Tuple[int, ...]
    lift: Syzygies
    E: ModulePresentation            # presentation with generators K (not minimal)


def _ext_data(N: ModulePresentation, n: int) -> _ExtData:
    got = N._cache.get(("ext", n))
    if got is not None:
        return got
    A = N.ring
    mats, shifts = _resolution_data(N, n + 1)
    dn = tuple(-s for s in shifts[n])
    up = tuple(-s for s in shifts[n + 1])
    zero = _zero(A.S)
    if mats[n]:
        K = kernel(_dual_columns(mats[n], len(shifts[n])), dn, up, A.S, A.gb)
    else:
        K = [{(p, zero): A.field.one} for p in range(len(dn))]
    degK = tuple(vec_degree(g, dn) for g in K)
    img = [g for g in _dual_columns(mats[n - 1], len(shifts[n - 1])) if g]
    lift = _lifter(K, dn, degK, A, img)
    E = ModulePresentation(A, degK, lift.generators(minimal=True), check=False)
    out = _ExtData(mats, shifts, K, degK, lift, E)
    N._cache[("ext", n)] = out
    return out


def _chain_lift(f: ModuleMap, d1: _ExtData, d2: _ExtData, n: int) -> List[Vec]:
    """Images of the basis of ``P1_n`` under a chain map lifting ``f``."""
    A = f.source.ring
    fld = A.field
    cur = [dict(v) for v in f.images]          # P1_0 -> P2_0
    for k in range(1, n + 1):
        src_cols = d1.mats[k - 1]
        tgt_cols = d2.mats[k - 1]
        lifter = _lifter(tgt_cols, d2.shifts[k - 1], d2.shifts[k], A) if tgt_cols else None
        nxt = []
        for c in src_cols:
            v = vec_map_matrix(c, cur, fld)
            nxt.append(lifter.lift(v) if v and lifter is not None else {})
        cur = nxt
    return cur


def _ext_map(f: ModuleMap, n: int) -> Tuple[ModuleMap, _ExtData, _ExtData]:
    """``Ext^n(f, A) : Ext^n(target) -> Ext^n(source)`` between minimal presentations."""
    fm = minimal_map(f)
    d1 = _ext_data(fm.source, n)
    d2 = _ext_data(fm.target, n)
    chain = _chain_lift(fm, d1, d2, n)
    fld = f.source.field
    imgs = [d1.lift.lift(_pullback(phi, chain, fld)) for phi in d2.K]
    return minimal_map(ModuleMap(d2.E, d1.E, imgs, check=False)), d1, d2


@dataclass
class ApproxTriangleReport:
    checks: Dict[str, bool]
    values: Dict[str, int]
    X_left: ModulePresentation
    X_mid: ModulePresentation
    X_right: ModulePresentation
    verdicts: Dict[str, str]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {"checks": dict(self.checks), "values": dict(self.values), "verdicts": dict(self.verdicts),
                "passed": self.passed}


def _stack(cols_top: Sequence[Vec], off: int, cols_bottom: Sequence[Vec]) -> List[Vec]:
    """Columns ``(top_j, bottom_j)`` in ``F (+) H`` with ``H`` placed at offset ``off``."""
    out = []
    for a, b in zip(cols_top, cols_bottom):
        v = dict(a)
        for (p, e), c in b.items():
            v[(p + off, e)] = c
        out.append(v)
    return out


def check_approx_triangle(ses: SESWitness, budget: int = 200, seed: int = 0) -> ApproxTriangleReport:
    """Horseshoe construction over the dualized sequence.

    ``0 -> N1 -> N2 -> N3 -> 0`` dualizes to ``0 -> N3^v -> N2^v -> N1^v -> 0``;
    resolutions ``F`` of ``N3^v`` and ``H`` of ``N1^v`` are glued into a
    resolution ``G`` of ``N2^v``, and the duals of the ``n``-th syzygies give
    ``0 -> X_H -> X_G -> X_F -> 0``.
    """
    if not ses.certified():
        raise UncertifiedWitness("input sequence is not certified exact")
    mods = [ses.M1, ses.M2, ses.M3]
    codims = {codimension(M) for M in mods if minimalize(M).rank}
    if len(codims) != 1:
        raise CodimMismatch("the three modules must share one codimension")
    n = codims.pop()
    for M in mods:
        if not is_cohen_macaulay(M):
            raise CodimMismatch("every term must be Cohen-Macaulay")
    A = ses.M1.ring
    A.require_gorenstein()
    fld = A.field
    S = A.S
    zero = _zero(S)
    if n == 0:
        raise CodimMismatch("use the sequence itself when all terms are maximal Cohen-Macaulay")
    # the dual sequence 0 -> E3 -a-> E2 -b-> E1 -> 0
    b, _, _ = _ext_map(ses.alpha, n)        # E2 -> E1
    a, _, _ = _ext_map(ses.beta, n)         # E3 -> E2
    E1, E2, E3 = b.target, b.source, a.source
    checks: Dict[str, bool] = {}
    dual_ses = SESWitness(E3, E2, E1, a, b, "dual")
    checks["dual_sequence_exact"] = dual_ses.certified()
    Fm, Fs = _resolution_data(E3, n + 1)
    Hm, Hs = _resolution_data(E1, n + 1)
    # augmentation of G on the H part: lift generators of E1 through b
    lb = _lifter(b.images, E1.shifts, E2.shifts, A, E1.relations)
    sigma = [lb.lift({(j, zero): fld.one}) for j in range(E1.rank)]
    la = _lifter(a.images, E2.shifts, E3.shifts, A, E2.relations)
    taus: List[List[Vec]] = []
    for k in range(1, n + 2):
        cols = Hm[k - 1]
        tau = []
        if k >= 2:
            qgb = groebner_basis([], Fs[k - 2], S, A.gb) if A.gb else None
            lf = _lifter(Fm[k - 2], Fs[k - 2], Fs[k - 1], A) if Fm[k - 2] else None
        for h in cols:
            if k == 1:
                w = vec_map_matrix(h, sigma, fld)
                w = E2.normal_form(w)
                tau.append(la.lift(vec_scale(w, fld.reduce(-1), fld)) if w else {})
            else:
                v = vec_scale(vec_map_matrix(h, taus[-1], fld), fld.reduce(-1), fld)
                if qgb is not None:
                    v = qgb.normal_form(v)
                if not v:
                    tau.append({})
                    continue
                if lf is None:
                    raise UncertifiedWitness("horseshoe lift has no target")
                tau.append(lf.lift(v))
        taus.append(tau)
    # G = F (+) H
    Gs = [Fs[k] + Hs[k] for k in range(n + 2)]
    Gm = []
    for k in range(1, n + 2):
        off = len(Fs[k - 1])
        top = list(Fm[k - 1])
        bottom = _stack(taus[k - 1], off, Hm[k - 1])
        Gm.append(top + bottom)
    # complex and augmentation checks
    ok = True
    for k in range(1, n + 1):
        q = groebner_basis([], Gs[k - 1], S, A.gb)
        for c in Gm[k]:
            if q.normal_form(vec_map_matrix(c, Gm[k - 1], fld)):
                ok = False
    aug = list(a.images) + sigma
    for c in Gm[0]:
        if E2.normal_form(vec_map_matrix(c, aug, fld)):
            ok = False
    checks["horseshoe_complex"] = ok
    # duals of the n-th syzygies

    def xdata(mats, shifts):
        dn = tuple(-s for s in shifts[n])
        up = tuple(-s for s in shifts[n + 1])
        if mats[n]:
            K = kernel(_dual_columns(mats[n], len(shifts[n])), dn, up, S, A.gb)
        else:
            K = [{(p, zero): fld.one} for p in range(len(dn))]
        degK = tuple(vec_degree(g, dn) for g in K)
        X = submodule_presentation(free_module(A, dn), K) if K else zero_module(A)
        return K, degK, dn, X

    KF, dF, sF, XF = xdata(Fm, Fs)
    KH, dH, sH, XH = xdata(Hm, Hs)
    KG, dG, sG, XG = xdata(Gm, Gs)
    off = len(Fs[n])
    lg = _lifter(KG, sG, dG, A)
    lf = _lifter(KF, sF, dF, A)
    inc = [lg.lift({(p + off, e): c for (p, e), c in psi.items()}) for psi in KH]
    proj = []
    for phi in KG:
        part = {(p, e): c for (p, e), c in phi.items() if p < off}
        proj.append(lf.lift(part) if part else {})
    s_ses = SESWitness(XH, XG, XF, ModuleMap(XH, XG, inc, check=False),
                       ModuleMap(XG, XF, proj, check=False), "approximation triangle")
    checks.update({f"sequence_{k}": v for k, v in s_ses.certify().items()})
    checks["terms_mcm"] = all(is_mcm(X) for X in (XH, XG, XF))
    # compare with the approximations of the three modules
    verdicts: Dict[str, str] = {}
    for name, M, X in (("left", ses.M1, XH), ("middle", ses.M2, XG), ("right", ses.M3, XF)):
        W = mcm_approximation(M, budget, seed)
        v = is_stably_iso(W.X, X, budget, seed)
        verdicts[name] = v.verdict
        checks[f"{name}_stably_iso"] = v.verdict == "yes"
    values = {"e_T_left": _e_triangle_or_zero(XH), "e_T_middle": _e_triangle_or_zero(XG),
              "e_T_right": _e_triangle_or_zero(XF)}
    return ApproxTriangleReport(checks, values, XH, XG, XF, verdicts)


def filtration_ses(M: ModulePresentation, n: int) -> SESWitness:
    """``0 -> m^n M/m^{n+1} M -> M/m^{n+1} M -> M/m^n M -> 0``."""
    A = M.ring
    Mm = minimalize(M)
    S = A.S
    fld = A.field
    zero = _zero(S)

    def mod_power(k):
        rels = list(Mm.relations)
        for p, s in enumerate(Mm.shifts):
            for g in _power_gens(S, k):
                rels.append({(p, e): c for e, c in g.terms.items()})
        return ModulePresentation(A, Mm.shifts, rels, check=False)

    big = mod_power(n + 1)
    small = mod_power(n)
    gens = []
    for p in range(Mm.rank):
        for g in _power_gens(S, n):
            gens.append({(p, e): c for e, c in g.terms.items()})
    gens = minimal_generators(gens, Mm.shifts, S, A.gb, big.relations)
    left = submodule_presentation(big, gens)
    alpha = ModuleMap(left, big, gens, check=False)
    beta = ModuleMap(big, small, [{(i, zero): fld.one} for i in range(Mm.rank)], check=False)
    return SESWitness(left, big, small, alpha, beta, f"filtration n={n}")


# ---------------------------------------------------------------------------
# linkage of ideals


def _as_polys(gens, S) -> List[Polynomial]:
    return [parse_poly(g, S) if isinstance(g, str) else g for g in gens]


def _ideal_vecs(gens: Sequence[Polynomial]) -> List[Vec]:
    return [{(0, e): c for e, c in g.terms.items()} for g in gens if g]


def ideal_contains(A: QuotientRing, big: Sequence[Polynomial], small: Sequence[Polynomial]) -> bool:
    gb = groebner_basis(_ideal_vecs(big), (0,), A.S, A.gb)
    return all(not gb.normal_form(v) for v in _ideal_vecs(small))


def ideals_equal(A: QuotientRing, I: Sequence[Polynomial], J: Sequence[Polynomial]) -> bool:
    return ideal_contains(A, I, J) and ideal_contains(A, J, I)


def colon_ideal(A: QuotientRing, q: Sequence[Polynomial], I: Sequence[Polynomial]) -> List[Polynomial]:
    """Minimal generators of ``(q : I)`` in ``A``."""
    S = A.S
    I = [f for f in I if f]
    if not I:
        return [S.one()]
    shifts = tuple(-f.degree() for f in I)
    v = {}
    for i, f in enumerate(I):
        for e, c in f.terms.items():
            v[(i, e)] = c
    modulo = []
    for i in range(len(I)):
        for g in q:
            if g:
                modulo.append({(i, e): c for e, c in g.terms.items()})
    syz = Syzygies([v], shifts, S, A.gb, modulo).with_source_degrees((0,))
    gens = syz.generators(minimal=True)
    return [Polynomial(S, {e: c for (_, e), c in g.items()}) for g in gens]


def is_complete_intersection(A: QuotientRing, q: Sequence[Polynomial]) -> bool:
    """Regular sequence test: the series of ``A/q`` is that of ``A`` times ``prod(1 - z^d)``."""
    q = [g for g in q if g]
    if not q:
        return True
    if any(g.constant_coefficient() for g in q):
        return False
    Q = cyclic_module(A, q)
    target = dict(A.series_numerator)
    for g in q:
        target = poly_mul_int(target, {0: 1, g.degree(): -1})
    target = {k: v for k, v in target.items() if v}
    return hilbert_series(Q).numerator == target


@dataclass
class LinkageWitness:
    ring: QuotientRing
    I: List[Polynomial]
    q: List[Polynomial]
    J: List[Polynomial]
    back: List[Polynomial]
    linked: bool
    proper: bool

    @property
    def flags(self) -> List[str]:
        return [] if self.proper else ["NotAProperLink"]

    def as_dict(self) -> dict:
        return {
            "I": [str(f) for f in self.I],
            "q": [str(f) for f in self.q],
            "J": [str(f) for f in self.J],
            "back_colon": [str(f) for f in self.back],
            "linked": self.linked,
            "proper": self.proper,
            "flags": self.flags,
        }


def link_ideal(A: QuotientRing, I: Sequence, q: Sequence) -> Tuple[List[Polynomial], LinkageWitness]:
    """``J = (q : I)`` for a complete intersection ``q`` inside ``I``."""
    S = A.S
    I = _as_polys(I, S)
    q = _as_polys(q, S)
    if not ideal_contains(A, I, q):
        raise QNotInsideI("the linking ideal is not contained in I")
    if not is_complete_intersection(A, q):
        raise QNotCI("the linking ideal is not generated by a regular sequence")
    J = colon_ideal(A, q, I)
    back = colon_ideal(A, q, J)
    linked = ideals_equal(A, back, I)
    proper = not ideal_contains(A, J, [S.one()])
    return J, LinkageWitness(A, I, q, J, back, linked, proper)


# ---------------------------------------------------------------------------
# horizontal linkage of modules


def horizontal_link_partner(M: ModulePresentation) -> ModulePresentation:
    """``Ω Tr M``."""
    T = transpose(M)
    if T.rank == 0:
        return zero_module(M.ring)
    return minimalize(syzygy_module(T))


@dataclass
class HorizontalReport:
    forward: str
    backward: str
    partner_zero: bool

    @property
    def verdict(self) -> str:
        if self.forward == "yes" and self.backward == "yes":
            return "yes"
        if "no" in (self.forward, self.backward):
            return "no"
        return "unknown"

    def as_dict(self) -> dict:
        return {"forward": self.forward, "backward": self.backward, "verdict": self.verdict,
                "partner_zero": self.partner_zero}


def check_horizontal(M: ModulePresentation, N: ModulePresentation, budget: int = 200,
                     seed: int = 0) -> HorizontalReport:
    """``M = Ω Tr N`` and ``N = Ω Tr M`` up to stable isomorphism."""
    pm = horizontal_link_partner(M)
    pn = horizontal_link_partner(N)
    f = is_stably_iso(N, pm, budget, seed).verdict
    g = is_stably_iso(M, pn, budget, seed).verdict
    return HorizontalReport(f, g, pm.rank == 0)


def ideal_module_consistency(A: QuotientRing, I: Sequence, q: Sequence, budget: int = 200,
                             seed: int = 0) -> dict:
    """Partner of ``B/IB`` over ``B = A/q`` against ``B/JB`` for ``J = (q : I)``.

    ``Ω Tr (B/IB)`` is the image of ``B -> B^r``, ``1 -> (f_i)``, which is
    ``B/(0 :_B I) = B/JB``.
    """
    S = A.S
    I = _as_polys(I, S)
    q = _as_polys(q, S)
    J, W = link_ideal(A, I, q)
    B = QuotientRing(S, list(A.relations) + q)
    M = cyclic_module(B, I)
    partner = horizontal_link_partner(M)
    v = is_stably_iso(partner, cyclic_module(B, J), budget, seed)
    return {"linkage": W.as_dict(), "partner_vs_colon": v.verdict}


# ---------------------------------------------------------------------------
# one-dimensional window (truncation backend)


@dataclass
class WindowReport:
    s: int
    a: str
    window: Tuple[int, int]
    parameter: Dict[int, bool]
    identity: Dict[Tuple[int, int], bool]
    onset: Optional[int]
    truncation: int

    @property
    def holds(self) -> bool:
        return all(self.identity.values())

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "a": self.a,
            "window": list(self.window),
            "truncation": self.truncation,
            "parameter_property": {str(k): v for k, v in sorted(self.parameter.items())},
            "colon_identity": {f"n={n},r={r}": v for (n, r), v in sorted(self.identity.items())},
            "holds": self.holds,
            "onset": self.onset,
        }


def _power(f: Polynomial, k: int) -> Polynomial:
    out = f.ring.one()
    for _ in range(k):
        out = out * f
    return out


def dim1_linkage_window(f: Polynomial, a: Polynomial, s: Optional[int] = None,
                        window: Tuple[int, int] = (2, 8), trunc: Optional[int] = None) -> WindowReport:
    """Colon identity ``(a^n : m^{sn-r}) = (a^{n-1} : m^{s(n-1)-r})`` over ``S/(f)``.

    Everything is computed in ``T = S/((f) + m^K)``; ``K`` is chosen so that
    ``m^K`` lies in ``(a^n)`` for every ``n`` of the window (checked by
    Nakayama), which makes the truncated colons exact.
    """
    S = f.ring
    if s is None:
        s = min(sum(e) for e in a.terms)
    lo, hi = window
    if lo < 1 or hi < lo:
        raise StableCMError("window must satisfy 1 <= n0 <= N")
    # parameter property: m^{n+s} inside a m^n + m^{n+s+1}
    T0 = TruncatedAlgebra(f, hi + s + 3)
    param: Dict[int, bool] = {}
    for n in range(lo, hi + 1):
        cut = n + s + 1
        gens = [a * g for g in _power_gens(S, n)]
        J = T0.span(T0.f_rows(1, cut) + T0.column_rows([[g] for g in gens], cut))
        param[n] = all(J.contains(r) for r in T0.power_rows(n + s, 1, cut))
    if not param[hi]:
        raise ParameterPropertyFails(f"m^{{n+s}} is not a*m^n at n={hi}: a is not a parameter of degree {s}")
    # truncation order: m^K inside (a^hi) checked in S/(f)+m^{K+1}
    K = trunc if trunc is not None else (s * hi + 2)
    ahi = _power(a, hi)
    while True:
        if K + 2 > 64:
            raise TruncationTooSmall("could not certify m^K inside (a^n) below the truncation cap")
        T = TruncatedAlgebra(f, K + 2)
        if T.nakayama_contains(K, [ahi]):
            break
        K += max(1, s)
    # the colon computations now live in S/((f) + m^K); the power of a grows
    # only up to hi, so one truncation serves the whole window
    T = TruncatedAlgebra(f, K)
    ident: Dict[Tuple[int, int], bool] = {}

    def colon(n, r):
        k = s * n - r
        by = _power_gens(S, k) if k > 0 else [S.one()]
        return T.colon([_power(a, n)], by)

    cache = {}
    for n in range(lo, hi + 1):
        for r in range(s):
            if s * (n - 1) - r < 0:
                continue
            for key in ((n, r), (n - 1, r)):
                if key not in cache:
                    cache[key] = colon(*key)
            c1, c2 = cache[(n, r)], cache[(n - 1, r)]
            ident[(n, r)] = c1.rank == c2.rank and all(c1.contains(v) for v in c2.pivots.values())
    onset = None
    for n in range(hi, lo - 1, -1):
        if all(v for (m, _), v in ident.items() if m == n):
            onset = n
        else:
            break
    return WindowReport(s, str(a), (lo, hi), param, ident, onset, K)


# ---------------------------------------------------------------------------
# growth and fingerprints


def growth_experiment(M: Optional[ModulePresentation] = None, n_max: int = 3, ring: Optional[QuotientRing] = None,
                      approximations: bool = True, budget: int = 200, seed: int = 0) -> dict:
    """``e^T(Y_n)`` for ``Y_n = X_{M/m^{n+1}M}`` and the lower bound ``H(M,n) e^T(Ω^{-1}X_k)``."""
    if M is None:
        if ring is None:
            raise StableCMError("pass a module or a ring")
        M = free_module(ring, 1)
    A = M.ring
    if A.dim < 2:
        raise StableCMError("the growth experiment needs dimension at least 2")
    n_max = min(n_max, 5)
    Wk = mcm_approximation(residue_field(A), budget, seed)
    Wk.require()
    Xk = Wk.X
    regular = A.gorenstein is not None and A.gorenstein.kind == "regular"
    if is_stably_free(Xk):
        base = 0
    else:
        base = _e_triangle_or_zero(cosyzygy_module(strip_free(Xk)[0]))
    Hs = [hilbert_function_H(M, n) for n in range(1, n_max + 1)]
    bound = [h * base for h in Hs]
    ys = []
    if approximations:
        Mm = minimalize(M)
        for n in range(1, n_max + 1):
            Q = filtration_ses(Mm, n).M2
            ys.append(theta(Q, budget=budget, seed=seed))
    checks = {}
    if regular:
        checks["all_zero"] = all(v == 0 for v in ys) and base == 0
    else:
        checks["bound_increasing"] = all(x < y for x, y in zip(bound, bound[1:]))
    return {
        "n": list(range(1, n_max + 1)),
        "H": Hs,
        "e_T_cosyzygy_Xk": base,
        "bound": bound,
        "e_T_Y": ys,
        "regular": regular,
        "checks": checks,
    }


@dataclass(frozen=True)
class Fingerprint:
    numerator: Tuple[Tuple[int, int], ...]
    mu_raw: int
    mu_stripped: int
    e_T: int
    rank: Optional[int]

    def key(self) -> tuple:
        # the Hilbert numerator is not free-summand invariant; the stripped one is used
        return (self.numerator, self.mu_stripped, self.e_T, self.rank)

    def as_dict(self) -> dict:
        return {"numerator": {str(k): v for k, v in self.numerator}, "mu_raw": self.mu_raw,
                "mu_stripped": self.mu_stripped, "e_T": self.e_T, "rank": self.rank}


def fingerprint(X: ModulePresentation) -> Fingerprint:
    Xm = minimalize(X)
    Xs, _ = strip_free(Xm) if Xm.rank else (Xm, 0)
    hs = hilbert_series(Xs)
    num = tuple(sorted(hs.numerator.items()))
    # normalize the global shift so stably isomorphic modules agree
    if num:
        lo = num[0][0]
        num = tuple((k - lo, v) for k, v in num)
    eT = _e_triangle_or_zero(Xm)
    rank = None
    if Xm.rank:
        eA = multiplicity(free_module(X.ring, 1))
        eX = multiplicity(Xm)
        rank = eX // eA if eX % eA == 0 else None
    return Fingerprint(num, Xm.rank, Xs.rank, eT, rank)


def fingerprint_experiment(A: QuotientRing, ideals: Sequence[Sequence], m: int, budget: int = 200,
                           seed: int = 0, superficial: bool = True) -> dict:
    """Fingerprints of ``X_{A/I}`` for codimension-2 Cohen-Macaulay ideals, bucketed."""
    S = A.S
    entries = []
    notices = []
    if not ideals:
        return {"entries": [], "buckets": [], "bucket_count": 0, "notices": [], "bound": None}
    bound = None
    if superficial:
        bound = _residue_theta_bound(A, m, seed)
    for idx, I in enumerate(ideals):
        I = _as_polys(I, S)
        N = cyclic_module(A, I)
        try:
            c = codimension(N)
        except WrongCodimension:
            notices.append(f"ideal {idx}: unit ideal or zero quotient, skipped")
            continue
        if c != 2 or not is_cohen_macaulay(N):
            notices.append(f"ideal {idx}: not Cohen-Macaulay of codimension 2, skipped")
            continue
        e0 = multiplicity(N)
        if e0 > m:
            notices.append(f"ideal {idx}: multiplicity {e0} exceeds {m}, skipped")
            continue
        W = mcm_approximation(N, budget, seed)
        W.require()
        fp = fingerprint(W.X)
        entries.append({"index": idx, "ideal": [str(f) for f in I], "e0": e0, "theta": fp.e_T,
                        "fingerprint": fp, "X": W.X})
    # bucket by fingerprint, then split by stable isomorphism
    buckets: List[List[int]] = []
    reps: List[int] = []
    unknown = 0
    for k, ent in enumerate(entries):
        placed = False
        for b, r in zip(buckets, reps):
            other = entries[r]
            if other["fingerprint"].key() != ent["fingerprint"].key():
                continue
            v = is_stably_iso(other["X"], ent["X"], budget, seed)
            if v.verdict == "yes":
                b.append(k)
                placed = True
                break
            if v.verdict == "unknown":
                unknown += 1
        if not placed:
            buckets.append([k])
            reps.append(k)
    out_entries = []
    for ent in entries:
        d = {k: v for k, v in ent.items() if k not in ("fingerprint", "X")}
        d["fingerprint"] = ent["fingerprint"].as_dict()
        if bound is not None:
            d["within_bound"] = ent["theta"] <= bound
        out_entries.append(d)
    if A.field.p and bound is not None:
        notices.append(f"general sections sampled over F_{A.field.p}; nothing is inferred for infinite fields")
    return {
        "entries": out_entries,
        "buckets": [[entries[k]["index"] for k in b] for b in buckets],
        "bucket_count": len(buckets),
        "unknown_comparisons": unknown,
        "bound": bound,
        "notices": notices,
        "scope": "buckets group stably isomorphic approximations; no statement about liaison classes is made",
    }


def _residue_theta_bound(A: QuotientRing, m: int, seed: int) -> Optional[int]:
    """``m * θ_B(k)`` with ``B`` a cut by ``d - 2`` general linear forms, or None."""
    B = _generic_section(A, A.dim - 2, seed)
    if B is None:
        return None
    return m * theta(residue_field(B))


def _generic_section(A: QuotientRing, count: int, seed: int) -> Optional[QuotientRing]:
    from .etriangle import random_linear_form

    rng = random.Random(seed)
    forms = []
    R = A
    for _ in range(count):
        for _attempt in range(10):
            x = random_linear_form(R, rng)
            cand = QuotientRing(A.S, list(A.relations) + forms + [x])
            if cand.dim == R.dim - 1:
                forms.append(x)
                R = cand
                break
        else:
            return None
    return R


def _section_by(A: QuotientRing, forms: Sequence[Polynomial]) -> QuotientRing:
    return QuotientRing(A.S, list(A.relations) + list(forms))


@dataclass
class ThetaBoundReport:
    theta_A: int
    e0: int
    theta_B_k: int
    superficial: bool
    forms: List[str]

    @property
    def holds(self) -> bool:
        return self.theta_A <= self.e0 * self.theta_B_k

    def as_dict(self) -> dict:
        return {"theta_A": self.theta_A, "e0": self.e0, "theta_B_k": self.theta_B_k,
                "bound": self.e0 * self.theta_B_k, "holds": self.holds,
                "superficial_verified": self.superficial, "forms": self.forms}


def check_theta_bound(N: ModulePresentation, seed: int = 0, window: int = 8, retries: int = 10,
                      budget: int = 200) -> ThetaBoundReport:
    """``θ_A(N) <= e_0(N) θ_B(k)`` with ``B = A/(x)`` for general linear forms ``x``.

    The forms are drawn so that each is superficial for ``A (+) X (+) ΩX``
    (checked by the length identity over the window) and cuts the dimension
    of ``N`` where needed.
    """
    from .etriangle import is_superficial, random_linear_form, mod_element

    A = N.ring
    W = mcm_approximation(N, budget, seed)
    W.require()
    tA = _e_triangle_or_zero(W.X)
    e0 = multiplicity(minimalize(N))
    d = A.dim
    r = codimension(N)
    count = d - r
    rng = random.Random(seed)
    forms: List[Polynomial] = []
    verified = True
    X = W.X
    R = A
    for _ in range(count):
        E = direct_sum(free_module(R, 1), X, syzygy_module(X)) if minimalize(X).rank else free_module(R, 1)
        for _attempt in range(retries):
            x = random_linear_form(R, rng)
            if is_superficial(x, E, range(1, window + 1)):
                break
        else:
            verified = False
        forms.append(x)
        R = _section_by(A, forms)
        X = mod_element(X, R, x) if minimalize(X).rank else zero_module(R)
    B = R
    tB = theta(residue_field(B), budget=budget, seed=seed)
    return ThetaBoundReport(tA, e0, tB, verified, [str(f) for f in forms])


# ---------------------------------------------------------------------------
# graded versus truncated backend


def backend_agreement(mf: MatrixFactorization, window: Tuple[int, int] = (0, 6),
                      colons: Sequence[Tuple[Sequence[Polynomial], Sequence[Polynomial]]] = ()) -> dict:
    """Sample both backends on a homogeneous factorization and compare.

    Quantities: ``length(A/m^{n+1})``, ``length(M/m^{n+1}M)`` and
    ``length Tor_1(M, A/m^{n+1})`` for ``M = coker phi``, and the colength of
    ``(I + m^{n+1} : b)`` for each ``(I, b)`` in ``colons``.
    """
    if not mf.homogeneous:
        raise StableCMError("backend comparison needs a homogeneous equation")
    M, _ = mf_module(mf)
    A = M.ring
    f = mf.f
    rows: Dict[str, Dict[int, Tuple[int, int]]] = {"ring_samuel": {}, "samuel": {}, "tor": {}}
    for k in range(len(colons)):
        rows[f"colon{k}"] = {}
    lo, hi = window
    for n in range(lo, hi + 1):
        rows["ring_samuel"][n] = (hilbert_samuel(free_module(A, 1), n), trunc_samples("hilbert_samuel", n, f))
        rows["samuel"][n] = (hilbert_samuel(M, n), trunc_samples("hilbert_samuel", n, f, mf))
        rows["tor"][n] = (tor_length(M, n), trunc_samples("tor_length", n, f, mf))
        for k, (I, b) in enumerate(colons):
            gens = colon_ideal(A, list(I) + _power_gens(A.S, n + 1), list(b))
            graded = hilbert_samuel(cyclic_module(A, gens), n + 1)
            rows[f"colon{k}"][n] = (graded, trunc_samples("colon", n, f, ideal=list(I), by=list(b)))
    agree = all(g == t for r in rows.values() for g, t in r.values())
    return {"label": mf.label, "window": [lo, hi], "agree": agree,
            "samples": {k: {str(n): list(v) for n, v in r.items()} for k, r in rows.items()}}
