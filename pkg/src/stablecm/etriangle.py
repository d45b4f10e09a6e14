"""The triangle function e^T, its Tor-length oracle, and the axiom checkers.

Three routes to the same integer are kept deliberately apart:

* :func:`e_triangle` combines first Hilbert coefficients,
  ``mu(M) e_1(A) - e_1(M) - e_1(ΩM)``;
* :func:`e_triangle_from_cover` uses any free cover ``0 -> N -> F -> M -> 0``;
* :func:`e_triangle_oracle` fits a polynomial to
  ``n -> length Tor_1(M, A/m^{n+1})``, each value computed from the
  resolution reduced modulo ``m^{n+1}`` by linear algebra over ``k`` and
  never touching a Hilbert coefficient.
"""

from __future__ import annotations

import random
import re
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (MalformedDescriptor, MiddleNotFree, NotMCM, StableCMError,
                     SuperficialSamplingExhausted, UncertifiedWitness)
from .gmodule import (ModuleMap, ModulePresentation, QuotientRing, Syzygies, TriangleWitness, cone,
                      cosyzygy_module, direct_sum, free_module, hom_space, identity_map, is_mcm,
                      is_stably_iso, minimalize, resolve, shift, syzygy_embedding, syzygy_module,
                      zero_module)
from .hilbert import (e1, fit_polynomial, hilbert_coefficients, hilbert_samuel, multiplicity,
                      standard_monomials)
from .groebner import vec_add, vec_scale
from .linalg import rank as matrix_rank
from .polyalg import Polynomial

# ---------------------------------------------------------------------------
# the closed formula


def _require_mcm(M: ModulePresentation):
    if M.ring.dim < 1:
        raise StableCMError("e^T needs a ring of dimension at least 1")
    if not is_mcm(M):
        raise NotMCM("e^T is defined on maximal Cohen-Macaulay modules")


def e_triangle(M: ModulePresentation) -> int:
    """``mu(M) e_1(A) - e_1(M) - e_1(ΩM)``."""
    _require_mcm(M)
    Mm = minimalize(M)
    A = free_module(M.ring, 1)
    Om = syzygy_module(Mm)
    return Mm.rank * e1(A) - e1(Mm) - e1(Om)


# ---------------------------------------------------------------------------
# short exact sequences


@dataclass
class SESWitness:
    """``0 -> M1 --alpha--> M2 --beta--> M3 -> 0``."""

    M1: ModulePresentation
    M2: ModulePresentation
    M3: ModulePresentation
    alpha: ModuleMap
    beta: ModuleMap
    label: str = ""
    _certificate: Optional[Dict[str, bool]] = field(default=None, repr=False)

    def certify(self) -> Dict[str, bool]:
        if self._certificate is not None:
            return self._certificate
        a, b = self.alpha, self.beta
        cert = {
            "alpha_well_defined": a.is_well_defined(),
            "beta_well_defined": b.is_well_defined(),
            "composite_zero": b.compose(a).is_zero(),
            "alpha_injective": a.is_injective(),
            "beta_surjective": b.is_surjective(),
        }
        _, kgens = b.kernel()
        M2 = self.M2
        syz = Syzygies(list(a.images), M2.shifts, M2.S, M2.ring.gb, M2.relations) \
            .with_source_degrees(self.M1.shifts)
        cert["kernel_in_image"] = all(syz.in_span(v) for v in kgens)
        self._certificate = cert
        return cert

    def certified(self) -> bool:
        return all(self.certify().values())

    def require(self):
        if not self.certified():
            bad = [k for k, v in self.certify().items() if not v]
            raise UncertifiedWitness(f"sequence fails: {', '.join(bad)}")


def split_ses(M: ModulePresentation, N: ModulePresentation) -> SESWitness:
    """``0 -> M -> M (+) N -> N -> 0``."""
    S = direct_sum(M, N)
    zero = (0,) * M.S.nvars
    one = M.field.one
    a = ModuleMap(M, S, [{(i, zero): one} for i in range(M.rank)], check=False)
    b_imgs = [{} for _ in range(M.rank)] + [{(j, zero): one} for j in range(N.rank)]
    b = ModuleMap(S, N, b_imgs, check=False)
    return SESWitness(M, S, N, a, b, "split")


def syzygy_ses(M: ModulePresentation) -> SESWitness:
    """``0 -> ΩM -> F_0 -> M -> 0`` from a minimal presentation."""
    Om, gens, Mm = syzygy_embedding(M)
    F = free_module(M.ring, Mm.shifts)
    a = ModuleMap(Om, F, gens, check=False)
    b = ModuleMap(F, Mm, identity_map(Mm).images, check=False)
    return SESWitness(Om, F, Mm, a, b, "syzygy cover")


def cover_ses(M: ModulePresentation, extra: Sequence[int] = ()) -> SESWitness:
    """Free cover ``0 -> N -> F -> M -> 0``, non-minimal when ``extra`` is given.

    Each extra basis vector of degree ``s`` maps to ``x_1^(s - d_1)`` times the
    first generator (or to zero when ``s < d_1``).
    """
    Mm = minimalize(M)
    zero = (0,) * M.S.nvars
    one = M.field.one
    shifts = list(Mm.shifts) + list(extra)
    F = free_module(M.ring, shifts)
    imgs = [{(i, zero): one} for i in range(Mm.rank)]
    for s in extra:
        img = {}
        if Mm.rank and s >= Mm.shifts[0]:
            d = s - Mm.shifts[0]
            img = {(0, (d,) + (0,) * (M.S.nvars - 1)): one}
        imgs.append(img)
    b = ModuleMap(F, Mm, imgs, check=False)
    N, kgens = b.kernel()
    a = ModuleMap(N, F, kgens, check=False)
    return SESWitness(N, F, Mm, a, b, "free cover")


def e_triangle_from_cover(ses: SESWitness) -> int:
    """``e_1(F) - e_1(M) - e_1(N)`` for ``0 -> N -> F -> M -> 0``."""
    ses.require()
    F = minimalize(ses.M2)
    if F.relations:
        raise MiddleNotFree("middle term of the cover is not free")
    return e1(F) - e1(ses.M3) - e1(ses.M1)


# ---------------------------------------------------------------------------
# the Tor oracle


def _basis_A(A: QuotientRing, u: int, memo: Dict[int, List[tuple]]) -> List[tuple]:
    if u not in memo:
        lead = [max(g, key=lambda e: (sum(e), tuple(-a for a in reversed(e)))) for g in A.gb]
        memo[u] = standard_monomials(lead, A.nvars, u)
    return memo[u]


def tor_length(M: ModulePresentation, n: int, resolution=None) -> int:
    """``length Tor_1^A(M, A/m^{n+1})`` as ``dim ker / im`` of the reduced complex.

    For each internal degree ``t`` the complex ``F_2 -> F_1 -> F_0`` tensored
    with ``A/m^{n+1}`` is a complex of finite-dimensional spaces spanned by
    standard monomials of ``A``; only components with ``0 <= t - s <= n`` survive.
    """
    res = resolution if resolution is not None else resolve(M, 2)
    if len(res.matrices) == 0:
        return 0
    A = M.ring
    fld = M.field
    qgb = A._ideal_basis()
    memo: Dict[int, List[tuple]] = {}
    F = res.shifts
    d1 = res.matrices[0]
    d2 = res.matrices[1] if len(res.matrices) > 1 else []

    def coords(shifts, t):
        out = {}
        for j, s in enumerate(shifts):
            u = t - s
            if 0 <= u <= n:
                for m in _basis_A(A, u, memo):
                    out[(j, m)] = len(out)
        return out

    def image_rows(cols, src_shifts, tgt_shifts, t):
        src = coords(src_shifts, t)
        tgt = coords(tgt_shifts, t)
        rows = []
        for (j, m), _ in src.items():
            row = {}
            for (p, e), c in cols[j].items():
                f = qgb.normal_form({(0, tuple(a + b for a, b in zip(e, m))): c})
                for (_, ee), cc in f.items():
                    key = (p, ee)
                    if key in tgt:
                        k = tgt[key]
                        row[k] = fld.reduce(row.get(k, 0) + cc)
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
        return rows

    total = 0
    f1 = F[1]
    lo, hi = min(f1), max(f1) + n
    for t in range(lo, hi + 1):
        dimF1 = len(coords(f1, t))
        if not dimF1:
            continue
        r1 = matrix_rank(image_rows(d1, f1, F[0], t), fld)
        r2 = matrix_rank(image_rows(d2, F[2], f1, t), fld) if d2 else 0
        total += dimF1 - r1 - r2
    return total


@dataclass
class OracleResult:
    value: int
    degree: int
    samples: Dict[int, int]
    window: Tuple[int, int]


def e_triangle_oracle_data(M: ModulePresentation, n0: Optional[int] = None, cap: int = 12) -> OracleResult:
    _require_mcm(M)
    d = M.ring.dim
    res = resolve(M, 2)
    fit = fit_polynomial(lambda n: tor_length(M, n, res), d - 1, n0, cap)
    deg = fit.true_degree()
    free = not res.matrices
    if deg > d - 1 or (deg == d - 1) == free:
        raise StableCMError(f"Tor-length growth has degree {deg}, incompatible with freeness={free}")
    value = fit.forward_difference(d - 1)
    if value.denominator != 1:
        raise StableCMError("non-integral leading coefficient")
    return OracleResult(int(value), deg, fit.samples, fit.window)


def e_triangle_oracle(M: ModulePresentation) -> int:
    """``(d-1)!`` times the leading coefficient of the Tor-length polynomial."""
    return e_triangle_oracle_data(M).value


# ---------------------------------------------------------------------------
# triangle functions


@dataclass(frozen=True)
class Descriptor:
    kind: str                         # "ET", "Derived", "Sum", "Scaled"
    base: Tuple["Descriptor", ...] = ()
    param: int = 0

    def __str__(self):
        if self.kind == "ET":
            return "ET"
        if self.kind == "Derived":
            return f"D({self.base[0]},{self.param})"
        if self.kind == "Scaled":
            return f"{self.param}*{self.base[0]}"
        return "+".join(str(b) for b in self.base)


def _parse_descriptor(text: str) -> Descriptor:
    s = text.replace(" ", "")
    if not s:
        raise MalformedDescriptor("empty descriptor")
    # split on top-level '+'
    depth, parts, cur = 0, [], ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise MalformedDescriptor(f"unbalanced parentheses in {text!r}")
        if ch == "+" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if depth:
        raise MalformedDescriptor(f"unbalanced parentheses in {text!r}")
    parts.append(cur)
    if len(parts) > 1:
        return make_descriptor(("Sum", [_parse_descriptor(p) for p in parts]))
    if s == "ET":
        return Descriptor("ET")
    m = re.fullmatch(r"(\d+)\*(.+)", s)
    if m:
        return make_descriptor(("Scaled", _parse_descriptor(m.group(2)), int(m.group(1))))
    m = re.fullmatch(r"D\((.+),(-?\d+)\)", s)
    if m:
        return make_descriptor(("Derived", _parse_descriptor(m.group(1)), int(m.group(2))))
    if s.startswith("(") and s.endswith(")"):
        return _parse_descriptor(s[1:-1])
    raise MalformedDescriptor(f"cannot parse descriptor {text!r}")


def make_descriptor(desc) -> Descriptor:
    """Accepts a Descriptor, a string such as ``"ET + D(ET,1)"`` or nested tuples."""
    if isinstance(desc, Descriptor):
        return desc
    if isinstance(desc, str):
        return _parse_descriptor(desc)
    if not isinstance(desc, (tuple, list)) or not desc:
        raise MalformedDescriptor(f"bad descriptor {desc!r}")
    kind = desc[0]
    if kind == "ET" and len(desc) == 1:
        return Descriptor("ET")
    if kind == "Derived" and len(desc) == 3:
        i = desc[2]
        if not isinstance(i, int) or i < 0:
            raise MalformedDescriptor("derived index must be a nonnegative integer")
        return Descriptor("Derived", (make_descriptor(desc[1]),), i)
    if kind == "Scaled" and len(desc) == 3:
        k = desc[2]
        if not isinstance(k, int) or k < 1:
            raise MalformedDescriptor("scale must be a positive integer")
        return Descriptor("Scaled", (make_descriptor(desc[1]),), k)
    if kind == "Sum" and len(desc) == 2:
        terms = list(desc[1])
        if not terms:
            raise MalformedDescriptor("empty sum")
        return Descriptor("Sum", tuple(make_descriptor(t) for t in terms))
    raise MalformedDescriptor(f"bad descriptor {desc!r}")


class TriangleFunction:
    """An integer-valued function on stable classes built from e^T.

    Values are cached by module fingerprint.  With ``audit=True`` every cache
    hit is recomputed and compared.
    """

    def __init__(self, descriptor, audit: bool = False):
        self.descriptor = make_descriptor(descriptor)
        self.audit = audit
        self._cache: Dict[tuple, int] = {}
        self._lock = threading.Lock()

    def __str__(self):
        return str(self.descriptor)

    def __call__(self, M: ModulePresentation) -> int:
        return evaluate(self, M)

    def _compute(self, d: Descriptor, M: ModulePresentation) -> int:
        if d.kind == "ET":
            return e_triangle(M)
        if d.kind == "Derived":
            return self._compute(d.base[0], syzygy_module(M, d.param) if d.param else M)
        if d.kind == "Scaled":
            return d.param * self._compute(d.base[0], M)
        return sum(self._compute(b, M) for b in d.base)


def make_xi(descriptor) -> TriangleFunction:
    return TriangleFunction(descriptor)


def evaluate(xi: TriangleFunction, M: ModulePresentation) -> int:
    key = minimalize(M).fingerprint()
    with xi._lock:
        hit = xi._cache.get(key)
        if hit is None:
            hit = xi._compute(xi.descriptor, M)
            xi._cache[key] = hit
        elif xi.audit:
            fresh = xi._compute(xi.descriptor, M)
            if fresh != hit:
                raise StableCMError("cached value differs from recomputation")
    return hit


ET = TriangleFunction("ET")


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class CheckReport:
    name: str
    values: Dict[str, int]
    checks: Dict[str, bool]
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {"name": self.name, "values": dict(self.values), "checks": dict(self.checks),
                "passed": self.passed, "notes": list(self.notes)}


def _basic_axioms(xi: TriangleFunction, named: Dict[str, ModulePresentation], values: Dict[str, int],
                  checks: Dict[str, bool], budget: int, seed: int):
    for name, X in named.items():
        v = values[name]
        checks[f"nonnegative[{name}]"] = v >= 0
        verdict = is_stably_iso(X, zero_module(X.ring), budget, seed)
        free = verdict.verdict == "yes"
        checks[f"zero_iff_stably_free[{name}]"] = (v == 0) == free


def _additivity(xi, X, Y, values, checks, label):
    s = evaluate(xi, direct_sum(X, Y))
    values[f"sum[{label}]"] = s
    checks[f"additive[{label}]"] = s == evaluate(xi, X) + evaluate(xi, Y)


def check_pretriangle(xi: TriangleFunction, ses: SESWitness, budget: int = 200, seed: int = 0) -> CheckReport:
    """Nonnegativity, vanishing exactly on free modules, additivity and
    ``xi(M2) <= xi(M1) + xi(M3)`` on a certified sequence."""
    ses.require()
    named = {"M1": ses.M1, "M2": ses.M2, "M3": ses.M3}
    for X in named.values():
        if not is_mcm(X):
            raise NotMCM("sequence terms must be maximal Cohen-Macaulay")
    values = {k: evaluate(xi, X) for k, X in named.items()}
    checks: Dict[str, bool] = {}
    _basic_axioms(xi, named, values, checks, budget, seed)
    _additivity(xi, ses.M1, ses.M3, values, checks, "M1+M3")
    checks["subadditive"] = values["M2"] <= values["M1"] + values["M3"]
    return CheckReport(f"pretriangle[{xi}]({ses.label})", values, checks)


def check_triangle(xi: TriangleFunction, tri: TriangleWitness, budget: int = 200, seed: int = 0) -> CheckReport:
    """The three rotated sub-additivity inequalities on ``M -> N -> C -> Ω^{-1}M``."""
    for X in (tri.M, tri.N):
        if not is_mcm(X):
            raise NotMCM("triangle terms must be maximal Cohen-Macaulay")
    bad = [k for k, v in tri.certify().items() if not v]
    if bad:
        raise UncertifiedWitness(f"triangle fails: {', '.join(bad)}")
    named = {"M": tri.M, "N": tri.N, "C": tri.C, "shiftM": tri.shifted_M,
             "shiftN": cosyzygy_module(tri.N)}
    values = {k: evaluate(xi, X) for k, X in named.items()}
    checks: Dict[str, bool] = {}
    _basic_axioms(xi, named, values, checks, budget, seed)
    _additivity(xi, tri.M, tri.N, values, checks, "M+N")
    checks["4a"] = values["N"] <= values["M"] + values["C"]
    checks["4b"] = values["C"] <= values["N"] + values["shiftM"]
    checks["4c"] = values["shiftM"] <= values["C"] + values["shiftN"]
    return CheckReport(f"triangle[{xi}]({tri.provenance})", values, checks)


def check_e1_superadditive(ses: SESWitness) -> CheckReport:
    ses.require()
    vals = {"e1(M1)": e1(ses.M1), "e1(M2)": e1(ses.M2), "e1(M3)": e1(ses.M3)}
    checks = {"e1_superadditive": vals["e1(M2)"] >= vals["e1(M1)"] + vals["e1(M3)"]}
    e0s = (multiplicity(ses.M1), multiplicity(ses.M2), multiplicity(ses.M3))
    vals.update({"e0(M1)": e0s[0], "e0(M2)": e0s[1], "e0(M3)": e0s[2]})
    checks["e0_additive"] = e0s[1] == e0s[0] + e0s[2]
    return CheckReport(f"e1-superadditivity({ses.label})", vals, checks)


# ---------------------------------------------------------------------------
# superficial elements


def mod_element(M: ModulePresentation, ring: QuotientRing, x: Polynomial) -> ModulePresentation:
    """``M/xM`` regarded as a module over ``ring`` (which must contain x in its ideal)."""
    rels = list(M.relations)
    for i in range(M.rank):
        rels.append({(i, e): c for e, c in x.terms.items()})
    return ModulePresentation(ring, M.shifts, rels, check=False)


def _mod_x_same_ring(M: ModulePresentation, x: Polynomial) -> ModulePresentation:
    return mod_element(M, M.ring, x)


def is_superficial(x: Polynomial, N: ModulePresentation, window: Sequence[int]) -> bool:
    """``(m^{n+1}N : x) = m^n N`` for every ``n`` in the window, tested through
    ``length(N/m^{n+1}N) - length(N/(x, m^{n+1})N) = length(N/m^n N)``."""
    Nx = _mod_x_same_ring(N, x)
    for n in window:
        if hilbert_samuel(N, n) - hilbert_samuel(Nx, n) != hilbert_samuel(N, n - 1):
            return False
    return True


def random_linear_form(ring: QuotientRing, rng: random.Random) -> Polynomial:
    fld = ring.field
    S = ring.S
    while True:
        if fld.p:
            cs = [rng.randrange(fld.p) for _ in range(S.nvars)]
        else:
            cs = [rng.randint(-9, 9) for _ in range(S.nvars)]
        if any(cs):
            terms = {}
            for i, c in enumerate(cs):
                if c:
                    e = [0] * S.nvars
                    e[i] = 1
                    terms[tuple(e)] = fld(c)
            return Polynomial(S, terms)


def check_mod_superficial(M: ModulePresentation, seed: int = 0, window: int = 8, retries: int = 10,
                          x: Optional[Polynomial] = None) -> CheckReport:
    """Reduce modulo a verified superficial linear form and compare e^T and Hilbert coefficients."""
    A = M.ring
    if A.dim < 2:
        raise StableCMError("hyperplane reduction needs dimension at least 2")
    _require_mcm(M)
    Mm = minimalize(M)
    Om = syzygy_module(Mm)
    E = direct_sum(free_module(A, 1), Mm, Om)
    rng = random.Random(seed)
    notes = []
    for attempt in range(retries):
        cand = x if x is not None and attempt == 0 else random_linear_form(A, rng)
        if is_superficial(cand, E, range(1, window + 1)):
            x = cand
            break
        notes.append(f"rejected {cand}")
    else:
        raise SuperficialSamplingExhausted(f"no superficial linear form in {retries} draws")
    B = QuotientRing(A.S, list(A.relations) + [x])
    N = mod_element(Mm, B, x)
    AB = free_module(B, 1)
    vals = {"eT_A(M)": e_triangle(Mm), "eT_B(N)": e_triangle(N)}
    checks = {"eT_preserved": vals["eT_A(M)"] == vals["eT_B(N)"]}
    for label, X, XB in (("A", free_module(A, 1), AB), ("M", Mm, N)):
        hx = hilbert_coefficients(X)
        hb = hilbert_coefficients(XB)
        for i in range(hx.dim):
            vals[f"e{i}({label})"] = hx.e(i)
            vals[f"e{i}({label}/x)"] = hb.e(i)
            checks[f"e{i}_preserved[{label}]"] = hx.e(i) == hb.e(i)
    notes.append(f"x = {x}")
    return CheckReport("hyperplane-section", vals, checks, notes)


# ---------------------------------------------------------------------------
# seeded witness families


def seeded_witnesses(mods: Sequence[ModulePresentation], seed: int = 0, cones: int = 8):
    """``[(kind, witness)]`` with kind ``"ses"`` or ``"tri"``.

    Sequences: syzygy covers, padded covers and all split sums of pairs.
    Triangles: cones of random combinations of a basis of degree-0 or degree-1
    maps between randomly chosen pairs.
    """
    rng = random.Random(seed)
    out = []
    for M in mods:
        out.append(("ses", syzygy_ses(M)))
        out.append(("ses", cover_ses(M, [rng.randint(0, 2)])))
    for M in mods:
        for N in mods:
            out.append(("ses", split_ses(M, N)))
    made, tries = 0, 0
    while made < cones and tries < 4 * cones:
        tries += 1
        M, N = rng.choice(mods), rng.choice(mods)
        for a in (0, 1):
            basis = hom_space(M, N, a)
            if not basis:
                continue
            fld = M.field
            imgs = [dict() for _ in range(M.rank)]
            for mp in basis:
                c = fld(rng.randrange(fld.p) if fld.p else rng.randint(-3, 3))
                for i in range(M.rank):
                    imgs[i] = vec_add(imgs[i], vec_scale(mp[i], c, fld), fld)
            f = ModuleMap(M, shift(N, -a), imgs, check=False)
            out.append(("tri", cone(f)))
            made += 1
            break
    return out
