"""Graded modules over A = S/I given by presentations, and the functors on them.

A :class:`ModulePresentation` is ``coker(F_1 -> F_0)`` where ``F_0`` has
generators in degrees ``shifts`` and the relation columns are homogeneous
vectors in ``F_0``.  Every construction returns a new presentation; nothing
is mutated after construction apart from lazily filled caches.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (InhomogeneousInput, NonGorensteinRing, NotMCM, RingMismatch,
                     ShapeMismatch, StableCMError, WrongCodimension)
from .groebner import (GroebnerBasis, Syzygies, Vec, free_resolution,
                       groebner_basis, ideal_gb, is_homogeneous, kernel, minimal_generators,
                       quotient_relations, submodule_contains, vec_add, vec_degree,
                       vec_from_polys, vec_map_matrix, vec_mul_poly, vec_reindex, vec_scale,
                       vec_to_polys)
from .linalg import Echelon, nullspace, rank as matrix_rank
from .polyalg import Exps, PolyRing, Polynomial, parse_poly

# ---------------------------------------------------------------------------
# the ring


@dataclass(frozen=True)
class Gorenstein:
    kind: str                      # "hypersurface", "complete-intersection", "regular", "asserted"
    relations: Tuple[Polynomial, ...] = ()


class QuotientRing:
    """``S/I`` for a homogeneous ideal ``I`` with its Krull dimension.

    ``gorenstein`` is machine-checked evidence (regular, hypersurface or
    complete intersection) or ``asserted`` when the caller vouches for it.
    """

    def __init__(self, S: PolyRing, relations: Sequence[Polynomial] = (), assert_gorenstein: bool = False):
        rels = []
        for f in relations:
            if isinstance(f, str):
                f = parse_poly(f, S)
            if f.ring != S:
                raise RingMismatch("relation lives in another ring")
            if not f.is_homogeneous():
                raise InhomogeneousInput(f"relation {f} is not homogeneous")
            if f:
                rels.append(f)
        self.S = S
        self.relations = tuple(rels)
        self.gb = tuple(ideal_gb(rels, S))
        from .hilbert import monomial_numerator, pole_order

        lead = [max(g, key=_grevlex) for g in self.gb]
        self.series_numerator = monomial_numerator(lead, S.nvars)
        self.dim = pole_order(self.series_numerator, S.nvars)
        self.gorenstein = self._evidence(assert_gorenstein)

    def _evidence(self, asserted: bool) -> Optional[Gorenstein]:
        from .hilbert import poly_mul_int

        if not self.gb:
            return Gorenstein("regular")
        # minimal generators of I
        gens = minimal_generators([{(0, e): c for e, c in f.terms.items()} for f in self.relations],
                                  (0,), self.S)
        mins = tuple(Polynomial(self.S, {e: c for (_, e), c in v.items()}) for v in gens)
        target = {0: 1}
        for f in mins:
            target = poly_mul_int(target, {0: 1, f.degree(): -1})
        if target == self.series_numerator:
            return Gorenstein("hypersurface" if len(mins) == 1 else "complete-intersection", mins)
        if asserted:
            warnings.warn("Gorenstein property asserted by the caller, not verified", stacklevel=3)
            return Gorenstein("asserted")
        return None

    @property
    def field(self):
        return self.S.field

    @property
    def nvars(self) -> int:
        return self.S.nvars

    def require_gorenstein(self):
        if self.gorenstein is None:
            raise NonGorensteinRing("no regular-sequence evidence; pass assert_gorenstein=True to vouch")

    def reduce(self, f: Dict[Exps, object]) -> Dict[Exps, object]:
        if not self.gb:
            return dict(f)
        gb = self._ideal_basis()
        v = gb.normal_form({(0, e): c for e, c in f.items()})
        return {e: c for (_, e), c in v.items()}

    def _ideal_basis(self) -> GroebnerBasis:
        if not hasattr(self, "_igb"):
            self._igb = groebner_basis([], (0,), self.S, self.gb)
        return self._igb

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and self.S == other.S and self.gb == other.gb

    def __hash__(self):
        return hash((self.S, tuple(tuple(sorted(g.items())) for g in self.gb)))

    def __repr__(self):
        rels = ", ".join(str(f) for f in self.relations)
        return f"QuotientRing({self.S}; ({rels}))"

    def poly(self, text: str) -> Polynomial:
        return parse_poly(text, self.S)


def _grevlex(e):
    return (sum(e), tuple(-a for a in reversed(e)))


# ---------------------------------------------------------------------------
# presentations


class ModulePresentation:
    """``coker`` of the relation columns inside ``F_0 = (+) A(-shifts[i])``."""

    def __init__(self, ring: QuotientRing, shifts: Sequence[int], relations: Sequence[Vec] = (),
                 check: bool = True):
        self.ring = ring
        self.shifts = tuple(int(s) for s in shifts)
        rels = []
        for v in relations:
            v = {t: c for t, c in v.items() if c}
            if not v:
                continue
            if check:
                for (p, _) in v:
                    if not 0 <= p < len(self.shifts):
                        raise ShapeMismatch("relation has a component outside F_0")
                if not is_homogeneous(v, self.shifts):
                    raise InhomogeneousInput("relation column is not homogeneous")
            rels.append(v)
        self.relations = tuple(rels)
        self._cache: Dict[str, object] = {}

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_matrix(cls, ring: QuotientRing, rows: Sequence[Sequence], shifts: Optional[Sequence[int]] = None):
        """Presentation from a row-major relation matrix (strings or polynomials).

        Without explicit shifts the generators sit in degree 0 when possible,
        otherwise degrees are solved from the first nonzero entry of each column.
        """
        S = ring.S
        mat = [[parse_poly(x, S) if isinstance(x, str) else x for x in row] for row in rows]
        nrows = len(mat)
        ncols = len(mat[0]) if mat else 0
        cols = [vec_from_polys([mat[i][j] for i in range(nrows)]) for j in range(ncols)]
        if shifts is None:
            shifts = infer_shifts(cols, nrows)
        return cls(ring, shifts, cols)

    @property
    def rank(self) -> int:
        """Number of generators in this presentation (μ when minimal)."""
        return len(self.shifts)

    @property
    def S(self) -> PolyRing:
        return self.ring.S

    @property
    def field(self):
        return self.ring.S.field

    def relation_degrees(self) -> Tuple[int, ...]:
        return tuple(vec_degree(c, self.shifts) for c in self.relations)

    def matrix(self) -> List[List[Polynomial]]:
        """Row-major relation matrix."""
        cols = [vec_to_polys(c, self.rank, self.S) for c in self.relations]
        return [[cols[j][i] for j in range(len(cols))] for i in range(self.rank)]

    def gb(self) -> GroebnerBasis:
        """Groebner basis of ``relations + I*F_0`` (term over position)."""
        g = self._cache.get("gb")
        if g is None:
            g = groebner_basis(self.relations, self.shifts, self.S, self.ring.gb)
            self._cache["gb"] = g
        return g

    def normal_form(self, v: Vec) -> Vec:
        return self.gb().normal_form(v)

    def is_zero(self) -> bool:
        g = self.gb()
        zero = (0,) * self.S.nvars
        have = {p for (p, e) in g.leading_terms if e == zero}
        return len(have) == self.rank

    def is_minimal(self) -> bool:
        zero = (0,) * self.S.nvars
        return not any(e == zero for c in self.relations for (_, e) in c)

    def fingerprint(self) -> tuple:
        from .hilbert import hilbert_series

        hs = hilbert_series(self)
        rel = tuple(tuple(sorted(c.items())) for c in self.relations)
        return (tuple(sorted(hs.numerator.items())), self.rank, hash((self.shifts, rel)))

    def __repr__(self):
        return f"ModulePresentation(shifts={self.shifts}, relations={len(self.relations)})"

    def describe(self) -> dict:
        return {
            "shifts": list(self.shifts),
            "matrix": [[str(p) for p in row] for row in self.matrix()],
        }


def infer_shifts(cols: Sequence[Vec], nrows: int) -> Tuple[int, ...]:
    """Generator degrees making every column homogeneous, normalized to min 0."""
    shifts: List[Optional[int]] = [None] * nrows
    coldeg: List[Optional[int]] = [None] * len(cols)
    if nrows:
        shifts[0] = 0
    changed = True
    while changed:
        changed = False
        for j, c in enumerate(cols):
            for (p, e), _ in c.items():
                d = sum(e)
                if shifts[p] is not None and coldeg[j] is None:
                    coldeg[j] = shifts[p] + d
                    changed = True
                elif shifts[p] is None and coldeg[j] is not None:
                    shifts[p] = coldeg[j] - d
                    changed = True
        if not changed and None in shifts:
            shifts[shifts.index(None)] = 0
            changed = True
    out = tuple(s for s in shifts)
    if out:
        m = min(out)
        out = tuple(s - m for s in out)
    for c in cols:
        if not is_homogeneous(c, out):
            raise InhomogeneousInput("no generator degrees make the matrix homogeneous")
    return out


def free_module(ring: QuotientRing, shifts: Sequence[int] | int) -> ModulePresentation:
    if isinstance(shifts, int):
        shifts = (0,) * shifts
    return ModulePresentation(ring, shifts, ())


def zero_module(ring: QuotientRing) -> ModulePresentation:
    return ModulePresentation(ring, (), ())


def cyclic_module(ring: QuotientRing, gens: Sequence[Polynomial | str], shift: int = 0) -> ModulePresentation:
    """``A/J`` for the ideal ``J`` generated by ``gens``."""
    cols = []
    for g in gens:
        if isinstance(g, str):
            g = parse_poly(g, ring.S)
        if g:
            cols.append({(0, e): c for e, c in g.terms.items()})
    return ModulePresentation(ring, (shift,), cols)


def residue_field(ring: QuotientRing) -> ModulePresentation:
    return cyclic_module(ring, ring.S.gens())


def power_quotient(ring: QuotientRing, n: int) -> ModulePresentation:
    """``A/m^n``."""
    nv = ring.nvars
    mons = [e for e in itertools.product(range(n + 1), repeat=nv) if sum(e) == n]
    cols = [{(0, e): ring.field.one} for e in mons]
    return ModulePresentation(ring, (0,), cols)


# ---------------------------------------------------------------------------
# maps


class ModuleMap:
    """Degree-0 map given by the images of the source generators in ``F_0(target)``."""

    def __init__(self, source: ModulePresentation, target: ModulePresentation, images: Sequence[Vec],
                 check: bool = True):
        if source.ring != target.ring:
            raise RingMismatch("source and target over different rings")
        if len(images) != source.rank:
            raise ShapeMismatch("one image per source generator is required")
        self.source = source
        self.target = target
        self.images = tuple(target.normal_form(dict(v)) for v in images)
        if check:
            self._check()

    def _check(self):
        for v, d in zip(self.images, self.source.shifts):
            if v and vec_degree(v, self.target.shifts) != d:
                raise InhomogeneousInput("map is not homogeneous of degree 0")
        if not self.is_well_defined():
            raise StableCMError("map does not send relations into relations")

    def is_well_defined(self) -> bool:
        fld = self.source.field
        for c in self.source.relations:
            if self.target.normal_form(vec_map_matrix(c, self.images, fld)):
                return False
        return True

    def apply(self, v: Vec) -> Vec:
        return self.target.normal_form(vec_map_matrix(v, self.images, self.source.field))

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        return ModuleMap(other.source, self.target, [self.apply(v) for v in other.images], check=False)

    def is_zero(self) -> bool:
        return not any(self.images)

    def constant_rank(self) -> int:
        """Rank of the induced map on ``M/mM -> N/mN`` (both presentations minimal)."""
        zero = (0,) * self.source.S.nvars
        rows = []
        for v in self.images:
            rows.append({p: c for (p, e), c in v.items() if e == zero})
        return matrix_rank(rows, self.source.field)

    def is_surjective(self) -> bool:
        tgt = self.target
        fld = tgt.field
        zero = (0,) * tgt.S.nvars
        gens = list(self.images)
        for p in range(tgt.rank):
            if not Syzygies(gens, tgt.shifts, tgt.S, tgt.ring.gb, tgt.relations) \
                    .with_source_degrees(self.source.shifts).in_span({(p, zero): fld.one}):
                return False
        return True

    def kernel(self) -> Tuple[ModulePresentation, List[Vec]]:
        """Kernel as a presentation plus its generators as vectors in ``F_0(source)``."""
        src, tgt = self.source, self.target
        syz = Syzygies(list(self.images), tgt.shifts, src.S, tgt.ring.gb, tgt.relations) \
            .with_source_degrees(src.shifts)
        gens = minimal_generators(syz.generators(minimal=False), src.shifts, src.S, src.ring.gb,
                                  src.relations)
        return submodule_presentation(src, gens), gens

    def is_injective(self) -> bool:
        K, _ = self.kernel()
        return K.is_zero()


def identity_map(M: ModulePresentation) -> ModuleMap:
    one = M.field.one
    zero = (0,) * M.S.nvars
    return ModuleMap(M, M, [{(i, zero): one} for i in range(M.rank)], check=False)


def zero_map(M: ModulePresentation, N: ModulePresentation) -> ModuleMap:
    return ModuleMap(M, N, [{} for _ in range(M.rank)], check=False)


def submodule_presentation(M: ModulePresentation, gens: Sequence[Vec]) -> ModulePresentation:
    """Presentation of the submodule of ``M`` generated by ``gens`` (vectors in ``F_0(M)``)."""
    gens = [g for g in gens if g]
    degs = [vec_degree(g, M.shifts) for g in gens]
    syz = Syzygies(gens, M.shifts, M.S, M.ring.gb, M.relations).with_source_degrees(degs)
    rels = syz.generators(minimal=True)
    return ModulePresentation(M.ring, degs, rels)


# ---------------------------------------------------------------------------
# minimalization


def _unit_position(c: Vec, zero: Exps):
    best = None
    for (p, e), v in c.items():
        if e == zero and (best is None or p > best[0]):
            best = (p, v)
    return best


def minimalize_with_maps(M: ModulePresentation):
    """Minimal presentation ``M'`` together with the inverse isomorphisms.

    Returns ``(M', to_min, from_min)``: ``to_min[i]`` is the image of the
    old generator ``i`` in ``F_0(M')`` and ``from_min[k]`` the image of the
    new generator ``k`` in ``F_0(M)``.
    """
    cached = M._cache.get("minmaps")
    if cached is not None:
        return cached
    ring = M.ring
    fld = M.field
    S = M.S
    zero = (0,) * S.nvars
    qgb = groebner_basis([], M.shifts, S, ring.gb) if ring.gb else None
    cols = []
    for c in M.relations:
        c = qgb.normal_form(c) if qgb is not None else dict(c)
        if c:
            cols.append(c)
    images: List[Vec] = [{(i, zero): fld.one} for i in range(M.rank)]
    alive = list(range(M.rank))
    while True:
        pick = None
        for j, c in enumerate(cols):
            u = _unit_position(c, zero)
            if u is not None:
                pick = (j, u)
                break
        if pick is None:
            break
        j, (p, u) = pick
        piv = cols.pop(j)
        inv = fld.inv(u)

        def eliminate(v: Vec) -> Vec:
            comp = {e: c for (q, e), c in v.items() if q == p}
            if not comp:
                return v
            comp = {e: fld.reduce(-c * inv) for e, c in comp.items()}
            return vec_add(v, vec_mul_poly(piv, comp, fld), fld)

        cols = [eliminate(c) for c in cols]
        if qgb is not None:
            cols = [qgb.normal_form(c) for c in cols]
        cols = [c for c in cols if c]
        images = [eliminate(v) for v in images]
        alive.remove(p)
    mapping = {old: new for new, old in enumerate(alive)}
    shifts = tuple(M.shifts[i] for i in alive)
    cols = [vec_reindex(c, mapping) for c in cols]
    cols = minimal_generators(cols, shifts, S, ring.gb)
    Mmin = ModulePresentation(ring, shifts, cols, check=False)
    to_min = [Mmin.normal_form(vec_reindex(v, mapping)) for v in images]
    from_min = [{(old, zero): fld.one} for old in alive]
    out = (Mmin, to_min, from_min)
    M._cache["minmaps"] = out
    Mmin._cache["minmaps"] = (Mmin, [{(i, zero): fld.one} for i in range(Mmin.rank)],
                              [{(i, zero): fld.one} for i in range(Mmin.rank)])
    return out


def minimalize(M: ModulePresentation) -> ModulePresentation:
    return minimalize_with_maps(M)[0]


def minimal_map(f: ModuleMap) -> ModuleMap:
    """The same map between the minimalized source and target."""
    S1, _, from1 = minimalize_with_maps(f.source)
    T1, to2, _ = minimalize_with_maps(f.target)
    fld = f.source.field
    imgs = [vec_map_matrix(f.apply(v), to2, fld) for v in from1]
    return ModuleMap(S1, T1, imgs, check=False)


# ---------------------------------------------------------------------------
# direct sums and shifts


def direct_sum(*mods: ModulePresentation) -> ModulePresentation:
    if not mods:
        raise ShapeMismatch("direct sum of nothing")
    ring = mods[0].ring
    shifts: List[int] = []
    rels: List[Vec] = []
    for M in mods:
        if M.ring != ring:
            raise RingMismatch("summands over different rings")
        off = len(shifts)
        rels.extend({(p + off, e): c for (p, e), c in r.items()} for r in M.relations)
        shifts.extend(M.shifts)
    return ModulePresentation(ring, shifts, rels, check=False)


def direct_power(M: ModulePresentation, k: int) -> ModulePresentation:
    return direct_sum(*([M] * k)) if k > 0 else zero_module(M.ring)


def shift(M: ModulePresentation, a: int) -> ModulePresentation:
    """Move every generator up by ``a`` degrees (the module ``M(-a)``)."""
    return ModulePresentation(M.ring, [s + a for s in M.shifts], M.relations, check=False)


# ---------------------------------------------------------------------------
# syzygies and resolutions


def syzygy_embedding(M: ModulePresentation) -> Tuple[ModulePresentation, List[Vec], ModulePresentation]:
    """``(ΩM, generators of ΩM inside F_0, minimal M)``."""
    Mm = minimalize(M)
    gens = list(Mm.relations)
    degs = Mm.relation_degrees()
    rels = kernel(gens, degs, Mm.shifts, Mm.S, Mm.ring.gb)
    return ModulePresentation(Mm.ring, degs, rels, check=False), gens, Mm


def syzygy_module(M: ModulePresentation, times: int = 1) -> ModulePresentation:
    out = M
    for _ in range(times):
        out = syzygy_embedding(out)[0]
    return out


def resolve(M: ModulePresentation, length: int):
    Mm = minimalize(M)
    return free_resolution(Mm.relations, Mm.shifts, Mm.S, Mm.ring.gb, length)


def rows_of(cols: Sequence[Vec], nrows: int) -> List[Vec]:
    """Transpose: the rows of a column list, each as a vector indexed by column."""
    rows: List[Vec] = [dict() for _ in range(nrows)]
    for j, c in enumerate(cols):
        for (p, e), v in c.items():
            rows[p][(j, e)] = v
    return rows


# ---------------------------------------------------------------------------
# duals


def dual_generators(M: ModulePresentation) -> Tuple[List[Vec], Tuple[int, ...]]:
    """Minimal generators of ``Hom(M, A)`` as vectors in ``F_0^*`` and their degrees.

    ``F_0^*`` has shifts ``-shifts``; a vector ``phi`` is the functional
    ``e_i -> phi_i``.
    """
    dual_shifts = tuple(-s for s in M.shifts)
    rel_shifts = tuple(-d for d in M.relation_degrees())
    rows = rows_of(M.relations, M.rank)
    gens = kernel(rows, dual_shifts, rel_shifts, M.S, M.ring.gb)
    return gens, tuple(vec_degree(g, dual_shifts) for g in gens)


def dual(M: ModulePresentation) -> ModulePresentation:
    """``M^* = Hom_A(M, A)``."""
    Mm = minimalize(M)
    gens, degs = dual_generators(Mm)
    rels = kernel(gens, degs, tuple(-s for s in Mm.shifts), Mm.S, Mm.ring.gb)
    return minimalize(ModulePresentation(Mm.ring, degs, rels, check=False))


def transpose(M: ModulePresentation) -> ModulePresentation:
    """``Tr M = coker(F_0^* -> F_1^*)`` for a minimal presentation."""
    Mm = minimalize(M)
    shifts = tuple(-d for d in Mm.relation_degrees())
    cols = rows_of(Mm.relations, Mm.rank)
    return minimalize(ModulePresentation(Mm.ring, shifts, cols, check=False))


@dataclass
class Embedding:
    """``0 -> M -> Q -> Ω^{-1}M -> 0`` with ``Q`` free."""

    module: ModulePresentation          # minimal M
    free: ModulePresentation            # Q
    images: List[Vec]                   # i(e_j) in Q
    cosyzygy: ModulePresentation        # coker i, minimal
    to_cosyzygy: List[Vec]              # images of Q's basis in F_0(cosyzygy)

    def map(self) -> ModuleMap:
        return ModuleMap(self.module, self.free, self.images, check=False)


def cosyzygy_embedding(M: ModulePresentation, check_mcm: bool = True) -> Embedding:
    cached = M._cache.get("cosyz")
    if cached is not None:
        return cached
    if check_mcm and not is_mcm(M):
        raise NotMCM("cosyzygy requires a maximal Cohen-Macaulay module")
    Mm = minimalize(M)
    gens, degs = dual_generators(Mm)
    # Q = (A^g)^* has generators in degrees -deg(phi_j)
    qshifts = tuple(-a for a in degs)
    images: List[Vec] = []
    for i in range(Mm.rank):
        v: Vec = {}
        for j, phi in enumerate(gens):
            for (p, e), c in phi.items():
                if p == i:
                    v[(j, e)] = c
        images.append(v)
    Q = ModulePresentation(Mm.ring, qshifts, (), check=False)
    C = ModulePresentation(Mm.ring, qshifts, images, check=False)
    Cm, to_min, _ = minimalize_with_maps(C)
    emb = Embedding(Mm, Q, images, Cm, to_min)
    M._cache["cosyz"] = emb
    return emb


def cosyzygy_module(M: ModulePresentation) -> ModulePresentation:
    """``Ω^{-1}M`` for a maximal Cohen-Macaulay module."""
    return cosyzygy_embedding(M).cosyzygy


def ext_dual(N: ModulePresentation, n: int) -> ModulePresentation:
    """``Ext^n_A(N, A)``; raises WrongCodimension if a lower Ext is nonzero."""
    if n < 0:
        raise WrongCodimension("codimension must be nonnegative")
    if n == 0:
        return dual(N)
    res = resolve(N, n + 1)
    mats, shifts = res.matrices, res.shifts
    S, q = N.S, N.ring.gb

    def dual_shift(i):
        return tuple(-s for s in shifts[i]) if i < len(shifts) else ()

    def dmat(i):
        # transpose of d_i : F_i -> F_{i-1}, as columns indexed by F_{i-1}^*
        if i - 1 >= len(mats):
            return [dict() for _ in range(len(shifts[i - 1]) if i - 1 < len(shifts) else 0)]
        return rows_of(mats[i - 1], len(shifts[i - 1]))

    for i in range(n + 1):
        if i >= len(shifts):
            if i < n:
                continue
            break
        cols = dmat(i + 1)
        ker = kernel(cols, dual_shift(i), dual_shift(i + 1), S, q)
        if i < n:
            if not ker:
                continue
            img = dmat(i) if i > 0 else []
            if not submodule_contains(img, ker, dual_shift(i), S, q):
                raise WrongCodimension(f"Ext^{i}(N, A) is nonzero; N is not CM of codimension {n}")
        else:
            img = dmat(i)
            degs = tuple(vec_degree(g, dual_shift(i)) for g in ker)
            if not ker:
                return zero_module(N.ring)
            syz = Syzygies(ker, dual_shift(i), S, q, img).with_source_degrees(degs)
            rels = syz.generators(minimal=True)
            return minimalize(ModulePresentation(N.ring, degs, rels, check=False))
    return zero_module(N.ring)


# ---------------------------------------------------------------------------
# cones


@dataclass
class TriangleWitness:
    """``M -> N -> C -> Ω^{-1}M`` and the three maps."""

    M: ModulePresentation
    N: ModulePresentation
    C: ModulePresentation
    shifted_M: ModulePresentation
    f: ModuleMap
    g: ModuleMap
    h: ModuleMap
    provenance: str = "cone"
    through_free: Optional[Tuple[ModuleMap, ModuleMap]] = None   # M -> Q -> C

    def certify(self) -> Dict[str, bool]:
        """Maps well defined, ``h o g = 0`` and ``g o f`` factoring through the free module."""
        cert = {
            "maps_well_defined": all(m.is_well_defined() for m in (self.f, self.g, self.h)),
            "hg_zero": self.h.compose(self.g).is_zero(),
        }
        if self.through_free is not None:
            i, q = self.through_free
            gf = self.g.compose(self.f)
            qi = q.compose(i)
            cert["gf_through_free"] = all(not self.C.normal_form(vec_add(a, b, self.C.field, -1))
                                          for a, b in zip(gf.images, qi.images))
        return cert

    def modules(self):
        return [self.M, self.N, self.C, self.shifted_M]


def cone(f: ModuleMap, check_mcm: bool = True) -> TriangleWitness:
    """Pushout of ``f`` along ``i: M -> Q``; ``C(f) = coker (i, -f)``."""
    M, N = f.source, f.target
    if check_mcm:
        for X in (M, N):
            if not is_mcm(X):
                raise NotMCM("cone needs maximal Cohen-Macaulay source and target")
    fm = minimal_map(f)
    M, N = fm.source, fm.target
    emb = cosyzygy_embedding(M, check_mcm=False)
    fld = M.field
    g = emb.free.rank
    shifts = emb.free.shifts + N.shifts
    rels = [{(p + g, e): c for (p, e), c in r.items()} for r in N.relations]
    for i in range(M.rank):
        v = dict(emb.images[i])
        v = vec_add(v, {(p + g, e): c for (p, e), c in fm.images[i].items()}, fld, -1)
        rels.append(v)
    C0 = ModulePresentation(M.ring, shifts, rels, check=False)
    C, to_min, _ = minimalize_with_maps(C0)
    gmap = ModuleMap(N, C, [to_min[g + j] for j in range(N.rank)], check=False)
    Om = emb.cosyzygy
    himgs = [emb.to_cosyzygy[j] for j in range(g)] + [{} for _ in range(N.rank)]
    h0 = ModuleMap(C0, Om, himgs, check=False)
    _, _, from_min = minimalize_with_maps(C0)
    hmap = ModuleMap(C, Om, [h0.apply(v) for v in from_min], check=False)
    qmap = ModuleMap(emb.free, C, [to_min[j] for j in range(g)], check=False)
    return TriangleWitness(M, N, C, Om, fm, gmap, hmap, "cone", (emb.map(), qmap))


# ---------------------------------------------------------------------------
# invariants


def projective_dimension_over_S(M: ModulePresentation) -> int:
    """Length of a minimal S-free resolution of ``M`` viewed as an S-module."""
    S = M.S
    cols = list(M.relations) + quotient_relations(M.ring.gb, M.rank)
    # minimal generators of the S-submodule (relations + I F_0)
    cols = minimal_generators(cols, M.shifts, S)
    zero = (0,) * S.nvars
    if any(e == zero for c in cols for (_, e) in c):
        # the presentation is not minimal over S; recompute with a minimal one
        Mm = minimalize(M)
        if Mm.rank != M.rank:
            return projective_dimension_over_S(Mm)
    res = free_resolution(cols, M.shifts, S, (), S.nvars + 1)
    return len([m for m in res.matrices if m])


def is_mcm(M: ModulePresentation) -> bool:
    """Depth by Auslander-Buchsbaum over the polynomial ring."""
    got = M._cache.get("mcm")
    if got is None:
        Mm = minimalize(M)
        if Mm.rank == 0:
            got = True
        else:
            got = Mm.S.nvars - projective_dimension_over_S(Mm) == M.ring.dim
        M._cache["mcm"] = got
    return got


def depth(M: ModulePresentation) -> int:
    Mm = minimalize(M)
    return Mm.S.nvars - projective_dimension_over_S(Mm)


@dataclass(frozen=True)
class ModuleInvariants:
    dim: int
    codim: int
    mu: int
    rank: Optional[int]


def module_invariants(M: ModulePresentation) -> ModuleInvariants:
    from .hilbert import hilbert_series, multiplicity

    Mm = minimalize(M)
    hs = hilbert_series(Mm)
    d = hs.dim
    A = free_module(M.ring, 1)
    rk = None
    if d == M.ring.dim:
        eM, eA = multiplicity(Mm), multiplicity(A)
        if eM % eA == 0:
            rk = eM // eA
    elif d < M.ring.dim:
        rk = 0
    return ModuleInvariants(d, M.ring.dim - d, Mm.rank, rk)


# ---------------------------------------------------------------------------
# homomorphisms and stable isomorphism


def _degree_basis(M: ModulePresentation, t: int) -> List[Tuple[int, Exps]]:
    """Standard monomials (w.r.t. ``M.gb()``) of ``F_0(M)`` in degree ``t``."""
    from .hilbert import standard_monomials

    g = M.gb()
    out = []
    for p, s in enumerate(M.shifts):
        if t - s < 0:
            continue
        lead = g.leading_monomials(p)
        for e in standard_monomials(lead, M.S.nvars, t - s):
            out.append((p, e))
    return out


def hom_space(M: ModulePresentation, N: ModulePresentation, a: int = 0) -> List[List[Vec]]:
    """Basis of homogeneous maps ``M -> N`` of degree ``a``.

    Each map is a list of generator images (vectors in ``F_0(N)``).  The
    unknowns are the coordinates of the images in the standard-monomial basis
    of ``N``; the equations say every relation of ``M`` maps into the
    relations of ``N``.
    """
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    fld = M.field
    unknowns: List[Tuple[int, Tuple[int, Exps]]] = []
    for i, d in enumerate(M.shifts):
        for b in _degree_basis(N, d + a):
            unknowns.append((i, b))
    if not unknowns:
        return []
    # contribution of each unknown to each relation
    eq_index: Dict[Tuple[int, Tuple[int, Exps]], int] = {}
    rows: Dict[int, Dict[int, object]] = {}
    by_gen: Dict[int, List[int]] = {}
    for u, (i, _) in enumerate(unknowns):
        by_gen.setdefault(i, []).append(u)
    for r_idx, r in enumerate(M.relations):
        comps: Dict[int, Dict[Exps, object]] = {}
        for (p, e), c in r.items():
            comps.setdefault(p, {})[e] = c
        for i, poly in comps.items():
            for u in by_gen.get(i, ()):
                _, (q, e) = unknowns[u]
                v = N.normal_form(vec_mul_poly({(q, e): fld.one}, poly, fld))
                for term, c in v.items():
                    key = (r_idx, term)
                    k = eq_index.setdefault(key, len(eq_index))
                    rows.setdefault(k, {})[u] = c
    basis = nullspace(list(rows.values()), len(unknowns), fld)
    maps = []
    for vec in basis:
        imgs: List[Vec] = [dict() for _ in range(M.rank)]
        for u, c in enumerate(vec):
            if c:
                i, (q, e) = unknowns[u]
                imgs[i][(q, e)] = c
        maps.append(imgs)
    return maps


def free_rank(M: ModulePresentation) -> Tuple[int, List[int]]:
    """Rank of the largest free summand of a minimal ``M`` and generators spanning one."""
    Mm = minimalize(M)
    gens, degs = dual_generators(Mm)
    zero = (0,) * Mm.S.nvars
    rows = []
    for i in range(Mm.rank):
        rows.append({j: c for j, phi in enumerate(gens) for (p, e), c in phi.items() if p == i and e == zero})
    ech = Echelon(Mm.field)
    chosen = []
    for i, r in enumerate(rows):
        if r and ech.add(r):
            chosen.append(i)
    return len(chosen), chosen


def strip_free(M: ModulePresentation) -> Tuple[ModulePresentation, int]:
    """Minimal ``M'`` with ``M = M' (+) A^r``; returns ``(M', r)``."""
    Mm = minimalize(M)
    r, chosen = free_rank(Mm)
    if not r:
        return Mm, 0
    zero = (0,) * Mm.S.nvars
    rels = list(Mm.relations) + [{(i, zero): Mm.field.one} for i in chosen]
    return minimalize(ModulePresentation(Mm.ring, Mm.shifts, rels, check=False)), r


def is_stably_free(M: ModulePresentation) -> bool:
    return strip_free(M)[0].rank == 0


@dataclass
class StableIsoVerdict:
    verdict: str                            # "yes", "no", "unknown"
    reason: str
    witness: Optional[ModuleMap] = None

    def __bool__(self):
        return self.verdict == "yes"


def _random_scalar(rng: random.Random, fld):
    if fld.p:
        return rng.randrange(fld.p)
    return fld(rng.randint(-4, 4))


def find_isomorphism(M: ModulePresentation, N: ModulePresentation, a: int, budget: int = 200,
                     seed: int = 0) -> Optional[ModuleMap]:
    """Search degree-``a`` maps ``M -> N`` for a surjective one; with equal
    Hilbert series (shifted by ``a``) surjective means bijective."""
    if M.rank != N.rank:
        return None
    basis = hom_space(M, N, a)
    if not basis:
        return None
    fld = M.field
    Ns = shift(N, -a)
    zero = (0,) * M.S.nvars

    def build(coeffs):
        imgs: List[Vec] = [dict() for _ in range(M.rank)]
        for c, mp in zip(coeffs, basis):
            if not c:
                continue
            for i in range(M.rank):
                imgs[i] = vec_add(imgs[i], vec_scale(mp[i], c, fld), fld)
        return imgs

    def surjective(imgs):
        rows = [{p: c for (p, e), c in v.items() if e == zero} for v in imgs]
        return matrix_rank(rows, fld) == N.rank

    candidates = []
    if fld.p and fld.p ** len(basis) <= budget:
        candidates = itertools.product(range(fld.p), repeat=len(basis))
    else:
        rng = random.Random(seed)
        candidates = ([_random_scalar(rng, fld) for _ in basis] for _ in range(budget))
    # single basis elements first: cheap and often already isomorphisms
    firsts = [[fld.one if k == j else fld.zero for k in range(len(basis))] for j in range(len(basis))]
    for coeffs in itertools.chain(firsts, candidates):
        imgs = build(coeffs)
        if surjective(imgs):
            return ModuleMap(M, Ns, imgs, check=False)
    return None


def is_stably_iso(M: ModulePresentation, N: ModulePresentation, budget: int = 200,
                  seed: int = 0) -> StableIsoVerdict:
    """Three-valued stable isomorphism test.

    Free summands are split off first.  ``no`` is only returned on a
    mismatch of invariants that do not see the grading (number of
    generators, Hilbert-Samuel values of the stripped parts); ``yes``
    carries an explicit isomorphism between the stripped parts.
    """
    from .hilbert import hilbert_samuel, hilbert_series

    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    Ms, _ = strip_free(M)
    Ns, _ = strip_free(N)
    if Ms.rank == 0 and Ns.rank == 0:
        return StableIsoVerdict("yes", "both stably free")
    if Ms.rank != Ns.rank:
        return StableIsoVerdict("no", f"minimal generator counts differ after stripping ({Ms.rank} vs {Ns.rank})")
    hm, hn = hilbert_series(Ms), hilbert_series(Ns)
    if hm.dim != hn.dim:
        return StableIsoVerdict("no", "dimensions differ")
    for n in range(0, 6):
        a, b = hilbert_samuel(Ms, n), hilbert_samuel(Ns, n)
        if a != b:
            return StableIsoVerdict("no", f"Hilbert-Samuel values differ at n={n} ({a} vs {b})")
    a = hn.shift_against(hm)
    if a is None:
        return StableIsoVerdict("unknown", "Hilbert series agree on no global shift")
    phi = find_isomorphism(Ms, Ns, a, budget, seed)
    if phi is None:
        return StableIsoVerdict("unknown", "isomorphism search budget exhausted")
    return StableIsoVerdict("yes", f"isomorphism of degree {a} between stripped parts", phi)
