"""Buchberger's algorithm for graded submodules of shifted free S-modules.

A module element is a ``Vec``: a dict mapping ``(position, exponents)`` to a
nonzero coefficient.  A submodule of a quotient ``A = S/I`` is handled by
adjoining ``f * e_j`` for every generator ``f`` of the Groebner basis of
``I`` and every basis vector ``e_j``; the same engine therefore serves S
and A.

Everything here assumes homogeneous input with respect to the shifted
grading ``deg(m * e_j) = deg(m) + shifts[j]``.  The main loop walks the
degrees upward, which is what lets :func:`buchberger` report a minimal
generating subset of its input for free.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InhomogeneousInput, NonMinimalInput, ShapeMismatch, StableCMError
from .polyalg import BaseField, Exps, PolyRing, Polynomial

Term = Tuple[int, Exps]
Vec = Dict[Term, object]


# ---------------------------------------------------------------------------
# module orders


class ModuleOrder:
    """Monomial order on terms ``(pos, exps)``; larger key means larger term.

    ``top``  term over position, lower index wins ties.
    ``pot``  position over term; ``ranks[pos]`` decides, larger rank is bigger.
    ``elim`` block elimination: every term of block 0 beats every term of
             block 1; term-over-position inside a block.
    """

    def __init__(self, kind: str = "top", ranks: Optional[Sequence[int]] = None,
                 blocks: Optional[Sequence[int]] = None):
        self.kind = kind
        self.ranks = tuple(ranks) if ranks is not None else None
        self.blocks = tuple(blocks) if blocks is not None else None
        self._cache: Dict[Term, tuple] = {}

    def key(self, t: Term):
        k = self._cache.get(t)
        if k is None:
            pos, e = t
            g = (sum(e), tuple(-a for a in reversed(e)))
            if self.kind == "top":
                k = (g, -pos)
            elif self.kind == "pot":
                k = (self.ranks[pos], g)
            else:
                k = (-self.blocks[pos], g, -pos)
            self._cache[t] = k
        return k


TOP = "top"


# ---------------------------------------------------------------------------
# raw vector helpers


def vec_degree(v: Vec, shifts: Sequence[int]) -> Optional[int]:
    """Common degree of a homogeneous vector (None for zero)."""
    degs = {sum(e) + shifts[p] for (p, e) in v}
    if not degs:
        return None
    if len(degs) > 1:
        raise InhomogeneousInput(f"vector has terms in degrees {sorted(degs)}")
    return degs.pop()


def is_homogeneous(v: Vec, shifts: Sequence[int]) -> bool:
    return len({sum(e) + shifts[p] for (p, e) in v}) <= 1


def vec_add(a: Vec, b: Vec, fld: BaseField, c=1) -> Vec:
    """a + c*b."""
    out = dict(a)
    p = fld.p
    for t, v in b.items():
        w = out.get(t, 0) + c * v
        if p:
            w %= p
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def vec_scale(a: Vec, c, fld: BaseField) -> Vec:
    if not c:
        return {}
    p = fld.p
    if p:
        return {t: v * c % p for t, v in a.items()}
    return {t: v * c for t, v in a.items()}


def vec_mul_poly(a: Vec, f: Dict[Exps, object], fld: BaseField) -> Vec:
    """Multiply every component of ``a`` by the polynomial ``f`` (exps dict)."""
    out: Vec = {}
    p = fld.p
    for (pos, e), v in a.items():
        for ef, cf in f.items():
            t = (pos, tuple(x + y for x, y in zip(e, ef)))
            out[t] = out.get(t, 0) + v * cf
    if p:
        return {t: v % p for t, v in out.items() if v % p}
    return {t: v for t, v in out.items() if v}


def vec_mul_term(a: Vec, m: Exps, c, fld: BaseField) -> Vec:
    p = fld.p
    if p:
        return {(pos, tuple(x + y for x, y in zip(e, m))): v * c % p for (pos, e), v in a.items()}
    return {(pos, tuple(x + y for x, y in zip(e, m))): v * c for (pos, e), v in a.items()}


def vec_from_polys(polys: Sequence[Polynomial]) -> Vec:
    out: Vec = {}
    for i, f in enumerate(polys):
        for e, c in f.terms.items():
            out[(i, e)] = c
    return out


def vec_to_polys(v: Vec, rank: int, ring: PolyRing) -> List[Polynomial]:
    comps: List[Dict[Exps, object]] = [dict() for _ in range(rank)]
    for (pos, e), c in v.items():
        comps[pos][e] = c
    return [Polynomial(ring, d) for d in comps]


def vec_component(v: Vec, pos: int) -> Dict[Exps, object]:
    return {e: c for (p, e), c in v.items() if p == pos}


def vec_reindex(v: Vec, mapping: Dict[int, int]) -> Vec:
    """Move components; positions absent from ``mapping`` are dropped."""
    return {(mapping[p], e): c for (p, e), c in v.items() if p in mapping}


def vec_map_matrix(v: Vec, images: Sequence[Vec], fld: BaseField) -> Vec:
    """Apply the linear map sending ``e_j`` to ``images[j]``."""
    out: Vec = {}
    for j in sorted({p for (p, _) in v}):
        comp = vec_component(v, j)
        if images[j]:
            out = vec_add(out, vec_mul_poly(images[j], comp, fld), fld)
    return out


def _divides(a: Exps, b: Exps) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(x if x > y else y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# reduction


class _Basis:
    """Groebner elements indexed by leading position for fast divisor lookup."""

    def __init__(self, order: ModuleOrder, fld: BaseField):
        self.order = order
        self.fld = fld
        self.elems: List[Vec] = []
        self.lts: List[Term] = []
        self.by_pos: Dict[int, List[int]] = {}

    def append(self, v: Vec, lt: Term):
        self.elems.append(v)
        self.lts.append(lt)
        self.by_pos.setdefault(lt[0], []).append(len(self.elems) - 1)

    def divisor(self, t: Term) -> Optional[int]:
        pos, e = t
        for i in self.by_pos.get(pos, ()):
            if _divides(self.lts[i][1], e):
                return i
        return None

    def reduce(self, v: Vec, full: bool = True, keep_block: Optional[int] = None) -> Vec:
        """Reduce ``v``.  With ``keep_block`` set, stop as soon as the leading
        term leaves block 0 of an elimination order (used for lifting)."""
        key = self.order.key
        p = self.fld.p
        v = dict(v)
        rem: Vec = {}
        elems, lts = self.elems, self.lts
        while v:
            t = max(v, key=key)
            if keep_block is not None and self.order.blocks[t[0]] != 0:
                rem.update(v)
                return rem
            i = self.divisor(t)
            if i is None:
                if not full:
                    rem.update(v)
                    return rem
                rem[t] = v.pop(t)
                continue
            c = v[t]
            g = elems[i]
            m = tuple(x - y for x, y in zip(t[1], lts[i][1]))
            if p:
                for (q, eg), cg in g.items():
                    tt = (q, tuple(x + y for x, y in zip(eg, m)))
                    w = (v.get(tt, 0) - c * cg) % p
                    if w:
                        v[tt] = w
                    else:
                        v.pop(tt, None)
            else:
                for (q, eg), cg in g.items():
                    tt = (q, tuple(x + y for x, y in zip(eg, m)))
                    w = v.get(tt, 0) - c * cg
                    if w:
                        v[tt] = w
                    else:
                        v.pop(tt, None)
        return rem


def _monic(v: Vec, order: ModuleOrder, fld: BaseField) -> Tuple[Vec, Term]:
    lt = max(v, key=order.key)
    inv = fld.inv(v[lt])
    return vec_scale(v, inv, fld), lt


# ---------------------------------------------------------------------------
# Buchberger


@dataclass
class GBResult:
    elements: List[Vec]
    leading: List[Term]
    minimal: List[int]          # indices into the non-ambient input list
    order: ModuleOrder
    field: BaseField
    shifts: Tuple[int, ...]

    def basis(self) -> _Basis:
        b = _Basis(self.order, self.field)
        for v, lt in zip(self.elements, self.leading):
            b.append(v, lt)
        return b


def buchberger(gens: Sequence[Vec], shifts: Sequence[int], fld: BaseField,
               order: Optional[ModuleOrder] = None, ambient: Sequence[Vec] = (),
               reduce_result: bool = True) -> GBResult:
    """Homogeneous Buchberger with Gebauer-Moeller pair pruning.

    ``ambient`` vectors are part of the submodule but are never reported as
    minimal generators.  ``minimal`` lists the indices of ``gens`` forming a
    minimal generating set of ``<gens> + <ambient>`` modulo ``<ambient>``.
    """
    order = order or ModuleOrder("top")
    shifts = tuple(shifts)
    inputs = []
    for kind, seq in ((0, ambient), (1, gens)):
        for idx, v in enumerate(seq):
            if not v:
                continue
            inputs.append((vec_degree(v, shifts), kind, idx, v))
    inputs.sort(key=lambda x: (x[0], x[1], x[2]))

    B = _Basis(order, fld)
    active: List[bool] = []
    pairs: List[tuple] = []
    minimal: List[int] = []
    counter = 0

    def add(h: Vec):
        nonlocal counter
        h, lt = _monic(h, order, fld)
        pos, eh = lt
        new = len(B.elems)
        # candidate pairs with the same leading position
        cand = []
        for i in B.by_pos.get(pos, ()):
            if active[i]:
                cand.append((_lcm(B.lts[i][1], eh), i))
        # criterion M / F on the new pairs
        kept = []
        for L, i in cand:
            dominated = False
            for L2, j in cand:
                if j != i and _divides(L2, L) and (L2 != L or j < i):
                    dominated = True
                    break
            if not dominated:
                kept.append((L, i))
        # criterion B on old pairs
        if pairs:
            survivors = []
            for pr in pairs:
                _, _, L, pp, i, j = pr
                if pp == pos and _divides(eh, L):
                    Li = _lcm(B.lts[i][1], eh)
                    Lj = _lcm(B.lts[j][1], eh)
                    if Li != L and Lj != L:
                        continue
                survivors.append(pr)
            if len(survivors) != len(pairs):
                pairs[:] = survivors
                heapq.heapify(pairs)
        for i in B.by_pos.get(pos, ()):
            if active[i] and _divides(eh, B.lts[i][1]):
                active[i] = False
        B.append(h, lt)
        active.append(True)
        for L, i in kept:
            counter += 1
            heapq.heappush(pairs, (sum(L) + shifts[pos], counter, L, pos, i, new))

    def spoly(i: int, j: int, L: Exps) -> Vec:
        gi, gj = B.elems[i], B.elems[j]
        mi = tuple(x - y for x, y in zip(L, B.lts[i][1]))
        mj = tuple(x - y for x, y in zip(L, B.lts[j][1]))
        a = vec_mul_term(gi, mi, 1, fld)
        b = vec_mul_term(gj, mj, 1, fld)
        return vec_add(a, b, fld, -1)

    ptr = 0
    while ptr < len(inputs) or pairs:
        cands = []
        if ptr < len(inputs):
            cands.append(inputs[ptr][0])
        if pairs:
            cands.append(pairs[0][0])
        t = min(cands)
        while True:
            while pairs and pairs[0][0] == t:
                _, _, L, _, i, j = heapq.heappop(pairs)
                r = B.reduce(spoly(i, j, L), full=True)
                if r:
                    add(r)
            if ptr < len(inputs) and inputs[ptr][0] == t:
                _, kind, idx, v = inputs[ptr]
                ptr += 1
                r = B.reduce(v, full=True)
                if r:
                    add(r)
                    if kind == 1:
                        minimal.append(idx)
                continue
            break

    elems = [v for v, a in zip(B.elems, active) if a]
    lts = [lt for lt, a in zip(B.lts, active) if a]
    if reduce_result:
        elems, lts = _interreduce(elems, lts, order, fld)
    return GBResult(elems, lts, sorted(minimal), order, fld, shifts)


def _interreduce(elems: List[Vec], lts: List[Term], order: ModuleOrder, fld: BaseField):
    # drop elements whose leading term is divisible by another leading term
    keep = []
    for i, (pi, ei) in enumerate(lts):
        redundant = False
        for j, (pj, ej) in enumerate(lts):
            if j != i and pj == pi and _divides(ej, ei) and (ej != ei or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    elems = [elems[i] for i in keep]
    lts = [lts[i] for i in keep]
    idx = sorted(range(len(elems)), key=lambda i: order.key(lts[i]), reverse=True)
    elems = [elems[i] for i in idx]
    lts = [lts[i] for i in idx]
    out = []
    for i in range(len(elems)):
        B = _Basis(order, fld)
        for j in range(len(elems)):
            if j != i:
                B.append(elems[j], lts[j])
        lead = {lts[i]: elems[i][lts[i]]}
        tail = {t: c for t, c in elems[i].items() if t != lts[i]}
        out.append(vec_add(lead, B.reduce(tail, full=True), fld))
    return out, lts


# ---------------------------------------------------------------------------
# public wrappers


def quotient_relations(ideal_gb: Sequence[Dict[Exps, object]], rank: int) -> List[Vec]:
    """The vectors ``f * e_j`` realizing ``I * S^rank``."""
    out = []
    for j in range(rank):
        for f in ideal_gb:
            out.append({(j, e): c for e, c in f.items()})
    return out


@dataclass
class GroebnerBasis:
    """A Groebner basis of ``<generators> + I*F`` inside a shifted free module."""

    ring: PolyRing
    shifts: Tuple[int, ...]
    result: GBResult
    quotient: Tuple[Dict[Exps, object], ...] = ()
    _basis: Optional[_Basis] = field(default=None, repr=False)

    @property
    def elements(self) -> List[Vec]:
        return self.result.elements

    @property
    def leading_terms(self) -> List[Term]:
        return self.result.leading

    @property
    def order(self) -> ModuleOrder:
        return self.result.order

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def _b(self) -> _Basis:
        if self._basis is None:
            self._basis = self.result.basis()
        return self._basis

    def normal_form(self, v: Vec) -> Vec:
        for (p, _) in v:
            if p >= self.rank:
                raise ShapeMismatch("vector outside the ambient free module")
        return self._b().reduce(v, full=True)

    def contains(self, v: Vec) -> bool:
        return not self._b().reduce(v, full=False)

    def leading_monomials(self, pos: int) -> List[Exps]:
        return [e for (p, e) in self.leading_terms if p == pos]


def groebner_basis(generators: Sequence[Vec], shifts: Sequence[int], ring: PolyRing,
                   quotient: Sequence[Dict[Exps, object]] = (),
                   order: Optional[ModuleOrder] = None) -> GroebnerBasis:
    """Auto-reduced Groebner basis of ``<generators> + I*F``.

    ``quotient`` is a Groebner basis of the ideal ``I`` (exps dicts).
    """
    shifts = tuple(shifts)
    for v in generators:
        if not is_homogeneous(v, shifts):
            raise InhomogeneousInput("graded backend requires homogeneous generators")
    amb = quotient_relations(quotient, len(shifts))
    res = buchberger(list(generators), shifts, ring.field, order or ModuleOrder("top"), ambient=amb)
    return GroebnerBasis(ring, shifts, res, tuple(quotient))


def ideal_gb(polys: Sequence[Polynomial], ring: PolyRing) -> List[Dict[Exps, object]]:
    """Reduced Groebner basis of a homogeneous ideal, as exps dicts."""
    vecs = [{(0, e): c for e, c in f.terms.items()} for f in polys if f]
    if not vecs:
        return []
    gb = groebner_basis(vecs, (0,), ring)
    return [{e: c for (_, e), c in v.items()} for v in gb.elements]


def reduce_poly(f: Dict[Exps, object], gb: GroebnerBasis) -> Dict[Exps, object]:
    v = gb.normal_form({(0, e): c for e, c in f.items()})
    return {e: c for (_, e), c in v.items()}


# ---------------------------------------------------------------------------
# syzygies, kernels and lifting


class Syzygies:
    """Syzygies of ``g_1..g_m`` modulo a submodule, via block elimination.

    Works in ``F + S^m`` with ``(g_i, e_i)``; elements of the Groebner basis
    whose leading term lies in the second block generate
    ``{a : sum a_i g_i in <modulo> + I*F}``.  Reducing ``(v, 0)`` until the
    first block vanishes expresses ``v`` through the ``g_i`` (``lift``).
    """

    def __init__(self, gens: Sequence[Vec], shifts: Sequence[int], ring: PolyRing,
                 quotient: Sequence[Dict[Exps, object]] = (), modulo: Sequence[Vec] = ()):
        self.ring = ring
        self.fld = ring.field
        self.shifts = tuple(shifts)
        self.r = len(self.shifts)
        self.m = len(gens)
        self.quotient = tuple(quotient)
        src = []
        for g in gens:
            d = vec_degree(g, self.shifts)
            src.append(d)
        self.source_shifts = tuple(src)
        if any(d is None for d in src):
            # zero generators: their degree is unknown; callers pass them through
            # source_degrees when they matter
            pass
        self._gens = [dict(g) for g in gens]
        self._modulo = [dict(v) for v in modulo]
        self._res = None

    def with_source_degrees(self, degrees: Sequence[int]) -> "Syzygies":
        self.source_shifts = tuple(degrees)
        return self

    def _compute(self):
        if self._res is not None:
            return
        fld = self.fld
        r, m = self.r, self.m
        if any(d is None for d in self.source_shifts):
            raise StableCMError("zero generator with unknown degree; pass source degrees")
        total_shifts = self.shifts + self.source_shifts
        blocks = [0] * r + [1] * m
        order = ModuleOrder("elim", blocks=blocks)
        gens = []
        for i, g in enumerate(self._gens):
            v = dict(g)
            v[(r + i, (0,) * self.ring.nvars)] = fld.one
            gens.append(v)
        amb = quotient_relations(self.quotient, r) + list(self._modulo)
        for v in gens + amb:
            if not is_homogeneous(v, total_shifts):
                raise InhomogeneousInput("syzygy input not homogeneous")
        self._res = buchberger(gens, total_shifts, fld, order, ambient=amb)
        self._basis = self._res.basis()

    def generators(self, minimal: bool = True) -> List[Vec]:
        """Generators of the syzygy module in ``S^m`` (reduced mod I)."""
        self._compute()
        r = self.r
        mapping = {r + i: i for i in range(self.m)}
        raw = []
        for v, lt in zip(self._res.elements, self._res.leading):
            if lt[0] >= r:
                raw.append(vec_reindex(v, mapping))
        return minimal_generators(raw, self.source_shifts, self.ring, self.quotient) if minimal else raw

    def lift(self, v: Vec) -> Vec:
        """Coefficients ``a`` with ``v = sum a_i g_i`` modulo the submodule."""
        self._compute()
        rem = self._basis.reduce(v, full=False, keep_block=0)
        if any(p < self.r for (p, _) in rem):
            raise StableCMError("vector is not in the span of the generators")
        mapping = {self.r + i: i for i in range(self.m)}
        return vec_scale(vec_reindex(rem, mapping), self.fld.reduce(-1), self.fld)

    def in_span(self, v: Vec) -> bool:
        self._compute()
        rem = self._basis.reduce(v, full=False, keep_block=0)
        return not any(p < self.r for (p, _) in rem)


def minimal_generators(vecs: Sequence[Vec], shifts: Sequence[int], ring: PolyRing,
                       quotient: Sequence[Dict[Exps, object]] = (),
                       modulo: Sequence[Vec] = ()) -> List[Vec]:
    """A minimal generating subset of ``<vecs>`` modulo ``<modulo> + I*F``,
    each reduced modulo ``I``."""
    shifts = tuple(shifts)
    qgb = None
    if quotient:
        qgb = buchberger(quotient_relations(quotient, len(shifts)), shifts, ring.field, ModuleOrder("top")).basis()
    cleaned = []
    for v in vecs:
        w = qgb.reduce(v) if qgb is not None else dict(v)
        if w:
            cleaned.append(w)
    if not cleaned:
        return []
    amb = quotient_relations(quotient, len(shifts)) + list(modulo)
    res = buchberger(cleaned, shifts, ring.field, ModuleOrder("top"), ambient=amb, reduce_result=False)
    return [cleaned[i] for i in res.minimal]


def kernel(columns: Sequence[Vec], source_shifts: Sequence[int], target_shifts: Sequence[int],
           ring: PolyRing, quotient: Sequence[Dict[Exps, object]] = (),
           modulo: Sequence[Vec] = ()) -> List[Vec]:
    """Minimal generators of the kernel of ``A^m -> A^r / <modulo>``, ``e_i -> columns[i]``."""
    if len(columns) != len(source_shifts):
        raise ShapeMismatch("one column per source basis vector is required")
    for c, d in zip(columns, source_shifts):
        if c and vec_degree(c, target_shifts) != d:
            raise InhomogeneousInput("column degree does not match its source shift")
    syz = Syzygies(columns, target_shifts, ring, quotient, modulo).with_source_degrees(source_shifts)
    return syz.generators(minimal=True)


def resolution_matrices(relations: Sequence[Vec], gen_shifts: Sequence[int], ring: PolyRing,
                        quotient: Sequence[Dict[Exps, object]], length: int):
    """Minimal graded resolution matrices starting from a minimal presentation.

    Returns ``(matrices, shifts)`` where ``matrices[i]`` lists the columns of
    the (i+1)-st differential and ``shifts[i]`` the degrees of ``F_i``.
    """
    shifts = [tuple(gen_shifts)]
    mats: List[List[Vec]] = []
    cols = [dict(c) for c in relations]
    if length <= 0:
        return mats, shifts
    src = tuple(vec_degree(c, shifts[0]) for c in cols)
    mats.append(cols)
    shifts.append(src)
    while len(mats) < length and mats[-1]:
        prev = mats[-1]
        nxt = kernel(prev, shifts[-1], shifts[-2], ring, quotient)
        mats.append(nxt)
        shifts.append(tuple(vec_degree(c, shifts[-1]) for c in nxt))
    return mats, shifts


def submodule_contains(big: Sequence[Vec], small: Sequence[Vec], shifts: Sequence[int], ring: PolyRing,
                       quotient: Sequence[Dict[Exps, object]] = ()) -> bool:
    """Is ``<small> inside <big> + I*F``?"""
    gb = groebner_basis(list(big), shifts, ring, quotient)
    return all(gb.contains(v) for v in small)


@dataclass
class MinimalResolution:
    """Differentials ``d_1..d_n`` (column lists) and the shifts of ``F_0..F_n``."""

    matrices: List[List[Vec]]
    shifts: List[Tuple[int, ...]]
    ring: PolyRing
    quotient: Tuple[Dict[Exps, object], ...]
    terminated: bool
    periodic_from: Optional[int] = None

    @property
    def periodic(self) -> bool:
        return self.periodic_from is not None

    @property
    def length(self) -> int:
        return len(self.matrices)

    def betti(self) -> List[int]:
        return [len(s) for s in self.shifts]

    def audit(self) -> bool:
        """Composition vanishes, kernels lie in the next image, entries are non-units."""
        fld = self.ring.field
        zero = (0,) * self.ring.nvars
        for cols in self.matrices:
            for c in cols:
                if any(e == zero for (_, e) in c):
                    return False
        for i in range(len(self.matrices) - 1):
            d1, d2 = self.matrices[i], self.matrices[i + 1]
            gb = groebner_basis([], self.shifts[i], self.ring, self.quotient)
            for c in d2:
                if gb.normal_form(vec_map_matrix(c, d1, fld)):
                    return False
            ker = kernel(d1, self.shifts[i + 1], self.shifts[i], self.ring, self.quotient)
            if not submodule_contains(d2, ker, self.shifts[i + 1], self.ring, self.quotient):
                return False
        return True


def _same_image(a: Sequence[Vec], b: Sequence[Vec], shifts, ring, quotient) -> bool:
    return (submodule_contains(a, b, shifts, ring, quotient)
            and submodule_contains(b, a, shifts, ring, quotient))


def free_resolution(relations: Sequence[Vec], gen_shifts: Sequence[int], ring: PolyRing,
                    quotient: Sequence[Dict[Exps, object]], length: int) -> MinimalResolution:
    """Minimal resolution of ``coker(relations)``, capped at ``length`` differentials.

    The presentation must be minimal.  When ``d_{i+2}`` and ``d_i`` have the
    same image in free modules differing by a global shift the resolution is
    flagged periodic from ``i`` on.
    """
    zero = (0,) * ring.nvars
    for c in relations:
        if any(e == zero for (_, e) in c):
            raise NonMinimalInput("relation matrix has a unit entry; minimalize first")
        if not is_homogeneous(c, gen_shifts):
            raise InhomogeneousInput("relation column is not homogeneous")
    mats, shifts = resolution_matrices(relations, gen_shifts, ring, quotient, length)
    terminated = bool(mats) and not mats[-1] or not relations
    if terminated and mats and not mats[-1]:
        mats.pop()
        shifts.pop()
    res = MinimalResolution(mats, shifts, ring, tuple(quotient), terminated)
    for i in range(len(mats) - 2):
        s0, s2 = shifts[i], shifts[i + 2]
        if len(s0) != len(s2) or len(shifts[i + 1]) != len(shifts[i + 3]):
            continue
        deltas = {b - a for a, b in zip(s0, s2)}
        if len(deltas) != 1:
            continue
        if _same_image(mats[i], mats[i + 2], s0, ring, quotient):
            res.periodic_from = i + 1
            break
    return res
