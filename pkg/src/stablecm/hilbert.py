"""Hilbert series, Hilbert-Samuel functions and Hilbert coefficients.

The Samuel function ``n -> length(M / m^{n+1} M)`` is read off a single
Groebner basis of the relation module under a position-over-term order in
which generators of larger degree dominate.  In degree ``t`` the submodule
``m^{n+1} F_0`` consists of whole components (those with ``t - d_i > n``),
and with that order the standard monomials of the surviving components stay
independent, so the length is a count of standard monomials of degree at
most ``n`` in each component.  :func:`hilbert_samuel_linear` recomputes the
same number by plain linear algebra and serves as a cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import NoStabilization, StableCMError
from .groebner import ModuleOrder, buchberger, quotient_relations
from .linalg import rank as matrix_rank

IntPoly = Dict[int, int]


# ---------------------------------------------------------------------------
# integer Laurent polynomials in z


def poly_mul_int(a: IntPoly, b: IntPoly) -> IntPoly:
    out: IntPoly = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def poly_add_int(a: IntPoly, b: IntPoly, c: int = 1) -> IntPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _divide_one_minus_z(a: IntPoly) -> IntPoly:
    """Exact division by ``1 - z`` (caller ensures ``a(1) == 0``)."""
    if not a:
        return {}
    lo, hi = min(a), max(a)
    q: IntPoly = {}
    carry = 0
    for k in range(lo, hi):
        carry += a.get(k, 0)
        if carry:
            q[k] = carry
    return q


def pole_order(numerator: IntPoly, nvars: int) -> int:
    """Order of the pole at ``z = 1`` of ``numerator / (1-z)^nvars`` (-1 for zero)."""
    if not numerator:
        return -1
    a = dict(numerator)
    k = 0
    while sum(a.values()) == 0:
        a = _divide_one_minus_z(a)
        k += 1
    return nvars - k


def format_int_poly(a: IntPoly, var: str = "z") -> str:
    if not a:
        return "0"
    parts = []
    for k in sorted(a):
        c = a[k]
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------
# monomial ideals


def _minimal_monomials(gens) -> Tuple[Tuple[int, ...], ...]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: List[Tuple[int, ...]] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


@lru_cache(maxsize=200000)
def _numerator(gens: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[int, int], ...]:
    if not gens:
        return ((0, 1),)
    if any(sum(g) == 0 for g in gens):
        return ()
    # pairwise coprime generators: a regular sequence of monomials
    support = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    if all(not (support[i] & support[j]) for i in range(len(gens)) for j in range(i)):
        out: IntPoly = {0: 1}
        for g in gens:
            out = poly_mul_int(out, {0: 1, sum(g): -1})
        return tuple(sorted(out.items()))
    # pivot on the last generator: N(J) = N(J') - z^deg(g) N(J' : g)
    g = gens[-1]
    rest = gens[:-1]
    colon = _minimal_monomials(tuple(tuple(max(a - b, 0) for a, b in zip(m, g)) for m in rest))
    n1 = dict(_numerator(rest))
    n2 = dict(_numerator(colon))
    out = poly_add_int(n1, {k + sum(g): v for k, v in n2.items()}, -1)
    return tuple(sorted(out.items()))


def monomial_numerator(lead: Sequence[Tuple[int, ...]], nvars: int) -> IntPoly:
    """Numerator ``N`` with ``HS(S/J) = N / (1-z)^nvars`` for the monomial ideal ``J``."""
    return dict(_numerator(_minimal_monomials(tuple(tuple(e) for e in lead))))


def standard_monomials(lead: Sequence[Tuple[int, ...]], nvars: int, degree: int) -> List[Tuple[int, ...]]:
    """Monomials of the given degree outside the monomial ideal ``(lead)``, in a fixed order."""
    if degree < 0:
        return []
    lead = list(lead)
    out = []

    def rec(i, left, cur):
        if i == nvars - 1:
            e = tuple(cur + [left])
            if not any(all(a <= b for a, b in zip(h, e)) for h in lead):
                out.append(e)
            return
        for a in range(left, -1, -1):
            cur.append(a)
            # prune: a prefix already divisible can only stay divisible
            rec(i + 1, left - a, cur)
            cur.pop()

    rec(0, degree, [])
    return out


def series_coefficients(numerator: IntPoly, nvars: int, upto: int) -> List[int]:
    """Coefficients of ``numerator/(1-z)^nvars`` in degrees ``0..upto``."""
    out = [0] * (upto + 1)
    for k, c in numerator.items():
        for t in range(max(k, 0), upto + 1):
            out[t] += c * comb(t - k + nvars - 1, nvars - 1)
    return out


# ---------------------------------------------------------------------------
# Hilbert series


@dataclass
class HilbertSeries:
    """``numerator / (1-z)^nvars``, also kept as ``h / (1-z)^dim`` with ``h(1) != 0``."""

    numerator: IntPoly
    nvars: int
    dim: int
    h: IntPoly

    def coefficients(self, lo: int, hi: int) -> List[int]:
        """Values of the Hilbert function in degrees ``lo..hi`` (``lo`` may be negative)."""
        out = []
        for t in range(lo, hi + 1):
            v = 0
            for k, c in self.numerator.items():
                if t >= k:
                    v += c * comb(t - k + self.nvars - 1, self.nvars - 1)
            out.append(v)
        return out

    def shift_against(self, other: "HilbertSeries") -> Optional[int]:
        """``a`` with ``self = z^a * other``, or None."""
        if not self.numerator or not other.numerator:
            return 0 if self.numerator == other.numerator else None
        a = min(self.numerator) - min(other.numerator)
        moved = {k + a: v for k, v in other.numerator.items()}
        return a if moved == self.numerator else None

    def __str__(self):
        if self.dim < 0:
            return "0"
        return f"({format_int_poly(self.h)})/(1 - z)^{self.dim}"


def _reduced(numerator: IntPoly, nvars: int) -> Tuple[int, IntPoly]:
    if not numerator:
        return -1, {}
    a = dict(numerator)
    k = 0
    while sum(a.values()) == 0:
        a = _divide_one_minus_z(a)
        k += 1
    return nvars - k, a


def hilbert_series(M) -> HilbertSeries:
    """Hilbert series of a graded module (a ModulePresentation)."""
    got = M._cache.get("hs")
    if got is not None:
        return got
    g = M.gb()
    n = M.S.nvars
    num: IntPoly = {}
    for p, s in enumerate(M.shifts):
        part = monomial_numerator(g.leading_monomials(p), n)
        num = poly_add_int(num, {k + s: v for k, v in part.items()})
    dim, h = _reduced(num, n)
    hs = HilbertSeries(num, n, dim, h)
    M._cache["hs"] = hs
    return hs


def ring_series(A) -> HilbertSeries:
    dim, h = _reduced(A.series_numerator, A.nvars)
    return HilbertSeries(dict(A.series_numerator), A.nvars, dim, h)


# ---------------------------------------------------------------------------
# Hilbert-Samuel function


def _samuel_numerators(M) -> List[IntPoly]:
    got = M._cache.get("samuel")
    if got is not None:
        return got
    shifts = M.shifts
    # larger generator degree means larger position
    ranks = [(s, -p) for p, s in enumerate(shifts)]
    order = ModuleOrder("pot", ranks=ranks)
    amb = quotient_relations(M.ring.gb, len(shifts))
    res = buchberger(list(M.relations), shifts, M.field, order, ambient=amb, reduce_result=False)
    n = M.S.nvars
    nums = []
    for p in range(len(shifts)):
        lead = [e for (q, e) in res.leading if q == p]
        nums.append(monomial_numerator(lead, n))
    M._cache["samuel"] = nums
    return nums


def hilbert_samuel(M, n: int) -> int:
    """``length(M / m^{n+1} M)``; independent of the grading shift of ``M``."""
    if n < 0:
        return 0
    nv = M.S.nvars
    total = 0
    for num in _samuel_numerators(M):
        total += sum(series_coefficients(num, nv, n))
    return total


def hilbert_samuel_linear(M, n: int) -> int:
    """Same value as :func:`hilbert_samuel`, by linear algebra on monomial bases."""
    if n < 0 or not M.shifts:
        return 0
    S = M.S
    nv = S.nvars
    fld = M.field
    gens = list(M.relations) + quotient_relations(M.ring.gb, len(M.shifts))
    total = 0
    lo, hi = min(M.shifts), max(M.shifts) + n
    for t in range(lo, hi + 1):
        kept = [p for p, s in enumerate(M.shifts) if 0 <= t - s <= n]
        if not kept:
            continue
        coords = {}
        for p in kept:
            for e in _all_monomials(nv, t - M.shifts[p]):
                coords[(p, e)] = len(coords)
        rows = []
        for g in gens:
            dg = {sum(e) + M.shifts[p] for (p, e) in g}.pop()
            if dg > t:
                continue
            for m in _all_monomials(nv, t - dg):
                row = {}
                for (p, e), c in g.items():
                    key = (p, tuple(a + b for a, b in zip(e, m)))
                    if key in coords:
                        row[coords[key]] = c
                if row:
                    rows.append(row)
        total += len(coords) - matrix_rank(rows, fld)
    return total


@lru_cache(maxsize=4096)
def _all_monomials(nvars: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    if degree < 0:
        return ()
    out = []
    for c in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


def hilbert_function_H(M, n: int) -> int:
    """``length(m^n M / m^{n+1} M)``."""
    return hilbert_samuel(M, n) - hilbert_samuel(M, n - 1)


# ---------------------------------------------------------------------------
# polynomial fitting


def lagrange_eval(points: Sequence[Tuple[int, int]], x: int) -> Fraction:
    total = Fraction(0)
    for i, (xi, yi) in enumerate(points):
        term = Fraction(yi)
        for j, (xj, _) in enumerate(points):
            if j != i:
                term *= Fraction(x - xj, xi - xj)
        total += term
    return total


@dataclass
class PolynomialFit:
    degree: int
    points: List[Tuple[int, int]]
    window: Tuple[int, int]             # [n0, last verified sample]
    samples: Dict[int, int]

    def __call__(self, x: int) -> Fraction:
        return lagrange_eval(self.points, x)

    def true_degree(self) -> int:
        """Degree of the interpolant after dropping vanishing top differences."""
        d = self.degree
        while d >= 0 and self.forward_difference(d) == 0:
            d -= 1
        return d

    def forward_difference(self, k: int) -> Fraction:
        """k-th forward difference, which is constant for k = degree."""
        x0 = self.points[0][0]
        return sum(((-1) ** (k - j)) * comb(k, j) * self(x0 + j) for j in range(k + 1))


def fit_polynomial(sample: Callable[[int], int], degree: int, n0: Optional[int] = None, cap: int = 12,
                   fresh: int = 3) -> PolynomialFit:
    """Fit a polynomial of degree ``<= degree`` to ``sample(n)`` for large ``n``.

    Starting at ``n0`` (default ``degree + 2``) the interpolant through
    ``degree + 1`` consecutive samples must reproduce ``fresh`` further
    samples exactly; otherwise the window moves right, up to ``cap`` times.
    """
    degree = max(degree, 0)
    start = degree + 2 if n0 is None else n0
    samples: Dict[int, int] = {}

    def s(n):
        if n not in samples:
            samples[n] = sample(n)
        return samples[n]

    for shift_ in range(cap + 1):
        a = start + shift_
        pts = [(n, s(n)) for n in range(a, a + degree + 1)]
        ok = True
        for n in range(a + degree + 1, a + degree + 1 + fresh):
            if lagrange_eval(pts, n) != s(n):
                ok = False
                break
        if ok:
            return PolynomialFit(degree, pts, (a, a + degree + fresh), dict(sorted(samples.items())))
    raise NoStabilization(f"no polynomial of degree {degree} fits from n0={start} within {cap} shifts")


# ---------------------------------------------------------------------------
# Hilbert coefficients


@dataclass
class HilbertData:
    dim: int
    coefficients: Tuple[int, ...]
    fit: Optional[PolynomialFit]
    series: HilbertSeries

    def e(self, i: int) -> int:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return 0

    @property
    def samples(self) -> Dict[int, int]:
        return self.fit.samples if self.fit else {}

    @property
    def window(self) -> Tuple[int, int]:
        return self.fit.window if self.fit else (0, 0)

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "e": list(self.coefficients),
            "samples": {str(k): v for k, v in self.samples.items()},
            "window": list(self.window),
            "series": str(self.series),
        }


def coefficients_from_fit(fit: PolynomialFit, r: int) -> Tuple[int, ...]:
    """``e_i = (-1)^i (nabla^{r-i} P)(-1)`` for ``P = sum (-1)^i e_i C(n+r-i, r-i)``."""
    out = []
    for i in range(r + 1):
        j = r - i
        val = sum(((-1) ** k) * comb(j, k) * fit(-1 - k) for k in range(j + 1))
        val *= (-1) ** i
        if val.denominator != 1:
            raise StableCMError("non-integral Hilbert coefficient; the fit is wrong")
        out.append(int(val))
    return tuple(out)


def hilbert_coefficients(M, n0: Optional[int] = None, cap: int = 12) -> HilbertData:
    key = ("hcoef", n0, cap)
    got = M._cache.get(key)
    if got is not None:
        return got
    hs = hilbert_series(M)
    r = hs.dim
    if r < 0:
        data = HilbertData(-1, (), None, hs)
    else:
        fit = fit_polynomial(lambda n: hilbert_samuel(M, n), r, n0, cap)
        if fit.true_degree() != r:
            raise StableCMError("Samuel polynomial degree disagrees with the pole order")
        data = HilbertData(r, coefficients_from_fit(fit, r), fit, hs)
    M._cache[key] = data
    return data


def e1(M) -> int:
    return hilbert_coefficients(M).e(1)


def multiplicity(M) -> int:
    return hilbert_coefficients(M).e(0)
