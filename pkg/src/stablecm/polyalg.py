"""Exact coefficient fields, graded polynomial rings and the textual grammar.

Polynomials are stored as ``{exponent_tuple: coefficient}`` dictionaries.
Coefficients are Python ints reduced mod p for prime fields and
``fractions.Fraction`` for the rationals; nothing in the package touches
floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, Tuple

from .errors import NonPrime, ParseError, RingMismatch

Exps = Tuple[int, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class BaseField:
    """The rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            if not _is_prime(self.p):
                raise NonPrime(f"{self.p} is not prime")
            if self.p >= 2 ** 31:
                raise ParseError("prime must be < 2^31")

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    def __call__(self, value) -> object:
        """Coerce an int, Fraction or string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.p:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ParseError(f"{value} is not an element of F_{self.p}")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    def reduce(self, c):
        return c % self.p if self.p else c

    def inv(self, c):
        if self.p:
            return pow(c, -1, self.p)
        return 1 / Fraction(c)

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def to_str(self, c) -> str:
        if self.p:
            return str(c)
        return str(c)

    def __str__(self):
        return f"p={self.p}" if self.p else "q"


QQ = BaseField(0)


def GF(p: int) -> BaseField:
    return BaseField(p)


class _MinusInfinity:
    """Degree of the zero polynomial; compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __repr__(self):
        return "-inf"


MINUS_INFINITY = _MinusInfinity()


def grevlex_key(e: Exps):
    """Sort key for graded reverse lexicographic order (bigger key = bigger monomial)."""
    return (sum(e), tuple(-a for a in reversed(e)))


@dataclass(frozen=True)
class PolyRing:
    field: BaseField
    variables: Tuple[str, ...]
    order: str = "grevlex"

    def __post_init__(self):
        if not self.variables:
            raise ParseError("empty variable list")
        if len(set(self.variables)) != len(self.variables):
            raise ParseError("duplicate variable name")
        if self.order != "grevlex":
            raise ParseError(f"unsupported monomial order {self.order!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __str__(self):
        return f"{self.field}; vars {','.join(self.variables)}"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field.one})

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, name_or_index) -> "Polynomial":
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Exps, coeff=1) -> "Polynomial":
        c = self.field(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)


@total_ordering
class Polynomial:
    """Immutable polynomial; terms kept in a dict, printed in descending grevlex order."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Exps, object]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def leading_term(self):
        """``(exps, coeff)`` of the grevlex-largest term, or None for zero."""
        if not self.terms:
            return None
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- arithmetic --------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch("operands live in different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._check(other)
        red = self.ring.field.reduce
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = red(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.ring.field.reduce
        return Polynomial(self.ring, {e: red(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.field(other)
            red = self.ring.field.reduce
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {e: red(v * c) for e, v in self.terms.items()})
        other = self._check(other)
        return Polynomial(self.ring, poly_mul(self.terms, other.terms, self.ring.field))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __lt__(self, other):
        return _poly_sort_key(self) < _poly_sort_key(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def _poly_sort_key(p: Polynomial):
    return [(grevlex_key(e), c) for e, c in p.sorted_terms()]


def poly_mul(a: Dict[Exps, object], b: Dict[Exps, object], fld: BaseField) -> Dict[Exps, object]:
    out: Dict[Exps, object] = {}
    p = fld.p
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


# -- printing -------------------------------------------------------------

def _format_monomial(e: Exps, names) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    fld = f.ring.field
    out = []
    for e, c in f.sorted_terms():
        if fld.p and c > fld.p // 2:
            sign, mag = "-", fld.p - c
        elif not fld.p and c < 0:
            sign, mag = "-", -c
        else:
            sign, mag = "+", c
        mono = _format_monomial(e, f.ring.variables)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        out.append((sign, body))
    first_sign, first_body = out[0]
    s = ("-" if first_sign == "-" else "") + first_body
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


# -- parsing --------------------------------------------------------------

_RING_RE = re.compile(r"^\s*(q|Q|p\s*=\s*(\d+))\s*;\s*vars\s+(.+?)\s*$")
_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-])|(\S))")


def parse_ring(text: str) -> PolyRing:
    """Parse ``"p=5; vars x,y,z"`` or ``"q; vars x"``."""
    m = _RING_RE.match(text)
    if not m:
        raise ParseError(f"malformed ring declaration {text!r}")
    fld = BaseField(int(m.group(2))) if m.group(2) else QQ
    names = [v.strip() for v in m.group(3).split(",") if v.strip()]
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
            raise ParseError(f"bad variable name {v!r}")
    return PolyRing(fld, tuple(names))


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize {text[pos:]!r}")
        num, ident, caret, star, sign, other = m.groups()
        if other is not None:
            raise ParseError(f"unexpected character {other!r}")
        if num is not None:
            toks.append(("num", num))
        elif ident is not None:
            toks.append(("var", ident))
        elif caret:
            toks.append(("^", caret))
        elif star:
            toks.append(("*", star))
        else:
            toks.append(("sign", sign))
        pos = m.end()
    return toks


def parse_poly(text: str, ring: PolyRing) -> Polynomial:
    """Parse a sum of signed terms ``c*x^a*y^b`` into a canonical Polynomial."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    fld = ring.field
    index = {v: i for i, v in enumerate(ring.variables)}
    result: Dict[Exps, object] = {}
    i = 0
    n = len(toks)
    expect_term = True
    while i < n:
        sign = 1
        while i < n and toks[i][0] == "sign":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise ParseError("dangling sign")
        coeff = Fraction(1)
        exps = [0] * ring.nvars
        saw_factor = False
        while i < n and toks[i][0] in ("num", "var"):
            kind, val = toks[i]
            i += 1
            if kind == "num":
                coeff *= Fraction(val)
            else:
                if val not in index:
                    raise ParseError(f"unknown variable {val!r}")
                k = 1
                if i < n and toks[i][0] == "^":
                    i += 1
                    if i >= n or toks[i][0] != "num" or "/" in toks[i][1]:
                        raise ParseError("malformed exponent")
                    k = int(toks[i][1])
                    i += 1
                exps[index[val]] += k
            saw_factor = True
            if i < n and toks[i][0] == "*":
                i += 1
                if i >= n or toks[i][0] not in ("num", "var"):
                    raise ParseError("dangling '*'")
        if not saw_factor:
            raise ParseError(f"expected a term near token {i}")
        if i < n and toks[i][0] == "^":
            raise ParseError("malformed exponent")
        c = fld(coeff * sign)
        e = tuple(exps)
        v = fld.reduce(result.get(e, 0) + c)
        if v:
            result[e] = v
        else:
            result.pop(e, None)
        expect_term = False
        if i < n and toks[i][0] != "sign":
            raise ParseError(f"unexpected token {toks[i][1]!r}")
    if expect_term:
        raise ParseError("empty polynomial")
    return Polynomial(ring, result)


def parse_matrix(rows: Iterable[Iterable[str]], ring: PolyRing):
    """Parse a row-major matrix of polynomial strings."""
    return [[parse_poly(str(x), ring) for x in row] for row in rows]
