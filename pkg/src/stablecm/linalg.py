"""Sparse exact Gaussian elimination over a BaseField.

Rows are ``{column: coefficient}`` dicts.  Columns are integers; callers
map their own coordinates to integers before building rows.
"""

from __future__ import annotations

from typing import Dict, List, Sequence

from .polyalg import BaseField

Row = Dict[int, object]


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace.

    Every stored row has its pivot as its largest column and coefficient 1
    there, so top-reduction terminates.
    """

    def __init__(self, field: BaseField):
        self.field = field
        self.pivots: Dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _sub(self, row: Row, c, prow: Row):
        p = self.field.p
        if p:
            for k, v in prow.items():
                w = (row.get(k, 0) - c * v) % p
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
        else:
            for k, v in prow.items():
                w = row.get(k, 0) - c * v
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)

    def reduce(self, row: Row, full: bool = True) -> Row:
        """Return the remainder of ``row`` modulo the stored span."""
        row = dict(row)
        if not full:
            while row:
                top = max(row)
                prow = self.pivots.get(top)
                if prow is None:
                    return row
                self._sub(row, row[top], prow)
            return row
        out: Row = {}
        while row:
            top = max(row)
            prow = self.pivots.get(top)
            if prow is None:
                out[top] = row.pop(top)
                continue
            self._sub(row, row[top], prow)
        return out

    def add(self, row: Row) -> bool:
        """Insert ``row``; return True iff it was independent of the span."""
        r = self.reduce(row, full=False)
        if not r:
            return False
        top = max(r)
        inv = self.field.inv(r[top])
        red = self.field.reduce
        self.pivots[top] = {k: red(v * inv) for k, v in r.items()}
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(row, full=False)


def rank(rows: Sequence[Row], field: BaseField) -> int:
    ech = Echelon(field)
    for r in rows:
        if r:
            ech.add(r)
    return ech.rank


def nullspace(rows: Sequence[Row], ncols: int, field: BaseField) -> List[List[object]]:
    """Basis of ``{u : sum_j row[j] u_j = 0 for every row}`` as dense lists."""
    red = field.reduce
    # reduced row echelon form; pivot columns appear in exactly one row
    piv: Dict[int, Row] = {}
    for row in rows:
        r = dict(row)
        for k in [k for k in r if k in piv]:
            c = r.get(k)
            if not c:
                continue
            for kk, vv in piv[k].items():
                w = red(r.get(kk, 0) - c * vv)
                if w:
                    r[kk] = w
                else:
                    r.pop(kk, None)
        if not r:
            continue
        lead = min(r)
        inv = field.inv(r[lead])
        r = {k: red(v * inv) for k, v in r.items()}
        for prow in piv.values():
            c = prow.get(lead)
            if c:
                for kk, vv in r.items():
                    w = red(prow.get(kk, 0) - c * vv)
                    if w:
                        prow[kk] = w
                    else:
                        prow.pop(kk, None)
        piv[lead] = r
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for lead, prow in piv.items():
            c = prow.get(f)
            if c:
                v[lead] = red(-c)
        basis.append(v)
    return basis
