"""Named rings and modules used by the tests, demos and the command line.

Identifiers look like ``ring:quadric2`` or ``module:quadric2/spinor``;
matrix-factorization entries of the simple curve singularities are reached
through ``ade:<label>`` and evaluated in the truncation backend.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Dict, List, Tuple

from .errors import UnsupportedCatalogEntry
from .gmodule import (ModulePresentation, QuotientRing, cyclic_module, direct_sum, free_module,
                      power_quotient, residue_field)
from .polyalg import parse_ring

_RINGS: Dict[str, Tuple[str, Tuple[str, ...], str]] = {
    "x2": ("p=5; vars x,y", ("x^2",), "F5[x,y]/(x^2)"),
    "quadric2": ("p=5; vars x,y,z", ("x^2 + y^2 + z^2",), "F5[x,y,z]/(x^2 + y^2 + z^2), quadric surface"),
    "quadric3": ("p=5; vars x,y,z,w", ("x^2 + y^2 + z^2 + w^2",),
                 "F5[x,y,z,w]/(x^2 + y^2 + z^2 + w^2), quadric threefold"),
    "poly3": ("q; vars x,y,z", (), "Q[x,y,z]"),
    "poly2": ("q; vars x,y", (), "Q[x,y]"),
    "cubic1": ("p=5; vars x", ("x^3",), "F5[x]/(x^3)"),
}


@lru_cache(maxsize=None)
def ring(name: str) -> QuotientRing:
    try:
        decl, rels, _ = _RINGS[name]
    except KeyError:
        raise UnsupportedCatalogEntry(f"unknown ring {name!r}") from None
    S = parse_ring(decl)
    return QuotientRing(S, list(rels))


def ring_names() -> List[str]:
    return sorted(_RINGS)


def ring_description(name: str) -> str:
    return _RINGS[name][2]


def _spinor(A: QuotientRing) -> ModulePresentation:
    # y^2 + z^2 = (y + 2z)(y - 2z) over F5; the unique non-free indecomposable MCM module
    return ModulePresentation.from_matrix(A, [["x", "y + 2*z"], ["y - 2*z", "-x"]])


def _spinor_other(A: QuotientRing) -> ModulePresentation:
    # the transposed factorization; isomorphic to the first
    return ModulePresentation.from_matrix(A, [["x", "y - 2*z"], ["y + 2*z", "-x"]])


def _quadric3_spinor(A: QuotientRing, sign: int = 1) -> ModulePresentation:
    # 2 is a square root of -1 in F5, so x^2 + y^2 = (x + 2y)(x - 2y)
    if sign > 0:
        rows = [["x + 2*y", "z + 2*w"], ["-z + 2*w", "x - 2*y"]]
    else:
        rows = [["x - 2*y", "-z - 2*w"], ["z - 2*w", "x + 2*y"]]
    return ModulePresentation.from_matrix(A, rows)


_MODULES: Dict[str, Callable[[], ModulePresentation]] = {
    "x2/free1": lambda: free_module(ring("x2"), 1),
    "x2/free2": lambda: free_module(ring("x2"), 2),
    "x2/cyclic_x": lambda: cyclic_module(ring("x2"), ["x"]),
    "quadric2/free1": lambda: free_module(ring("quadric2"), 1),
    "quadric2/free2": lambda: free_module(ring("quadric2"), [0, 1]),
    "quadric2/spinor": lambda: _spinor(ring("quadric2")),
    "quadric2/spinor_other": lambda: _spinor_other(ring("quadric2")),
    "quadric2/spinor_sum": lambda: direct_sum(_spinor(ring("quadric2")), _spinor_other(ring("quadric2"))),
    "quadric2/residue": lambda: residue_field(ring("quadric2")),
    "quadric2/power2": lambda: power_quotient(ring("quadric2"), 2),
    "quadric3/free1": lambda: free_module(ring("quadric3"), 1),
    "quadric3/spinor": lambda: _quadric3_spinor(ring("quadric3")),
    "quadric3/spinor_other": lambda: _quadric3_spinor(ring("quadric3"), -1),
    "poly3/residue": lambda: residue_field(ring("poly3")),
}


def module(name: str) -> ModulePresentation:
    if name.startswith("module:"):
        name = name[len("module:"):]
    try:
        return _MODULES[name]()
    except KeyError:
        raise UnsupportedCatalogEntry(f"unknown module {name!r}") from None


def module_names() -> List[str]:
    return sorted(_MODULES)


# MCM modules with their known e^T values; the residue and power entries are not MCM
MCM_CATALOG = [
    "x2/free1", "x2/free2", "x2/cyclic_x",
    "quadric2/free1", "quadric2/free2", "quadric2/spinor", "quadric2/spinor_other",
    "quadric2/spinor_sum", "quadric3/free1", "quadric3/spinor", "quadric3/spinor_other",
]
