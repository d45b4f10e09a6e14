"""Exact commutative algebra over standard-graded Gorenstein rings.

Triangle functions on maximal Cohen-Macaulay modules (the ``e^T`` invariant
and its oracles), Hilbert coefficients, syzygies, MCM approximations and the
``theta`` invariant, ideal and horizontal linkage, and a truncation backend
for matrix factorizations over inhomogeneous hypersurfaces.
"""

from __future__ import annotations

from .errors import CheckFailed, StableCMError
from .polyalg import BaseField, PolyRing, Polynomial, parse_poly, parse_ring
from .gmodule import (ModuleMap, ModulePresentation, QuotientRing, cosyzygy_module, cyclic_module,
                      dual, free_module, is_mcm, is_stably_iso, power_quotient, residue_field,
                      resolve, syzygy_module, transpose)
from .hilbert import e1, hilbert_coefficients, hilbert_series, multiplicity
from .etriangle import (SESWitness, check_pretriangle, check_triangle, e_triangle,
                        e_triangle_from_cover, e_triangle_oracle, make_xi)
from .mf import MatrixFactorization, TruncatedMF, ade_catalog, catalog_entry, mf_validate
from .mcm_linkage import (backend_agreement, check_approx_triangle, dim1_linkage_window,
                          horizontal_link_partner, link_ideal, mcm_approximation, theta)

__version__ = "0.1.0"

__all__ = [
    "CheckFailed", "StableCMError", "BaseField", "PolyRing", "Polynomial", "parse_poly", "parse_ring",
    "ModuleMap", "ModulePresentation", "QuotientRing", "cosyzygy_module", "cyclic_module", "dual",
    "free_module", "is_mcm", "is_stably_iso", "power_quotient", "residue_field", "resolve",
    "syzygy_module", "transpose", "e1", "hilbert_coefficients", "hilbert_series", "multiplicity",
    "SESWitness", "check_pretriangle", "check_triangle", "e_triangle", "e_triangle_from_cover",
    "e_triangle_oracle", "make_xi", "MatrixFactorization", "TruncatedMF", "ade_catalog",
    "catalog_entry", "mf_validate", "backend_agreement", "check_approx_triangle",
    "dim1_linkage_window", "horizontal_link_partner", "link_ideal", "mcm_approximation", "theta",
]
