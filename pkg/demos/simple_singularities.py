"""e^T on the matrix-factorization catalog of the simple curve singularities,
computed in the truncation backend.

    python demos/simple_singularities.py
"""

from __future__ import annotations

from stablecm.mf import (TruncatedMF, ade_catalog, trunc_e0_syzygy, trunc_e_triangle,
                         trunc_e_triangle_from_cover, trunc_e_triangle_oracle)

print(f"{'entry':<10} {'f':<14} {'mu':>3} {'e^T':>4} {'oracle':>7} {'cover':>6} {'e0(ΩM)':>7}")
for kind, n in (("A", 2), ("A", 3), ("D", 4), ("E6", 0), ("E7", 0), ("E8", 0)):
    for mf in ade_catalog(kind, n):
        M = TruncatedMF(mf)
        print(f"{mf.label:<10} {str(mf.f):<14} {M.mu():>3} {trunc_e_triangle(M):>4} "
              f"{trunc_e_triangle_oracle(M):>7} {trunc_e_triangle_from_cover(M):>6} {trunc_e0_syzygy(M):>7}")
