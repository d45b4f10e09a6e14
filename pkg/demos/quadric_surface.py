"""Walk through the invariants of the quadric cone x^2 + y^2 + z^2 = 0 over F5.

    python demos/quadric_surface.py
"""

from __future__ import annotations

from stablecm import catalog
from stablecm.etriangle import e_triangle, e_triangle_from_cover, e_triangle_oracle, syzygy_ses
from stablecm.gmodule import free_module, power_quotient, residue_field
from stablecm.hilbert import hilbert_coefficients, hilbert_series
from stablecm.mcm_linkage import check_approx_triangle, filtration_ses, growth_experiment, theta_report

A = catalog.ring("quadric2")
S = catalog.module("quadric2/spinor")

print("ring:", catalog.ring_description("quadric2"))
print("Hilbert series of A:", hilbert_series(free_module(A, 1)))
print("Hilbert coefficients of A:", hilbert_coefficients(free_module(A, 1)).coefficients)

# three independent routes to the triangle function on the spinor module
print("e^T(spinor): formula", e_triangle(S), "| Tor fit", e_triangle_oracle(S),
      "| from cover", e_triangle_from_cover(syzygy_ses(S)))

for N, label in ((residue_field(A), "k"), (power_quotient(A, 2), "A/m^2")):
    rep = theta_report(N)
    print(f"theta({label}) = {rep['theta']}  (approximation has {rep['X_generators']} generators)")

for n in (1, 2):
    rep = check_approx_triangle(filtration_ses(free_module(A, 1), n))
    print(f"filtration n={n}: triangle certified={rep.passed}, e^T values {rep.values}")

g = growth_experiment(free_module(A, 1), n_max=4)
print("lower bounds H(A,n) * e^T:", g["bound"])
