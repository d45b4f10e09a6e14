"""Ideal linkage in Q[x,y], horizontal linkage over F5[x]/(x^3) and the
dimension-one colon window.

    python demos/linkage.py
"""

from __future__ import annotations

from stablecm import catalog
from stablecm.gmodule import cyclic_module, minimalize
from stablecm.mcm_linkage import dim1_linkage_window, horizontal_link_partner, link_ideal
from stablecm.polyalg import parse_poly, parse_ring

R = catalog.ring("poly2")
P = lambda *g: [parse_poly(s, R.S) for s in g]

J, W = link_ideal(R, P("x", "y"), P("x^3", "y"))
print("(x^3, y) : (x, y) =", [str(g) for g in J], "| back-colon", [str(g) for g in W.back])

_, W = link_ideal(R, P("x^3", "y"), P("x^3", "y"))
print("I = q gives flags", W.flags)

B = catalog.ring("cubic1")
partner = horizontal_link_partner(cyclic_module(B, ["x"]))
print("partner of B/(x):", minimalize(partner).describe())

S = parse_ring("p=5; vars x,y")
for f in ("x^2", "x^2 + y^3"):
    rep = dim1_linkage_window(parse_poly(f, S), parse_poly("y", S), window=(2, 8))
    print(f"window for {f}: holds={rep.holds}, onset={rep.onset}, truncation={rep.truncation}")
