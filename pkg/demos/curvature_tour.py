"""Curvature survey of the builtin metrics plus a warp profile solved
from its defining equation.

Run:  python3 demos/curvature_tour.py
"""

import math

from contactgeo import Geometry, builtin, solve_warp_ode

for name in ("euclidean3", "paper_cosh_warp", "paper_kenmotsu_exp"):
    acs = builtin(name)
    geom = Geometry(acs.g)
    p = (0.2, 1.2, 0.4)
    k_xy = geom.sectional(p, (1, 0, 0), (0, 1, 0))
    k_xt = geom.sectional(p, (1, 0, 0), (0, 0, 1))
    r = geom.scalar_curvature(p, 0).value
    print(f"{name:20s} K(x,y) = {k_xy:+.6f}   K(x,t) = {k_xt:+.6f}   "
          f"R = {r:+.6f}")

print()
print("warp profile from gamma(0) = 1, gamma'(0) = 0 at fiber curvature -1")
prof = solve_warp_ode(-1.0, 1.0, 0.0, 2.0, step=1e-3)
for t in (0.0, 0.5, 1.0, 2.0):
    got = prof.gamma(t)
    want = 1.0 / math.cosh(t)
    print(f"  t = {t:3.1f}   gamma = {got:.10f}   1/cosh = {want:.10f}   "
          f"diff = {abs(got - want):.2e}")
