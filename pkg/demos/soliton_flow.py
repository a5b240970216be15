"""Soliton constants across the rho family, then the reduced flow,
including an extinction run.

Run:  python3 demos/soliton_flow.py
"""

import warnings

from contactgeo import (ProbeGrid, ShortTimeExistenceWarning, builtin,
                        einstein_family_flow, solve_lambda)

model = builtin("paper_cosh_warp")
grid = ProbeGrid.halton(model.g.chart, 16, seed=2)

print("soliton constant as rho varies (expect 2 + 6*rho)")
for rho in (0.0, 0.1, 0.25):
    fit = solve_lambda(model.g, None, rho, grid)
    print(f"  rho = {rho:4.2f}   lambda_hat = {fit.lambda_hat:.10f}   "
          f"({fit.classification})")

print()
print("reduced flow, kappa = -2 (hyperbolic scale grows linearly)")
traj = einstein_family_flow(-2.0, 0.0, 1.0, 1.0, 1e-3)
for s in (0.0, 0.5, 1.0):
    print(f"  c({s:3.1f}) = {traj.value(s):.10f}")

print()
print("reduced flow, kappa = +2 (spherical scale hits zero)")
traj = einstein_family_flow(2.0, 0.0, 1.0, 1.0, 1e-3)
print(f"  extinct: {traj.extinct}, at s = {traj.extinction_time:.6f}")

print()
print("velocity request beyond the existence bound raises a warning")
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    from contactgeo import bourguignon_velocity
    bourguignon_velocity(model.g, 0.3, (0.0, 1.0, 0.0))
for w in caught:
    if issubclass(w.category, ShortTimeExistenceWarning):
        print(f"  caught: {w.message}")
