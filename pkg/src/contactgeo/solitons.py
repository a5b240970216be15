"""Soliton residuals, λ estimation, and the conformal Einstein-family flow.

The central object is the residual ½L_Vg + Ric + (λ + ρR)g; a metric
solves the generalized soliton equation exactly when it vanishes.  The
flow side only covers the conformal reduction on Einstein metrics,
where the evolution law collapses to a single scalar ODE.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .geometry import Geometry, values_of
from .jets import DIM


class ShortTimeExistenceWarning(UserWarning):
    """ρ is at or beyond the n = 3 short-time existence bound (1/4)."""


@dataclass(frozen=True)
class SolitonSpec:
    """A candidate soliton datum: drift field V plus constants λ, ρ.

    V may be None for the trivial (Einstein) case.
    """
    V: object = None
    lam: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.rho)):
            raise ValueError("lambda and rho must be finite")


def _as_geometry(g):
    return g if isinstance(g, Geometry) else Geometry(g)


def _base_residual(geom, V, rho, p):
    'Value matrix of ½L_Vg + Ric + ρRg at p (the λ-free part).'
    ric = values_of(geom.ricci(p, 0))
    gv = values_of(geom.metric_jets(p, 0))
    r = geom.scalar_curvature(p, 0).value
    out = ric + rho * r * gv
    if V is not None:
        lie = values_of(geom.lie_derivative(V, geom.metric_tensor()).jets(p, 0))
        out = out + 0.5 * lie
    return out, gv


def soliton_residual(g, spec, p):
    'Componentwise ½L_Vg + Ric + (λ + ρR)g at p.'
    geom = _as_geometry(g)
    base, gv = _base_residual(geom, spec.V, spec.rho, p)
    return base + spec.lam * gv


def gradient_soliton_residual(g, f, lam, rho, p):
    'Componentwise Hess f + Ric + (λ + ρR)g at p.'
    geom = _as_geometry(g)
    hess = values_of(geom.hessian(f, p, 0))
    ric = values_of(geom.ricci(p, 0))
    gv = values_of(geom.metric_jets(p, 0))
    r = geom.scalar_curvature(p, 0).value
    return hess + ric + (lam + rho * r) * gv


class LambdaFit(NamedTuple):
    lambda_hat: float
    residual_after: float
    classification: str


STEADY_BAND = 1e-10


def solve_lambda(g, V, rho, grid):
    """Best constant λ for the soliton equation over a probe grid.

    Least squares over orthonormal-frame diagonal components has the
    closed form λ̂ = −mean of [½L_Vg + Ric + ρRg](e, e); the full
    residual at λ̂ (off-diagonal entries included) is reported back.
    Classification is by sign with a dead band of 1e−10 around steady.
    """
    geom = _as_geometry(g)
    pts = list(grid)
    if not pts:
        raise ValueError("probe grid is empty")
    diag = []
    cached = []
    for p in pts:
        base, gv = _base_residual(geom, V, rho, p)
        cached.append((p, base, gv))
        frame = geom.orthonormal_frame(p)
        for e in frame:
            diag.append(e @ base @ e)
    lam = -float(np.mean(diag))
    worst = 0.0
    for p, base, gv in cached:
        worst = max(worst, float(np.abs(base + lam * gv).max()))
    if abs(lam) <= STEADY_BAND:
        cls = "steady"
    elif lam > 0:
        cls = "expanding"
    else:
        cls = "shrinking"
    return LambdaFit(lam, worst, cls)


RHO_BOUND = 0.25


def bourguignon_velocity(g, rho, p):
    """Flow velocity −2(Ric − ρRg) at p.

    ρ at or above 1/4 triggers ShortTimeExistenceWarning: the tensor is
    still returned, but the flow it drives may not exist even briefly.
    """
    if rho >= RHO_BOUND:
        warnings.warn(
            f"rho = {rho} is at or beyond the short-time existence "
            f"bound {RHO_BOUND}", ShortTimeExistenceWarning, stacklevel=2)
    geom = _as_geometry(g)
    ric = values_of(geom.ricci(p, 0))
    gv = values_of(geom.metric_jets(p, 0))
    r = geom.scalar_curvature(p, 0).value
    return -2.0 * (ric - rho * r * gv)


@dataclass(frozen=True)
class FlowTrajectory:
    """Sampled conformal factor c(s) of the reduced flow.

    samples holds strictly increasing (s, c) pairs with c > 0;
    extinct marks a run that was cut short because c reached 0, with
    the crossing time in extinction_time.
    """
    samples: tuple
    kappa: float
    rho: float
    extinct: bool = False
    extinction_time: float = None

    def value(self, s):
        ss = np.array([q[0] for q in self.samples])
        cs = np.array([q[1] for q in self.samples])
        if not ss[0] <= s <= ss[-1]:
            raise ValueError(f"s = {s} outside sampled range")
        return float(np.interp(s, ss, cs))


def einstein_family_flow(kappa, rho, c0, horizon, step):
    """Flow the conformal factor of an Einstein metric (Ric = κg₀).

    Under g(s) = c(s)·g₀ the evolution reduces to the constant-slope
    law dc/ds = −2κ(1 − 3ρ), integrated here by classical RK4 so the
    sampling machinery matches the non-reduced solvers.  Integration
    stops early, flagged, if c reaches 0.
    """
    if c0 <= 0:
        raise ValueError(f"c0 must be positive, got {c0}")
    if horizon <= 0 or step <= 0:
        raise ValueError("horizon and step must be positive")
    slope = -2.0 * kappa * (1.0 - 3.0 * rho)
    n = max(1, int(math.ceil(horizon / step)))
    h = horizon / n
    samples = [(0.0, float(c0))]
    c = float(c0)
    for i in range(n):
        # RK4 on a constant right-hand side: k1 = k2 = k3 = k4 = slope.
        c_next = c + h / 6.0 * (slope + 4.0 * slope + slope)
        if c_next <= 0.0:
            t_hit = samples[-1][0] + c / (-slope)
            return FlowTrajectory(tuple(samples), float(kappa), float(rho),
                                  extinct=True, extinction_time=t_hit)
        c = c_next
        samples.append(((i + 1) * h, c))
    return FlowTrajectory(tuple(samples), float(kappa), float(rho))
