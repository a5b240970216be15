"""Soliton residuals, the λ solver, and the reduced flow.

Oracles: the hyperbolic warped model is Einstein with Ric = -2g, so
its λ is 2 + 6ρ exactly; Euclidean space is Ricci-flat; the position
field on flat space has ½L_Vg = g; the reduced flow has a constant
slope -2κ(1 - 3ρ) integrable by hand.
"""

import math
import warnings

import numpy as np
import pytest

from contactgeo import probes
from contactgeo.atlas import builtin
from contactgeo.fields import ScalarField, vector_field
from contactgeo.geometry import Geometry, values_of
from contactgeo.solitons import (FlowTrajectory, ShortTimeExistenceWarning,
                                 SolitonSpec, bourguignon_velocity,
                                 einstein_family_flow,
                                 gradient_soliton_residual, soliton_residual,
                                 solve_lambda)

COSH = builtin("paper_cosh_warp")
EUCL = builtin("euclidean3")


def grid(g, n=12, seed=5):
    return probes.ProbeGrid.halton(g.chart, n=n, seed=seed)


def grad_field(geom, f):
    from contactgeo.fields import TensorField
    return TensorField((1, 0), lambda p, order: geom.gradient(f, p, order),
                       label="grad_f")


def random_potential(rng, chart):
    'A smooth bounded scalar with O(1) second derivatives.'
    x, y, t = chart.names
    a, b, c = rng.uniform(-0.8, 0.8, size=3)
    w1, w2 = rng.uniform(0.4, 1.0, size=2)
    expr = (f"{a:.6f}*sin({w1:.6f}*{x})*cosh({w2:.6f}*{y})"
            f" + {b:.6f}*{t}^2 + {c:.6f}*{x}*{y}")
    return ScalarField.from_expr(expr, chart)


class TestResidual:
    def test_einstein_metric_at_its_lambda(self):
        spec = SolitonSpec(V=None, lam=2.0, rho=0.0)
        for p in grid(COSH.g):
            res = soliton_residual(COSH.g, spec, p)
            assert np.abs(res).max() < 1e-8

    def test_rho_shifts_by_scalar_curvature(self):
        'With R = -6 and ρ = 0.1 the λ = 2 residual is exactly -0.6 g.'
        spec = SolitonSpec(V=None, lam=2.0, rho=0.1)
        geom = Geometry(COSH.g)
        for p in grid(COSH.g, n=6):
            res = soliton_residual(COSH.g, spec, p)
            gv = values_of(geom.metric_jets(p, 0))
            assert np.abs(res + 0.6 * gv).max() < 1e-8

    def test_flat_space_trivial(self):
        spec = SolitonSpec()
        res = soliton_residual(EUCL.g, spec, (0.1, 0.2, 0.3))
        assert np.abs(res).max() < 1e-12

    def test_affine_in_lambda(self):
        p = (0.3, 1.2, -0.4)
        geom = Geometry(COSH.g)
        gv = values_of(geom.metric_jets(p, 0))
        r0 = soliton_residual(COSH.g, SolitonSpec(lam=0.0), p)
        r5 = soliton_residual(COSH.g, SolitonSpec(lam=5.0), p)
        assert np.abs((r5 - r0) - 5.0 * gv).max() < 1e-12

    def test_accepts_geometry_instance(self):
        geom = Geometry(COSH.g)
        a = soliton_residual(geom, SolitonSpec(lam=2.0), (0.0, 1.0, 0.2))
        b = soliton_residual(COSH.g, SolitonSpec(lam=2.0), (0.0, 1.0, 0.2))
        assert np.abs(a - b).max() == 0.0

    def test_nonfinite_constants_rejected(self):
        with pytest.raises(ValueError):
            SolitonSpec(lam=math.nan)
        with pytest.raises(ValueError):
            SolitonSpec(rho=math.inf)

    def test_position_field_contributes_metric(self):
        'On flat space ½L_Vg = g for the position field, so λ = -1 zeroes it.'
        geom = Geometry(EUCL.g)
        V = vector_field(("x", "y", "t"), EUCL.g.chart)
        spec = SolitonSpec(V=V, lam=-1.0, rho=0.0)
        for p in grid(EUCL.g, n=6):
            res = soliton_residual(EUCL.g, spec, p)
            assert np.abs(res).max() < 1e-10
        del geom


class TestGradientResidual:
    def test_gaussian_on_flat_space(self):
        lam = 1.7
        f = ScalarField.from_expr(f"-({lam}/2)*(x^2 + y^2 + t^2)",
                                  EUCL.g.chart)
        for p in grid(EUCL.g, n=6):
            res = gradient_soliton_residual(EUCL.g, f, lam, 0.0, p)
            assert np.abs(res).max() < 1e-10

    def test_constant_potential_reduces_to_driftless(self):
        f = ScalarField.from_expr("4", COSH.g.chart)
        p = (0.2, 1.5, 0.1)
        a = gradient_soliton_residual(COSH.g, f, 2.0, 0.05, p)
        b = soliton_residual(COSH.g, SolitonSpec(lam=2.0, rho=0.05), p)
        assert np.abs(a - b).max() < 1e-12

    def test_gradient_drift_matches_lie_form(self):
        """Hess f equals ½L_{∇f}g, so the two residual styles must agree
        for arbitrary metrics and potentials."""
        rng = np.random.default_rng(20)
        chart = EUCL.g.chart
        worst = 0.0
        for k in range(20):
            g = probes.random_metric(rng, chart)
            f = random_potential(rng, chart)
            geom = Geometry(g)
            p = probes.ProbeGrid.halton(chart, n=1, seed=100 + k).points[0]
            a = gradient_soliton_residual(g, f, 0.3, 0.1, p)
            b = soliton_residual(
                g, SolitonSpec(V=grad_field(geom, f), lam=0.3, rho=0.1), p)
            worst = max(worst, np.abs(a - b).max())
        assert worst < 1e-7


class TestSolveLambda:
    def test_hyperbolic_model(self):
        fit = solve_lambda(COSH.g, None, 0.0, grid(COSH.g, n=16))
        assert fit.lambda_hat == pytest.approx(2.0, abs=1e-8)
        assert fit.residual_after < 1e-8
        assert fit.classification == "expanding"

    @pytest.mark.parametrize("rho", [0.1, 0.25])
    def test_rho_family(self, rho):
        fit = solve_lambda(COSH.g, None, rho, grid(COSH.g, n=16))
        assert fit.lambda_hat == pytest.approx(2.0 + 6.0 * rho, abs=1e-8)
        assert fit.residual_after < 1e-8

    def test_flat_space_steady(self):
        fit = solve_lambda(EUCL.g, None, 0.0, grid(EUCL.g, n=8))
        assert abs(fit.lambda_hat) < 1e-12
        assert fit.classification == "steady"

    def test_position_field_shrinking(self):
        V = vector_field(("x", "y", "t"), EUCL.g.chart)
        fit = solve_lambda(EUCL.g, V, 0.0, grid(EUCL.g, n=8))
        assert fit.lambda_hat == pytest.approx(-1.0, abs=1e-10)
        assert fit.classification == "shrinking"
        assert fit.residual_after < 1e-10

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            solve_lambda(EUCL.g, None, 0.0, [])


class TestBourguignonVelocity:
    def test_flat_space_static(self):
        v = bourguignon_velocity(EUCL.g, 0.0, (0.1, -0.2, 0.5))
        assert np.abs(v).max() < 1e-12

    def test_einstein_velocity(self):
        'With Ric = -2g and ρ = 0 the velocity is -2·Ric = +4g.'
        geom = Geometry(COSH.g)
        for p in grid(COSH.g, n=6):
            v = bourguignon_velocity(COSH.g, 0.0, p)
            gv = values_of(geom.metric_jets(p, 0))
            assert np.abs(v - 4.0 * gv).max() < 1e-8

    def test_rho_below_bound_is_quiet(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            bourguignon_velocity(COSH.g, 0.2, (0.0, 1.0, 0.0))

    @pytest.mark.parametrize("rho", [0.25, 0.4])
    def test_rho_at_or_beyond_bound_warns(self, rho):
        with pytest.warns(ShortTimeExistenceWarning):
            bourguignon_velocity(COSH.g, rho, (0.0, 1.0, 0.0))


class TestReducedFlow:
    def test_linear_exact(self):
        traj = einstein_family_flow(-2.0, 0.0, 1.0, 1.0, 1e-3)
        assert traj.value(1.0) == pytest.approx(5.0, abs=1e-10)
        assert traj.value(0.25) == pytest.approx(2.0, abs=1e-10)
        assert not traj.extinct

    def test_extinction_detected(self):
        traj = einstein_family_flow(2.0, 0.0, 1.0, 1.0, 1e-3)
        assert traj.extinct
        assert traj.extinction_time == pytest.approx(0.25, abs=1e-9)
        ss = [s for s, _ in traj.samples]
        cs = [c for _, c in traj.samples]
        assert all(b > a for a, b in zip(ss, ss[1:]))
        assert min(cs) > 0.0

    def test_critical_rho_stationary(self):
        traj = einstein_family_flow(-2.0, 1.0 / 3.0, 3.0, 2.0, 1e-2)
        assert traj.value(2.0) == pytest.approx(3.0, abs=1e-12)

    def test_value_interpolates_and_guards_range(self):
        traj = einstein_family_flow(-2.0, 0.0, 1.0, 1.0, 0.1)
        assert traj.value(0.314) == pytest.approx(1.0 + 4 * 0.314, abs=1e-9)
        with pytest.raises(ValueError):
            traj.value(1.5)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            einstein_family_flow(-2.0, 0.0, 0.0, 1.0, 1e-3)
        with pytest.raises(ValueError):
            einstein_family_flow(-2.0, 0.0, 1.0, -1.0, 1e-3)
        with pytest.raises(ValueError):
            einstein_family_flow(-2.0, 0.0, 1.0, 1.0, 0.0)

    def test_trajectory_metadata(self):
        traj = einstein_family_flow(-2.0, 0.1, 1.0, 0.5, 0.1)
        assert isinstance(traj, FlowTrajectory)
        assert traj.kappa == -2.0 and traj.rho == 0.1
