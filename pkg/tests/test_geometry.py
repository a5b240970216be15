"""Curvature engine against hand-derived anchors and structural oracles.

Anchor values for the half-plane-times-line and warped metrics are
classical closed forms derived independently of the engine; randomized
metrics exercise the tensor identities that hold for every metric.
"""

import math

import numpy as np
import pytest

from contactgeo import atlas
from contactgeo.fields import Chart, MetricField, ScalarField, one_form, vector_field
from contactgeo.geometry import (DegenerateMetricError, Geometry,
                                 UnsupportedValenceError, values_of, wedge)
from contactgeo.probes import ProbeGrid, random_metric, random_vector

BOX = ((-1.0, 1.0), (0.5, 3.0), (-1.0, 1.0))


def half_plane_line():
    'diag(1/y^2, 1/y^2, 1): hyperbolic plane times a flat line.'
    ch = Chart(box=BOX)
    return Geometry(MetricField.from_upper(
        ch, {(0, 0): "1/y^2", (1, 1): "1/y^2", (2, 2): "1"}))


def euclidean():
    ch = Chart()
    return Geometry(MetricField.from_upper(
        ch, {(0, 0): "1", (1, 1): "1", (2, 2): "1"}))


def grid20(seed=420):
    'Twenty random (metric, vector, point) triples on the shared box.'
    ch = Chart(box=BOX)
    rng = np.random.default_rng(seed)
    pts = list(ProbeGrid.halton(ch, 20, seed=seed))
    return [(random_metric(rng, ch), random_vector(rng, ch), p) for p in pts]


class TestChristoffels:
    def test_half_plane_anchors(self):
        'Poincare symbols: G^x_xy = -1/y, G^y_xx = 1/y, G^y_yy = -1/y.'
        geom = half_plane_line()
        p = (0.0, 2.0, 0.0)
        gam = values_of(geom.christoffels(p, 0))
        assert gam[0, 0, 1] == pytest.approx(-0.5)
        assert gam[1, 0, 0] == pytest.approx(0.5)
        assert gam[1, 1, 1] == pytest.approx(-0.5)
        # t direction is flat and decoupled
        assert np.abs(gam[2]).max() == pytest.approx(0.0)
        assert np.abs(gam[:, 2, :]).max() == pytest.approx(0.0)

    def test_cosh_warp_anchor(self):
        geom = atlas.builtin("paper_cosh_warp").geometry
        gam = values_of(geom.christoffels((0.0, 1.0, 0.3), 0))
        assert gam[2, 0, 0] == pytest.approx(-math.cosh(0.3) * math.sinh(0.3))

    def test_symmetric_lower_pair(self):
        for g, _, p in grid20(7)[:5]:
            gam = values_of(Geometry(g).christoffels(p, 0))
            assert np.abs(gam - gam.transpose(0, 2, 1)).max() < 1e-12

    def test_euclidean_flat(self):
        geom = euclidean()
        gam = values_of(geom.christoffels((0.3, -0.2, 0.5), 0))
        assert np.abs(gam).max() == 0.0


class TestMetricCompatibility:
    def test_nabla_g_vanishes_on_random_metrics(self):
        for g, _, p in grid20(13)[:8]:
            geom = Geometry(g)
            nabla_g = geom.covariant_derivative(geom.metric_tensor())
            assert np.abs(values_of(nabla_g.jets(p, 0))).max() < 1e-9

    def test_inverse_metric(self):
        for g, _, p in grid20(29)[:5]:
            geom = Geometry(g)
            gv = g.values(p)
            ginv = values_of(geom.inverse_metric_jets(p, 0))
            assert np.allclose(gv @ ginv, np.eye(3), atol=1e-12)

    def test_degenerate_metric_refused(self):
        ch = Chart()
        g = MetricField.from_upper(ch, {(0, 0): "x", (1, 1): "1",
                                        (2, 2): "1"})
        with pytest.raises(DegenerateMetricError):
            Geometry(g).inverse_metric_jets((0.0, 0.1, 0.1), 0)


class TestRiemannSymmetries:
    def test_antisymmetry_first_pair(self):
        for g, _, p in grid20(31)[:6]:
            r = values_of(Geometry(g).riemann(p, 0))
            assert np.abs(r + r.transpose(0, 2, 1, 3)).max() < 1e-10

    def test_first_bianchi(self):
        for g, _, p in grid20(37)[:6]:
            r = values_of(Geometry(g).riemann(p, 0))
            cyc = r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)
            assert np.abs(cyc).max() < 1e-9

    def test_lowered_pair_symmetries(self):
        for g, _, p in grid20(41)[:6]:
            rl = values_of(Geometry(g).riemann_lowered(p, 0))
            # swap of the argument pairs, antisymmetry in the last pair
            assert np.abs(rl - rl.transpose(2, 3, 0, 1)).max() < 1e-10
            assert np.abs(rl + rl.transpose(3, 1, 2, 0)).max() < 1e-10

    def test_contracted_second_bianchi(self):
        'div Ric = grad R / 2, the strongest whole-pipeline identity.'
        for g, _, p in grid20(43)[:6]:
            geom = Geometry(g)
            dv = values_of(
                geom.covariant_derivative(geom.ricci_field()).jets(p, 0))
            ginv = values_of(geom.inverse_metric_jets(p, 0))
            sj = geom.scalar_curvature(p, 1)
            div = np.einsum("cj,cjk->k", ginv, dv)
            grad = np.array([sj.partial(k).value for k in range(3)])
            assert np.abs(div - 0.5 * grad).max() < 1e-6

    def test_ricci_symmetric(self):
        for g, _, p in grid20(47)[:6]:
            rc = values_of(Geometry(g).ricci(p, 0))
            assert np.abs(rc - rc.T).max() < 1e-10


class TestModelCurvatures:
    def test_euclidean_flat(self):
        geom = euclidean()
        p = (0.2, -0.4, 0.6)
        assert np.abs(values_of(geom.riemann(p, 0))).max() == 0.0
        assert geom.scalar_curvature(p, 0).value == 0.0

    def test_half_plane_line_split(self):
        'Product metric: fiber plane at -1, mixed planes flat, R = -2.'
        geom = half_plane_line()
        p = (0.3, 1.7, -0.2)
        assert geom.sectional(p, (1, 0, 0), (0, 1, 0)) == pytest.approx(-1.0)
        assert geom.sectional(p, (1, 0, 0), (0, 0, 1)) == pytest.approx(0.0)
        assert geom.sectional(p, (0, 1, 0), (0, 0, 1)) == pytest.approx(0.0)
        assert geom.scalar_curvature(p, 0).value == pytest.approx(-2.0)

    def test_cosh_warp_space_form(self):
        geom = atlas.builtin("paper_cosh_warp").geometry
        p = (0.25, 1.4, 0.6)
        for u, v in (((1, 0, 0), (0, 1, 0)), ((1, 0, 0), (0, 0, 1)),
                     ((0, 1, 0), (0, 0, 1)), ((1, 0.3, -0.2), (0.1, 1, 0.8))):
            assert geom.sectional(p, u, v) == pytest.approx(-1.0, abs=1e-10)
        gv = values_of(geom.metric_jets(p, 0))
        ric = values_of(geom.ricci(p, 0))
        assert np.abs(ric + 2 * gv).max() < 1e-12
        assert geom.scalar_curvature(p, 0).value == pytest.approx(-6.0)

    def test_cosh_warp_lowered_space_form_pattern(self):
        'R(X,Y,Z,W) at curvature -1 equals <X,Z><Y,W> - <X,W><Y,Z>.'
        geom = atlas.builtin("paper_cosh_warp").geometry
        p = (0.1, 2.2, -0.5)
        rl = values_of(geom.riemann_lowered(p, 0))
        gv = values_of(geom.metric_jets(p, 0))
        want = (np.einsum("ik,jl->lijk", gv, gv)
                - np.einsum("il,jk->lijk", gv, gv))
        assert np.abs(rl - want).max() < 1e-12

    def test_kenmotsu_exp_curvatures(self):
        geom = atlas.builtin("paper_kenmotsu_exp").geometry
        p = (0.2, 1.3, 0.4)
        t = p[2]
        assert geom.sectional(p, (1, 0, 0), (0, 1, 0)) == pytest.approx(
            -1.0 - math.exp(-2 * t))
        assert geom.sectional(p, (1, 0, 0), (0, 0, 1)) == pytest.approx(-1.0)
        assert geom.sectional(p, (0, 1, 0), (0, 0, 1)) == pytest.approx(-1.0)
        assert geom.scalar_curvature(p, 0).value == pytest.approx(
            -6.0 - 2.0 * math.exp(-2 * t))

    def test_kenmotsu_exp_fiber_plane_at_origin(self):
        geom = atlas.builtin("paper_kenmotsu_exp").geometry
        k = geom.sectional((0.0, 1.0, 0.0), (1, 0, 0), (0, 1, 0))
        assert k == pytest.approx(-2.0)

    def test_kenmotsu_exp_scalar_slope(self):
        'dR/dt = 4 e^{-2t}, read from the jet tier.'
        geom = atlas.builtin("paper_kenmotsu_exp").geometry
        sj = geom.scalar_curvature((0.0, 1.0, 0.5), 1)
        assert sj.partial(2).value == pytest.approx(4 * math.exp(-1.0))
        assert sj.partial(0).value == pytest.approx(0.0, abs=1e-12)

    def test_sectional_rejects_degenerate_plane(self):
        geom = euclidean()
        with pytest.raises(DegenerateMetricError):
            geom.sectional((0, 0, 0), (1, 0, 0), (2, 0, 0))

    def test_horospherical_direct_warp(self):
        'Flat fiber scaled by e^t is hyperbolic space: all planes at -1.'
        prof = atlas.ExprProfile("exp(t)", 0.0, (-1.5, 1.5))
        flat = (("1", "0"), ("0", "1"))
        g = atlas.warped_product(flat, prof, "direct")
        geom = Geometry(g)
        p = (0.3, 1.2, -0.4)
        for u, v in (((1, 0, 0), (0, 1, 0)), ((1, 0, 0), (0, 0, 1)),
                     ((0.2, 1, 0.4), (1, -0.3, 0.6))):
            assert geom.sectional(p, u, v) == pytest.approx(-1.0, abs=1e-8)


class TestDerivativeOperators:
    def test_euclidean_laplacian_sign(self):
        geom = euclidean()
        f = ScalarField.from_expr("x^2 + y^2")
        p = (0.3, 0.1, -0.2)
        assert geom.laplacian(f, p).value == pytest.approx(-4.0)
        assert geom.laplacian(f, p, analyst=True).value == pytest.approx(4.0)

    def test_gradient_raises_index(self):
        geom = half_plane_line()
        f = ScalarField.from_expr("x")
        gr = values_of(geom.gradient(f, (0.0, 2.0, 0.0), 0))
        # g^xx = y^2 = 4
        assert gr == pytest.approx([4.0, 0.0, 0.0])

    def test_hessian_subtracts_connection(self):
        geom = atlas.builtin("paper_cosh_warp").geometry
        f = ScalarField.from_expr("t")
        p = (0.0, 1.0, 0.3)
        h = values_of(geom.hessian(f, p, 0))
        ch, sh = math.cosh(0.3), math.sinh(0.3)
        assert h[0, 0] == pytest.approx(ch * sh)
        assert h[1, 1] == pytest.approx(ch * sh)
        assert h[2, 2] == pytest.approx(0.0)

    def test_covariant_derivative_one_form(self):
        'New covariant slot comes first: (nabla w)[c, b].'
        geom = half_plane_line()
        w = one_form(("1", "0", "0"), geom.metric.chart)
        p = (0.0, 2.0, 0.0)
        dv = values_of(geom.covariant_derivative(w).jets(p, 0))
        # (nabla_c w)_b = -G^x_cb; only G^x_xy = G^x_yx = -1/y survive
        assert dv[0, 1] == pytest.approx(0.5)
        assert dv[1, 0] == pytest.approx(0.5)
        assert dv[0, 0] == pytest.approx(0.0)

    def test_covariant_derivative_valence_guards(self):
        geom = euclidean()
        ch = geom.metric.chart
        too_many_up = vector_field(("1", "0", "0"), ch)
        too_many_up.valence = (2, 0)
        with pytest.raises(UnsupportedValenceError):
            geom.covariant_derivative(too_many_up)


class TestLieOperators:
    def test_killing_field_on_half_plane(self):
        'd/dx is an isometry direction: L_V g, L_V Gamma, L_V Ric all 0.'
        geom = half_plane_line()
        V = vector_field(("1", "0", "0"), geom.metric.chart)
        p = (0.4, 1.2, 0.3)
        lie_g = geom.lie_derivative(V, geom.metric_tensor())
        assert np.abs(values_of(lie_g.jets(p, 0))).max() < 1e-12
        assert np.abs(values_of(geom.lie_connection(V, p, 0))).max() < 1e-10
        assert np.abs(values_of(geom.lie_ricci(V, p))).max() < 1e-9

    def test_rotation_killing_on_euclidean(self):
        geom = euclidean()
        V = vector_field(("-y", "x", "0"), geom.metric.chart)
        p = (0.3, 0.5, -0.2)
        lie_g = geom.lie_derivative(V, geom.metric_tensor())
        assert np.abs(values_of(lie_g.jets(p, 0))).max() < 1e-12
        assert np.abs(values_of(geom.lie_connection(V, p, 0))).max() < 1e-10

    def test_lie_connection_against_bracket_formula(self):
        'Half-sum of covariant derivatives vs the transport expansion.'
        for g, V, p in grid20(53):
            geom = Geometry(g)
            a = values_of(geom.lie_connection(V, p, 0))
            b = values_of(geom.lie_connection_bracket(V, p, 0))
            assert np.abs(a - b).max() < 1e-7

    def test_lie_curvature_against_direct_lie(self):
        for g, V, p in grid20(59):
            geom = Geometry(g)
            a = values_of(geom.lie_curvature(V, p))
            direct = geom.lie_derivative(V, geom.riemann_field())
            b = values_of(direct.jets(p, 0))
            assert np.abs(a - b).max() < 1e-6

    def test_lie_ricci_against_direct_lie(self):
        for g, V, p in grid20(61)[:8]:
            geom = Geometry(g)
            a = values_of(geom.lie_ricci(V, p))
            direct = geom.lie_derivative(V, geom.ricci_field())
            b = values_of(direct.jets(p, 0))
            assert np.abs(a - b).max() < 1e-6

    def test_lie_scalar_is_directional_derivative(self):
        geom = euclidean()
        V = vector_field(("y", "0", "1"), geom.metric.chart)
        f = ScalarField.from_expr("x^2*t")
        p = (0.5, 0.7, 0.3)
        want = 0.7 * (2 * 0.5 * 0.3) + 1.0 * 0.5 ** 2
        assert geom.lie_scalar(V, f, p).value == pytest.approx(want)


class TestFrameAndForms:
    def test_orthonormal_frame_is_orthonormal(self):
        for g, _, p in grid20(67)[:5]:
            geom = Geometry(g)
            fr = geom.orthonormal_frame(p)
            gv = g.values(p)
            gram = fr @ gv @ fr.T
            assert np.allclose(gram, np.eye(3), atol=1e-10)

    def test_preferred_direction_first(self):
        geom = atlas.builtin("paper_cosh_warp").geometry
        p = (0.2, 1.1, 0.4)
        fr = geom.orthonormal_frame(p, prefer=(0.0, 0.0, 1.0))
        assert fr[0] == pytest.approx([0.0, 0.0, 1.0])

    def test_exterior_derivative_one_form(self):
        geom = euclidean()
        w = one_form(("0", "x", "0"), geom.metric.chart)
        dw = values_of(geom.exterior_derivative(w).jets((0.3, 0.8, 0.1), 0))
        assert dw[0, 1] == pytest.approx(1.0)
        assert dw[1, 0] == pytest.approx(-1.0)

    def test_exterior_derivative_closed_form(self):
        'd(df) = 0 for exact forms.'
        geom = euclidean()
        ch = geom.metric.chart
        df = one_form(("2*x*y", "x^2", "cos(t)"), ch)
        ddf = geom.exterior_derivative(geom.exterior_derivative(df))
        assert np.abs(values_of(ddf.jets((0.4, -0.3, 0.7), 0))).max() < 1e-12

    def test_wedge_one_one(self):
        ch = Chart()
        a = one_form(("1", "0", "0"), ch)
        b = one_form(("0", "2", "0"), ch)
        w = values_of(wedge(a, b).jets((0.1, 0.2, 0.3), 0))
        assert w[0, 1] == pytest.approx(2.0)
        assert w[1, 0] == pytest.approx(-2.0)

    def test_wedge_one_two_unnormalized(self):
        'eta ^ Phi carries no 1/2: the cyclic sum is taken as is.'
        ch = Chart()
        eta = one_form(("0", "0", "1"), ch)
        from contactgeo.fields import TensorField
        comps = np.full((3, 3), "0", dtype=object)
        comps[0, 1], comps[1, 0] = "0.7", "-0.7"
        Phi = TensorField.from_components(comps, (0, 2), ch)
        w = values_of(wedge(eta, Phi).jets((0.1, 0.2, 0.3), 0))
        assert w[2, 0, 1] == pytest.approx(0.7)
        assert w[0, 1, 2] == pytest.approx(0.7)
        assert w[0, 2, 1] == pytest.approx(-0.7)

    def test_wedge_rejects_vectors(self):
        ch = Chart()
        v = vector_field(("1", "0", "0"), ch)
        w = one_form(("0", "1", "0"), ch)
        with pytest.raises(UnsupportedValenceError):
            wedge(v, w)
