"""Acceptance battery: one verdict line per advertised guarantee.

Each test pins a headline capability of the package at its stated
tolerance: the space-form curvature of the hyperbolic warped model,
the soliton constant λ = 2, the gauge pipeline onto the exponential
model, the warp-profile integrator, the full contact identity battery
on both builtin models, nullity and Ricci-split reconstructions, the
Lie-operator oracles, jet-vs-finite-difference integrity, and the
reduced flow.  Tolerances here are contractual: do not relax them to
make a red row green.
"""

import functools
import math

import numpy as np
import pytest

from contactgeo import contact, exprs, solitons
from contactgeo.atlas import ExprProfile, builtin, sigma_gauge, solve_warp_ode
from contactgeo.contact import IDENTITY_NAMES
from contactgeo.fd import fd_partials
from contactgeo.geometry import Geometry, values_of
from contactgeo.probes import ProbeGrid, random_metric, random_vector
from contactgeo.suites import SuiteOptions, run_suite
from contactgeo.manifest import from_builtin

from expr_corpus import EXPRESSIONS, float_eval, sample_points

COSH = builtin("paper_cosh_warp")
KEN = builtin("paper_kenmotsu_exp")


def grid(acs, n, seed=7):
    return ProbeGrid.halton(acs.g.chart, n, seed=seed)


# --- constant sectional curvature of the hyperbolic model ------------------

def test_space_form_curvature_of_the_hyperbolic_model():
    geom = Geometry(COSH.g)
    planes = [((1, 0, 0), (0, 1, 0)), ((1, 0, 0), (0, 0, 1)),
              ((0, 1, 0), (0, 0, 1))]
    for p in grid(COSH, 64):
        for u, v in planes:
            assert abs(geom.sectional(p, u, v) + 1.0) <= 1e-7
        ric = values_of(geom.ricci(p, 0))
        gv = COSH.g.values(p)
        assert np.abs(ric + 2.0 * gv).max() <= 1e-8
        assert abs(geom.scalar_curvature(p, 0).value + 6.0) <= 1e-8


# --- soliton constant --------------------------------------------------------

def test_soliton_constant_two_with_expanding_class():
    g16 = grid(COSH, 16)
    fit = solitons.solve_lambda(COSH.g, None, 0.0, g16)
    assert abs(fit.lambda_hat - 2.0) <= 1e-8
    assert fit.classification == "expanding"
    assert fit.residual_after <= 1e-8
    # the constant tracks rho affinely; which rho (if any) is
    # distinguished stays an open modelling choice, so the row must
    # say which one it used
    for rho in (0.1, 0.25):
        fit = solitons.solve_lambda(COSH.g, None, rho, g16)
        assert abs(fit.lambda_hat - (2.0 + 6.0 * rho)) <= 1e-8
        man = from_builtin("paper_cosh_warp")
        rows = run_suite(man, "soliton",
                         SuiteOptions(probe_count=8, seed=7, solve=True,
                                      rho=rho))
        assert f"rho {rho:.12g}" in rows[0].notes
        assert "lambda_hat" in rows[0].notes


# --- gauge pipeline from the hyperbolic to the exponential model ------------

def test_deformation_pipeline_reaches_the_exponential_model():
    g12 = grid(COSH, 12)
    fit = contact.beta_kenmotsu_fit(COSH, g12)
    assert max(abs(b - math.tanh(p[2]))
               for b, p in zip(fit.beta, fit.points)) <= 1e-8

    sigma = sigma_gauge("tanh(t)", (-1.0, 1.0), step=1e-3)
    for p in g12:
        want = math.exp(2 * p[2]) / math.cosh(p[2]) ** 2
        assert abs(sigma.value(p) - want) <= 1e-6

    deformed = contact.d_homothetic(COSH, sigma, check_points=list(g12))
    for p in g12:
        assert np.abs(deformed.g.values(p) - KEN.g.values(p)).max() <= 1e-6

    after = contact.beta_kenmotsu_fit(deformed, g12)
    assert max(abs(b - 1.0) for b in after.beta) <= 1e-7


# --- warp profile equation and integrator -----------------------------------

def test_warp_profile_equation_and_integrator():
    sech = ExprProfile("1/cosh(t)", -1.0, (-2.0, 2.0))
    from contactgeo.atlas import warp_ode_residual
    for t in np.linspace(-2.0, 2.0, 50):
        assert abs(warp_ode_residual(sech, t)) <= 1e-10

    prof = solve_warp_ode(-1.0, 1.0, 0.0, 2.0, step=1e-3)
    for t in np.linspace(0.0, 2.0, 41):
        assert abs(prof.gamma(t) - 1 / math.cosh(t)) <= 1e-6

    errs = [abs(solve_warp_ode(-1.0, 1.0, 0.0, 2.0, step=h).gamma(2.0)
                - 1 / math.cosh(2.0)) for h in (0.2, 0.1, 0.05)]
    order = min(math.log2(errs[0] / errs[1]), math.log2(errs[1] / errs[2]))
    assert order >= 3.8


# --- contact identity battery on both builtin models ------------------------

@functools.lru_cache(maxsize=None)
def identity_maxima(name):
    acs = builtin(name)
    worst = dict.fromkeys(IDENTITY_NAMES, 0.0)
    for p in grid(acs, 12):
        res = contact.identity_residuals(acs, p)
        for k, v in res.items():
            worst[k] = max(worst[k], v)
    return worst


@pytest.mark.parametrize("identity", IDENTITY_NAMES)
@pytest.mark.parametrize("model", ["paper_cosh_warp", "paper_kenmotsu_exp"])
def test_identity_battery(model, identity):
    worst = identity_maxima(model)[identity]
    why = ""
    if model == "paper_cosh_warp":
        why = ("; this model has slope tanh t, not 1, so unit-slope "
               "identities cannot hold on it")
    assert worst <= 1e-7, (
        f"{identity} on {model}: max residual {worst:.6g}{why}")


# --- nullity constant and Ricci split ---------------------------------------

def test_nullity_and_ricci_split_reconstruction():
    for acs in (COSH, KEN):
        g12 = grid(acs, 12)
        d = contact.nullity_diagnostics(acs, g12)
        assert np.abs(d.k + 1.0).max() <= 1e-7
        assert np.abs(d.k_consistency).max() <= 1e-7   # k vs (alpha+beta)/2

    geom = Geometry(KEN.g)
    for p in grid(KEN, 12):
        dec = contact.eta_einstein_decompose(KEN, p)
        assert abs(dec.alpha_scalar_residual) <= 1e-8
        assert abs(dec.beta_scalar_residual) <= 1e-8
        sj = geom.scalar_curvature(p, 1)
        xiv = values_of(KEN.xi.jets(p, 0))
        xi_r = sum(xiv[i] * sj.partial(i).value for i in range(3))
        assert abs(xi_r + 2.0 * (6.0 + sj.value)) <= 1e-7


# --- Lie operator assemblies against their defining oracles -----------------

def test_lie_operator_assemblies_match_their_oracles():
    chart = builtin("euclidean3").g.chart
    rng = np.random.default_rng(41)
    for k in range(20):
        g = random_metric(rng, chart)
        V = random_vector(rng, chart)
        p = ProbeGrid.halton(chart, 1, seed=300 + k).points[0]
        geom = Geometry(g)
        a = values_of(geom.lie_connection(V, p, 0))
        b = values_of(geom.lie_connection_bracket(V, p, 0))
        assert np.abs(a - b).max() <= 1e-7
        c = values_of(geom.lie_curvature(V, p))
        direct = geom.lie_derivative(V, geom.riemann_field())
        d = values_of(direct.jets(p, 0))
        assert np.abs(c - d).max() <= 1e-6


# --- jet derivatives against Richardson differences -------------------------

def test_jet_derivatives_match_richardson_differences():
    assert len(EXPRESSIONS) >= 30
    rng = np.random.default_rng(11)
    pts = sample_points(rng, 2)
    for text in EXPRESSIONS:
        tree = exprs.parse(text)
        f = lambda q: float_eval(tree, q)          # noqa: E731
        for p in pts:
            p = tuple(p)
            j = exprs.eval_jet(tree, p, 3)
            _, d1, d2, d3 = fd_partials(f, p, 3)
            r1 = np.abs(j.d1 - d1) / np.maximum(1.0, np.abs(d1))
            r2 = np.abs(j.d2 - d2) / np.maximum(1.0, np.abs(d2))
            r3 = np.abs(j.d3 - d3) / np.maximum(1.0, np.abs(d3))
            assert r1.max() <= 1e-5, text
            assert r2.max() <= 1e-5, text
            assert r3.max() <= 1e-3, text


# --- reduced flow ------------------------------------------------------------

def test_reduced_flow_and_existence_warning():
    traj = solitons.einstein_family_flow(-2.0, 0.0, 1.0, 1.0, 1e-3)
    assert abs(traj.value(1.0) - 5.0) <= 1e-10
    flat = solitons.einstein_family_flow(-2.0, 1.0 / 3.0, 1.0, 1.0, 1e-3)
    assert flat.value(1.0) == pytest.approx(1.0, abs=1e-12)
    for rho in (0.25, 0.3):
        with pytest.warns(solitons.ShortTimeExistenceWarning):
            solitons.bourguignon_velocity(COSH.g, rho, (0.0, 1.0, 0.0))


# --- scope note --------------------------------------------------------------

def test_scope_of_the_numerical_evidence():
    """The uniqueness-style conclusions about these structures are
    proofs over all manifolds and cannot be established by evaluation;
    what the battery above does verify is every pointwise identity such
    arguments manipulate, on both concrete models."""
    pytest.skip("informational: instance-level checks above are the "
                "numerical content; universal claims are out of scope")
