"""Almost contact metric structures and their identity battery.

The structure carries (φ, ξ, η, g) on a shared chart.  Everything else
here is evaluation: axiom validation, the fundamental 2-form and its
Kenmotsu-type exterior equation, the canonical (h, h′, ℓ) tensors, the
full pointwise identity suite, η-Einstein and nullity diagnostics, and
the two flavors of D-homothetic deformation.

Naming in residual entries follows the quantity being driven to zero,
so a row called ``identity.tr_ell_value`` is |tr ℓ + 2| and fails
loudly on any structure where that value is not the one being claimed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .fields import MetricField, TensorField, as_scalar_field
from .geometry import Geometry, values_of, wedge
from .jets import DIM, Jet3
from .reports import CheckReport


class FitUndefinedError(ArithmeticError):
    """Least-squares model norm vanished; the fitted scalar is undefined."""


class GaugeError(ValueError):
    """Deformation gauge not positive where it must be."""


def _as_tensor(obj, valence, chart, label):
    if isinstance(obj, TensorField):
        return obj
    return TensorField.from_components(np.asarray(obj, dtype=object),
                                       valence, chart, label=label)


class AlmostContactStructure:
    """(φ, ξ, η) with a compatible metric candidate on one chart.

    Nothing is validated at construction; ``validate_structure`` is the
    judge, and deliberately broken structures are legitimate inputs.
    """

    def __init__(self, g, phi, xi, eta, label=""):
        if not isinstance(g, MetricField):
            raise TypeError("g must be a MetricField")
        self.g = g
        chart = g.chart
        self.phi = _as_tensor(phi, (1, 1), chart, "phi")
        self.xi = _as_tensor(xi, (1, 0), chart, "xi")
        self.eta = _as_tensor(eta, (0, 1), chart, "eta")
        self.label = label
        self._geometry = None
        self._derived = {}

    @property
    def geometry(self):
        if self._geometry is None:
            self._geometry = Geometry(self.g)
        return self._geometry

    def _cached(self, key, maker):
        f = self._derived.get(key)
        if f is None:
            f = maker()
            self._derived[key] = f
        return f

    def __repr__(self):
        return f"AlmostContactStructure({self.label!r})"


# ---------------------------------------------------------------------------
# derived tensor fields

def fundamental_form(acs):
    'The 2-form pairing X with φY through the metric.'
    def maker():
        def fn(p, order):
            g = acs.g.jets(p, order)
            ph = acs.phi.jets(p, order)
            out = np.empty((DIM, DIM), dtype=object)
            for i in range(DIM):
                for j in range(DIM):
                    acc = g[i, 0] * ph[0, j]
                    for a in range(1, DIM):
                        acc = acc + g[i, a] * ph[a, j]
                    out[i, j] = acc
            return out
        return TensorField((0, 2), fn, label="Phi")
    return acs._cached("Phi", maker)


def h_field(acs):
    'Half the Lie derivative of φ along ξ, as a (1,1) field.'
    def maker():
        L = acs.geometry.lie_derivative(acs.xi, acs.phi)

        def fn(p, order):
            Lj = L.jets(p, order)
            out = np.empty((DIM, DIM), dtype=object)
            for idx in np.ndindex((DIM, DIM)):
                out[idx] = Lj[idx] * 0.5
            return out
        return TensorField((1, 1), fn, label="h")
    return acs._cached("h", maker)


def _compose11(acs, key, left, right, label):
    def maker():
        def fn(p, order):
            A = left.jets(p, order)
            B = right.jets(p, order)
            out = np.empty((DIM, DIM), dtype=object)
            for a in range(DIM):
                for b in range(DIM):
                    acc = A[a, 0] * B[0, b]
                    for m in range(1, DIM):
                        acc = acc + A[a, m] * B[m, b]
                    out[a, b] = acc
            return out
        return TensorField((1, 1), fn, label=label)
    return acs._cached(key, maker)


def h_prime_field(acs):
    return _compose11(acs, "hprime", h_field(acs), acs.phi, "h'")


def phi_h_field(acs):
    return _compose11(acs, "phih", acs.phi, h_field(acs), "phi.h")


def ell_field(acs):
    'The Jacobi-type operator sending X to R(X, ξ)ξ.'
    def maker():
        geom = acs.geometry

        def fn(p, order):
            riem = geom.riemann(p, order)
            xij = acs.xi.jets(p, order)
            out = np.empty((DIM, DIM), dtype=object)
            for l in range(DIM):
                for i in range(DIM):
                    acc = Jet3.constant(0.0, order, point=tuple(p))
                    for j in range(DIM):
                        for k in range(DIM):
                            acc = acc + riem[l, i, j, k] * xij[j] * xij[k]
                    out[l, i] = acc
            return out
        return TensorField((1, 1), fn, label="ell")
    return acs._cached("ell", maker)


def h_tensors(acs, p):
    'Float matrices (h, h′, ℓ) at one point.'
    return (values_of(h_field(acs).jets(p, 0)),
            values_of(h_prime_field(acs).jets(p, 0)),
            values_of(ell_field(acs).jets(p, 0)))


# ---------------------------------------------------------------------------
# structure validation

_STRUCTURE_CHECKS = ("phi_squared", "eta_xi", "phi_xi", "eta_phi",
                     "compatibility", "phi_rank")


def structure_residuals(acs, p):
    'Pointwise residual of each structure axiom, keyed by check name.'
    gv = acs.g.values(p)
    phiv = values_of(acs.phi.jets(p, 0))
    xiv = values_of(acs.xi.jets(p, 0))
    etav = values_of(acs.eta.jets(p, 0))
    eye = np.eye(DIM)
    phi2 = phiv @ phiv
    out = {
        "phi_squared": np.abs(phi2 + eye - np.outer(xiv, etav)).max(),
        "eta_xi": abs(etav @ xiv - 1.0),
        "phi_xi": np.abs(phiv @ xiv).max(),
        "eta_phi": np.abs(etav @ phiv).max(),
        "compatibility": np.abs(phiv.T @ gv @ phiv - gv
                                + np.outer(etav, etav)).max(),
        "phi_rank": np.linalg.svd(phiv, compute_uv=False)[2],
    }
    return out


def validate_structure(acs, grid, tol=1e-8, seed=None):
    'One report per structure axiom, aggregated over the grid.'
    seed = grid.seed if seed is None and hasattr(grid, "seed") else seed
    acc = {name: [] for name in _STRUCTURE_CHECKS}
    for p in grid:
        res = structure_residuals(acs, p)
        for name in _STRUCTURE_CHECKS:
            acc[name].append(res[name])
    return [CheckReport.from_residuals(f"structure.{name}", acc[name], tol,
                                       seed=seed)
            for name in _STRUCTURE_CHECKS]


def almost_kenmotsu_check(acs, grid, tol=1e-8, seed=None):
    'Reports for the closedness of η and the exterior equation of Φ.'
    seed = grid.seed if seed is None and hasattr(grid, "seed") else seed
    geom = acs.geometry
    Phi = fundamental_form(acs)
    deta = geom.exterior_derivative(acs.eta)
    dPhi = geom.exterior_derivative(Phi)
    etaPhi = wedge(acs.eta, Phi)
    r_eta, r_phi = [], []
    for p in grid:
        r_eta.append(np.abs(values_of(deta.jets(p, 0))).max())
        diff = values_of(dPhi.jets(p, 0)) - 2.0 * values_of(etaPhi.jets(p, 0))
        r_phi.append(np.abs(diff).max())
    return [CheckReport.from_residuals("kenmotsu.d_eta", r_eta, tol, seed=seed),
            CheckReport.from_residuals("kenmotsu.d_phi", r_phi, tol, seed=seed)]


# ---------------------------------------------------------------------------
# beta fit

@dataclass
class BetaFit:
    points: tuple
    beta: np.ndarray
    residual: np.ndarray

    @property
    def max_residual(self):
        return float(self.residual.max())


def beta_kenmotsu_fit(acs, grid):
    """Per-probe least-squares slope of ∇φ against its Kenmotsu-type model.

    The model sends (X, Y) to g(φX, Y)ξ − η(Y)φX; the fitted slope is
    the structure's β, and the residual measures how far ∇φ is from
    lying on the model line at all.
    """
    geom = acs.geometry
    nabla_phi = geom.covariant_derivative(acs.phi)
    Phi = fundamental_form(acs)
    betas, resids, pts = [], [], []
    for p in grid:
        A = values_of(nabla_phi.jets(p, 0))
        Phv = values_of(Phi.jets(p, 0))
        phiv = values_of(acs.phi.jets(p, 0))
        xiv = values_of(acs.xi.jets(p, 0))
        etav = values_of(acs.eta.jets(p, 0))
        M = np.empty((DIM, DIM, DIM))
        for a in range(DIM):
            for c in range(DIM):
                for b in range(DIM):
                    M[a, c, b] = Phv[b, c] * xiv[a] - etav[b] * phiv[a, c]
        den = float((M * M).sum())
        if den < 1e-20:
            raise FitUndefinedError(
                f"model for the slope of nabla-phi vanishes at {tuple(p)}")
        beta = float((A * M).sum()) / den
        betas.append(beta)
        resids.append(np.abs(A - beta * M).max())
        pts.append(tuple(p))
    return BetaFit(tuple(pts), np.array(betas), np.array(resids))


def beta_fit_jet(acs, p, order=2):
    'The fitted slope of beta_kenmotsu_fit as a jet at p (order ≤ 2).'
    geom = acs.geometry
    A = geom.covariant_derivative(acs.phi).jets(p, order)
    Phv = fundamental_form(acs).jets(p, order)
    phiv = acs.phi.jets(p, order)
    xiv = acs.xi.jets(p, order)
    etav = acs.eta.jets(p, order)
    num = Jet3.constant(0.0, order, point=tuple(p))
    den = Jet3.constant(0.0, order, point=tuple(p))
    for a in range(DIM):
        for c in range(DIM):
            for b in range(DIM):
                m = Phv[b, c] * xiv[a] - etav[b] * phiv[a, c]
                num = num + A[a, c, b] * m
                den = den + m * m
    if abs(den.value) < 1e-20:
        raise FitUndefinedError(
            f"model for the slope of nabla-phi vanishes at {tuple(p)}")
    return num / den


# ---------------------------------------------------------------------------
# identity suite

IDENTITY_NAMES = (
    "phi_squared", "compatibility", "d_eta", "d_phi_kenmotsu",
    "h_zero", "h_prime_zero", "h_xi", "ell_xi",
    "tr_h", "tr_h_phi", "h_phi_anticommute",
    "h_symmetry", "ell_symmetry",
    "tr_ell_identity", "tr_ell_value", "phi_ell_phi",
    "nabla_xi", "r_xi_reduction", "r_xi_full", "nabla_xi_h_prime",
)


def identity_residuals(acs, p):
    'Pointwise residual of every suite identity, keyed by name.'
    geom = acs.geometry
    gv = acs.g.values(p)
    phiv = values_of(acs.phi.jets(p, 0))
    xiv = values_of(acs.xi.jets(p, 0))
    etav = values_of(acs.eta.jets(p, 0))
    eye = np.eye(DIM)
    phi2 = phiv @ phiv

    hv = values_of(h_field(acs).jets(p, 0))
    hpv = values_of(h_prime_field(acs).jets(p, 0))
    phihv = values_of(phi_h_field(acs).jets(p, 0))
    ellv = values_of(ell_field(acs).jets(p, 0))
    Phi = fundamental_form(acs)

    deta_v = values_of(geom.exterior_derivative(acs.eta).jets(p, 0))
    dPhi_v = values_of(geom.exterior_derivative(Phi).jets(p, 0))
    etaPhi_v = values_of(wedge(acs.eta, Phi).jets(p, 0))

    covxi_v = values_of(geom.covariant_derivative(acs.xi).jets(p, 0))
    covphih_v = values_of(geom.covariant_derivative(phi_h_field(acs)).jets(p, 0))
    covhp_v = values_of(geom.covariant_derivative(h_prime_field(acs)).jets(p, 0))

    riem = values_of(geom.riemann(p, 0))
    r_xi = np.einsum("lijk,k->lij", riem, xiv)
    reduction = np.empty((DIM, DIM, DIM))
    full = np.empty((DIM, DIM, DIM))
    for l in range(DIM):
        for i in range(DIM):
            for j in range(DIM):
                reduction[l, i, j] = etav[i] * eye[l, j] - etav[j] * eye[l, i]
                full[l, i, j] = (etav[i] * (eye[l, j] - phihv[l, j])
                                 - etav[j] * (eye[l, i] - phihv[l, i])
                                 + covphih_v[l, j, i] - covphih_v[l, i, j])
    nabla_xi_hp = np.einsum("acb,c->ab", covhp_v, xiv)

    def amax(x):
        return float(np.abs(x).max())

    return {
        "phi_squared": amax(phi2 + eye - np.outer(xiv, etav)),
        "compatibility": amax(phiv.T @ gv @ phiv - gv + np.outer(etav, etav)),
        "d_eta": amax(deta_v),
        "d_phi_kenmotsu": amax(dPhi_v - 2.0 * etaPhi_v),
        "h_zero": amax(hv),
        "h_prime_zero": amax(hpv),
        "h_xi": amax(hv @ xiv),
        "ell_xi": amax(ellv @ xiv),
        "tr_h": abs(np.trace(hv)),
        "tr_h_phi": abs(np.trace(hv @ phiv)),
        "h_phi_anticommute": amax(hv @ phiv + phiv @ hv),
        "h_symmetry": amax(gv @ hv - (gv @ hv).T),
        "ell_symmetry": amax(gv @ ellv - (gv @ ellv).T),
        "tr_ell_identity": abs(np.trace(ellv) + 2.0 + np.trace(hv @ hv)),
        "tr_ell_value": abs(np.trace(ellv) + 2.0),
        "phi_ell_phi": amax(phiv @ ellv @ phiv - ellv
                            - 2.0 * (hv @ hv - phi2)),
        "nabla_xi": amax(covxi_v + phi2 - hpv),
        "r_xi_reduction": amax(r_xi - reduction),
        "r_xi_full": amax(r_xi - full),
        "nabla_xi_h_prime": amax(nabla_xi_hp + 2.0 * hpv),
    }


def identity_suite(acs, grid, tol=1e-7, seed=None):
    'One report per identity, aggregated over the grid.'
    seed = grid.seed if seed is None and hasattr(grid, "seed") else seed
    acc = {name: [] for name in IDENTITY_NAMES}
    for p in grid:
        res = identity_residuals(acs, p)
        for name in IDENTITY_NAMES:
            acc[name].append(res[name])
    return [CheckReport.from_residuals(f"identity.{name}", acc[name], tol,
                                       seed=seed)
            for name in IDENTITY_NAMES]


# ---------------------------------------------------------------------------
# eta-Einstein decomposition

@dataclass
class EtaEinsteinDecomposition:
    point: tuple
    alpha: float
    beta: float
    residual: float
    scalar: float

    @property
    def alpha_scalar_residual(self):
        'Deviation of alpha from its scalar-curvature reconstruction.'
        return self.alpha - (1.0 + self.scalar / 2.0)

    @property
    def beta_scalar_residual(self):
        return self.beta + (3.0 + self.scalar / 2.0)


def eta_einstein_decompose(acs, p):
    """Split the Ricci tensor as αg + βη⊗η in an adapted frame.

    α is read off a unit direction orthogonal to ξ, β from the ξ
    direction; the residual is the worst frame component the split
    fails to account for.
    """
    geom = acs.geometry
    xiv = values_of(acs.xi.jets(p, 0))
    etav = values_of(acs.eta.jets(p, 0))
    frame = geom.orthonormal_frame(p, prefer=xiv)
    ricv = values_of(geom.ricci(p, 0))
    gv = acs.g.values(p)
    alpha = frame[1] @ ricv @ frame[1]
    beta = frame[0] @ ricv @ frame[0] - alpha
    worst = 0.0
    for a in range(DIM):
        for b in range(DIM):
            model = (alpha * (frame[a] @ gv @ frame[b])
                     + beta * (etav @ frame[a]) * (etav @ frame[b]))
            worst = max(worst, abs(frame[a] @ ricv @ frame[b] - model))
    scalar = geom.scalar_curvature(p, 0).value
    return EtaEinsteinDecomposition(tuple(p), float(alpha), float(beta),
                                    float(worst), float(scalar))


# ---------------------------------------------------------------------------
# nullity diagnostics

@dataclass
class NullityDiagnostics:
    points: tuple
    k: np.ndarray
    nullity_residual: np.ndarray
    k_consistency: np.ndarray
    h_square_residual: np.ndarray
    ricci_xi_residual: np.ndarray
    nu: np.ndarray
    grad_k_residual: np.ndarray


def nullity_diagnostics(acs, grid):
    """Fit R(X,Y)ξ against the nullity model and collect every residual.

    The fitted slope k̂ is carried as a first-order jet, so its gradient
    comes straight out of the same fit rather than from differencing
    neighbouring probes.
    """
    geom = acs.geometry
    pts, ks, nres, kcons, h2res, ricres, nus, gkres = \
        [], [], [], [], [], [], [], []
    for p in grid:
        p = tuple(p)
        riem = geom.riemann(p, 1)
        xij = acs.xi.jets(p, 1)
        etaj = acs.eta.jets(p, 1)
        D = np.empty((DIM, DIM, DIM), dtype=object)
        N = np.empty((DIM, DIM, DIM), dtype=object)
        zero = Jet3.constant(0.0, 1, point=p)
        for l in range(DIM):
            for i in range(DIM):
                for j in range(DIM):
                    acc = zero
                    for k in range(DIM):
                        acc = acc + riem[l, i, j, k] * xij[k]
                    D[l, i, j] = acc
                    n = zero
                    if l == i:
                        n = n + etaj[j]
                    if l == j:
                        n = n - etaj[i]
                    N[l, i, j] = n
        num, den = zero, zero
        for idx in np.ndindex((DIM, DIM, DIM)):
            num = num + D[idx] * N[idx]
            den = den + N[idx] * N[idx]
        if abs(den.value) < 1e-20:
            raise FitUndefinedError(
                f"nullity model vanishes at {p}")
        khat = num / den
        k = khat.value
        worst = max(abs(D[idx].value - k * N[idx].value)
                    for idx in np.ndindex((DIM, DIM, DIM)))

        phiv = values_of(acs.phi.jets(p, 0))
        xiv = values_of(xij)
        hv = values_of(h_field(acs).jets(p, 0))
        ginv_v = values_of(geom.inverse_metric_jets(p, 0))
        ricv = values_of(geom.ricci(p, 0))

        h2 = hv @ hv
        h2res.append(np.abs(h2 - (k + 1.0) * (phiv @ phiv)).max())
        ricres.append(np.abs(ginv_v @ ricv @ xiv - 2.0 * k * xiv).max())
        dec = eta_einstein_decompose(acs, p)
        kcons.append(abs(k - (dec.alpha + dec.beta) / 2.0))
        nus.append(math.sqrt(-1.0 - k) if k < -1.0 else 0.0)
        gradk = np.array([sum(ginv_v[i, j] * khat.partial(j).value
                              for j in range(DIM)) for i in range(DIM)])
        gkres.append(np.abs(gradk + 4.0 * (k + 1.0) * xiv).max())
        pts.append(p)
        ks.append(k)
        nres.append(worst)
    return NullityDiagnostics(tuple(pts), np.array(ks), np.array(nres),
                              np.array(kcons), np.array(h2res),
                              np.array(ricres), np.array(nus),
                              np.array(gkres))


# ---------------------------------------------------------------------------
# D-homothetic deformation

def _component_fields(t, what):
    f = getattr(t, "fields", None)
    if f is None:
        raise TypeError(
            f"{what} must be component-backed to deform (built from "
            "expressions, not a bare evaluation function)")
    return f


def d_homothetic(acs, gauge, check_points=()):
    """Deform the structure by a constant or by a positive scalar gauge.

    Constant gauge a rescales the whole structure (η by a, ξ by 1/a,
    the metric by a with the a(a−1) correction along η⊗η); a scalar
    gauge σ deforms only the metric, g* = σg + (1−σ)η⊗η, leaving
    (φ, ξ, η) fixed.  ``check_points`` are probed for gauge positivity
    up front.
    """
    chart = acs.g.chart
    eta_f = _component_fields(acs.eta, "eta")
    g_comp = [[acs.g.component(i, j) for j in range(DIM)] for i in range(DIM)]

    if isinstance(gauge, (int, float, np.integer, np.floating)):
        a = float(gauge)
        if a <= 0.0:
            raise GaugeError(f"constant gauge must be positive, got {a}")
        xi_f = _component_fields(acs.xi, "xi")
        comps = np.empty((DIM, DIM), dtype=object)
        for i in range(DIM):
            for j in range(DIM):
                comps[i, j] = (g_comp[i][j] * a
                               + eta_f[i] * eta_f[j] * (a * (a - 1.0)))
        gbar = MetricField(chart, comps, label=f"{acs.g.label}*{a:g}")
        xi_bar = np.array([xi_f[i] * (1.0 / a) for i in range(DIM)],
                          dtype=object)
        eta_bar = np.array([eta_f[i] * a for i in range(DIM)], dtype=object)
        return AlmostContactStructure(gbar, acs.phi, xi_bar, eta_bar,
                                      label=f"{acs.label} (a={a:g})")

    sigma = as_scalar_field(gauge, chart)
    for p in check_points:
        v = sigma.value(p)
        if not v > 0.0:
            raise GaugeError(f"gauge not positive at {tuple(p)}: {v!r}")
    comps = np.empty((DIM, DIM), dtype=object)
    for i in range(DIM):
        for j in range(DIM):
            comps[i, j] = (g_comp[i][j] * sigma
                           + eta_f[i] * eta_f[j] * (1.0 - sigma))
    gstar = MetricField(chart, comps, label=f"{acs.g.label}*sigma")
    return AlmostContactStructure(gstar, acs.phi, acs.xi, acs.eta,
                                  label=f"{acs.label} (gauge)")
