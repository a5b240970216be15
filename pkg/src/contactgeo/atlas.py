"""Built-in model structures and the warp-profile toolkit.

The registry ships three structures on the (x, y, t) chart: flat space
with a rotation structure, and the two warped-product metrics over the
hyperbolic half-plane whose fiber scale is cosh(t) respectively e^t.
Warp profiles (closed-form or integrated) expose value, derivatives,
and truncated Taylor series at any admissible t, which is what the
removable-singularity handling and the gauge construction feed on.
"""

import math

import numpy as np

from . import exprs, series as serlib
from .contact import AlmostContactStructure
from .fields import Chart, MetricField, ScalarField, as_scalar_field
from .jets import DIM, Jet3
from .series import Series1


class ProfileRangeError(ValueError):
    """Profile evaluated outside its covered t-interval."""


class SingularityError(ArithmeticError):
    """Formula hit a vanishing denominator that is not removable here."""


# ---------------------------------------------------------------------------
# warp profiles

def _parse_profile_expr(gamma):
    tree = exprs.parse(gamma) if isinstance(gamma, str) else gamma
    extra = exprs.free_vars(tree) - {"t"}
    if extra:
        raise exprs.ExprError(
            f"warp profile may only use t, found {sorted(extra)}", 0)
    return tree


class ExprProfile:
    """Warp profile given in closed form as an expression in t."""

    def __init__(self, gamma, kn, t_range):
        self._tree = _parse_profile_expr(gamma)
        self.kn = float(kn)
        lo, hi = (float(t_range[0]), float(t_range[1]))
        if lo >= hi:
            raise ProfileRangeError(f"empty t-range ({lo}, {hi})")
        self.t_range = (lo, hi)

    def _check(self, t):
        lo, hi = self.t_range
        if not lo <= t <= hi:
            raise ProfileRangeError(
                f"t = {t} outside profile range [{lo}, {hi}]")

    def series(self, t, order):
        self._check(t)
        return exprs.eval_series(self._tree, t, order)

    def gamma(self, t):
        return self.series(t, 0).value

    def dgamma(self, t):
        return self.series(t, 1).deriv(1)

    def d2gamma(self, t):
        return self.series(t, 2).deriv(2)


def _hermite(t, t0, t1, f0, f1, m0, m1):
    h = t1 - t0
    s = (t - t0) / h
    s2, s3 = s * s, s * s * s
    return (f0 * (2 * s3 - 3 * s2 + 1) + h * m0 * (s3 - 2 * s2 + s)
            + f1 * (-2 * s3 + 3 * s2) + h * m1 * (s3 - s2))


class OdeProfile:
    """Warp profile from dense samples of u = ln γ and v = u′.

    Between samples u and v are cubic-Hermite interpolated (their exact
    slopes are known from the system itself), so the profile is C¹ and
    inherits the integrator's accuracy everywhere in range.
    """

    def __init__(self, ts, us, vs, kn):
        self.ts = np.asarray(ts, dtype=float)
        self.us = np.asarray(us, dtype=float)
        self.vs = np.asarray(vs, dtype=float)
        self.kn = float(kn)
        self.t_range = (float(self.ts[0]), float(self.ts[-1]))

    def _check(self, t):
        lo, hi = self.t_range
        if not lo <= t <= hi:
            raise ProfileRangeError(
                f"t = {t} outside profile range [{lo}, {hi}]")

    def _uv(self, t):
        self._check(t)
        ts = self.ts
        i = int(np.searchsorted(ts, t, side="right")) - 1
        i = max(0, min(i, ts.size - 2))
        if t == ts[i]:
            return float(self.us[i]), float(self.vs[i])
        t0, t1 = ts[i], ts[i + 1]
        u0, u1 = self.us[i], self.us[i + 1]
        v0, v1 = self.vs[i], self.vs[i + 1]
        a0 = self.kn * math.exp(2 * u0)
        a1 = self.kn * math.exp(2 * u1)
        u = _hermite(t, t0, t1, u0, u1, v0, v1)
        v = _hermite(t, t0, t1, v0, v1, a0, a1)
        return float(u), float(v)

    def gamma(self, t):
        u, _ = self._uv(t)
        return math.exp(u)

    def dgamma(self, t):
        u, v = self._uv(t)
        return v * math.exp(u)

    def d2gamma(self, t):
        u, v = self._uv(t)
        g = math.exp(u)
        return (self.kn * g * g + v * v) * g

    def series(self, t, order):
        """Taylor coefficients of γ at t, regrown from the system.

        Only (u, v) at t come from interpolation; every higher
        coefficient is rebuilt through the recurrence the equation
        itself imposes, so series consistency does not degrade with
        differentiation order.
        """
        u0, v0 = self._uv(t)
        c = np.zeros(order + 1)
        c[0] = u0
        if order >= 1:
            c[1] = v0
        for m in range(order - 1):
            e2u = serlib.exp(Series1(2.0 * c[:m + 1]))
            c[m + 2] = self.kn * e2u.c[m] / ((m + 1) * (m + 2))
        return serlib.exp(Series1(c))


def warp_ode_residual(profile, t):
    'How far (γ, γ′, γ″) at t are from satisfying (ln γ)″ = K^N γ².'
    g0 = profile.gamma(t)
    g1 = profile.dgamma(t)
    g2 = profile.d2gamma(t)
    return g2 / g0 - (g1 / g0) ** 2 - profile.kn * g0 * g0


def solve_warp_ode(kn, gamma0, dgamma0, t_max, step=1e-3):
    """Integrate the warp equation from t = 0 with RK4.

    Works on u = ln γ (so positivity of γ is structural), with
    u′ = v, v′ = K^N e^{2u}; the sample spacing is adjusted so the
    final sample lands exactly on t_max.
    """
    if gamma0 <= 0:
        raise ValueError(f"gamma0 must be positive, got {gamma0}")
    if step <= 0 or t_max <= 0:
        raise ValueError("step and t_max must be positive")
    n = max(1, int(math.ceil(t_max / step)))
    h = t_max / n
    kn = float(kn)

    def rhs(u, v):
        return v, kn * math.exp(2 * u)

    ts = np.empty(n + 1)
    us = np.empty(n + 1)
    vs = np.empty(n + 1)
    u, v = math.log(gamma0), dgamma0 / gamma0
    ts[0], us[0], vs[0] = 0.0, u, v
    for i in range(n):
        k1u, k1v = rhs(u, v)
        k2u, k2v = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v)
        k3u, k3v = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v)
        k4u, k4v = rhs(u + h * k3u, v + h * k3v)
        u += h * (k1u + 2 * k2u + 2 * k3u + k4u) / 6.0
        v += h * (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0
        ts[i + 1], us[i + 1], vs[i + 1] = (i + 1) * h, u, v
    ts[n] = t_max               # n*h can round below t_max
    return OdeProfile(ts, us, vs, kn)


def soliton_f_profile(profile, lam, rho, scalar_r, t,
                      limit_mode=False, eps=1e-6):
    """Potential-slope profile of the warped soliton equation at t.

    Evaluates (γ″ + (λ + ρR)γ + K^N γ³)/γ′² − 3γ′/γ.  Where γ′
    vanishes the quotient is 0/0; ``limit_mode`` expands numerator and
    denominator as series at t and cancels the common zero instead of
    failing, and is also valid at regular points.
    """
    c = lam + rho * scalar_r
    g0 = profile.gamma(t)
    g1 = profile.dgamma(t)
    tail = 3.0 * g1 / g0
    if not limit_mode:
        if abs(g1) <= eps:
            raise SingularityError(
                f"gamma' vanishes at t = {t}; request limit mode")
        g2 = profile.d2gamma(t)
        return (g2 + c * g0 + profile.kn * g0 ** 3) / g1 ** 2 - tail

    s = profile.series(t, 6)
    ds = _dseries(s)
    num = _dseries(ds) + Series1.constant(c, s.order) * s \
        + Series1.constant(profile.kn, s.order) * s * s * s
    den = ds * ds
    dscale = float(np.abs(den.c).max())
    if dscale == 0.0:
        raise SingularityError(f"gamma' vanishes identically near t = {t}")
    lead = int(np.argmax(np.abs(den.c) > 1e-9 * dscale))
    nscale = max(1.0, float(np.abs(num.c).max()))
    if any(abs(num.c[j]) > 1e-7 * nscale for j in range(min(lead, num.order + 1))):
        raise SingularityError(
            f"non-removable singularity at t = {t}: numerator does not "
            f"vanish to the denominator's order {lead}")
    head = float(num.c[lead]) / float(den.c[lead]) if lead <= num.order else 0.0
    return head - tail


def _dseries(s):
    c = s.c
    if c.size == 1:
        return Series1(np.zeros(1))
    return Series1(c[1:] * np.arange(1, c.size))


# ---------------------------------------------------------------------------
# sigma gauge

class _BetaSource:
    'Uniform access to a β(t) supplied as expression, protocol, or callable.'

    def __init__(self, beta):
        self._tree = None
        self._proto = None
        self._fn = None
        if isinstance(beta, str) or isinstance(beta, (exprs.Num, exprs.Var,
                                                      exprs.Neg, exprs.Bin,
                                                      exprs.Pow, exprs.Call)):
            self._tree = _parse_profile_expr(beta)
        elif hasattr(beta, "derivatives_at"):
            self._proto = beta
        elif callable(beta):
            self._fn = beta
        else:
            raise TypeError(f"cannot interpret {beta!r} as a t-profile")

    def derivatives_at(self, t, upto):
        if self._tree is not None:
            return exprs.eval_series(self._tree, t, upto).derivatives(upto)
        if self._proto is not None:
            return tuple(self._proto.derivatives_at(t, upto))
        if upto > 0:
            raise TypeError(
                "plain-callable beta carries no derivative information; "
                "gauge jets above order 1 need an expression or a "
                "derivatives_at provider")
        return (float(self._fn(t)),)

    def value(self, t):
        return self.derivatives_at(t, 0)[0]


def _t_jet(p, order, derivs):
    'Jet of a function of t alone at chart point p.'
    d1 = d2 = d3 = None
    if order >= 1:
        d1 = np.zeros(DIM)
        d1[2] = derivs[1]
    if order >= 2:
        d2 = np.zeros((DIM, DIM))
        d2[2, 2] = derivs[2]
    if order >= 3:
        d3 = np.zeros((DIM, DIM, DIM))
        d3[2, 2, 2] = derivs[3]
    return Jet3(derivs[0], d1, d2, d3, order=order, point=tuple(p))


def sigma_gauge(beta, t_range, step=1e-3):
    """Gauge σ with (ln σ)′ = 2(1 − β), normalized to σ(0) = 1.

    The log-integral is accumulated by RK4 quadrature from 0 outward on
    a grid covering the requested range (extended to include 0 when
    necessary) and Hermite-interpolated between nodes.  The returned
    scalar field exposes jets up to order 3 when β carries enough
    derivative information.
    """
    src = _BetaSource(beta)
    lo = min(float(t_range[0]), 0.0)
    hi = max(float(t_range[1]), 0.0)
    if step <= 0:
        raise ValueError("step must be positive")

    def q(t):
        return 1.0 - src.value(t)

    def march(t_end):
        n = max(1, int(math.ceil(abs(t_end) / step)))
        h = t_end / n
        ts = [0.0]
        Is = [0.0]
        acc = 0.0
        for i in range(n):
            t0 = i * h
            acc += h / 6.0 * (q(t0) + 4.0 * q(t0 + 0.5 * h) + q(t0 + h))
            # pin the last node to t_end so rounding in n*h cannot leave
            # the requested endpoint outside the covered range
            ts.append(t_end if i == n - 1 else (i + 1) * h)
            Is.append(acc)
        return ts, Is

    ts, Is = [0.0], [0.0]
    if hi > 0:
        t_f, i_f = march(hi)
        ts = ts + t_f[1:]
        Is = Is + i_f[1:]
    if lo < 0:
        t_b, i_b = march(lo)
        ts = t_b[1:][::-1] + ts
        Is = i_b[1:][::-1] + Is
    ts = np.asarray(ts)
    Is = np.asarray(Is)

    def log_integral(t):
        if not ts[0] <= t <= ts[-1]:
            raise ProfileRangeError(
                f"t = {t} outside gauge range [{ts[0]}, {ts[-1]}]")
        i = int(np.searchsorted(ts, t, side="right")) - 1
        i = max(0, min(i, ts.size - 2))
        if t == ts[i]:
            return float(Is[i])
        return _hermite(t, ts[i], ts[i + 1], Is[i], Is[i + 1],
                        q(ts[i]), q(ts[i + 1]))

    def fn(p, order):
        t = p[2]
        sig = math.exp(2.0 * log_integral(t))
        if order == 0:
            return Jet3.constant(sig, 0, point=p)
        b = src.derivatives_at(t, order - 1)
        qs = [2.0 - 2.0 * b[0]]
        if order >= 2:
            qs.append(-2.0 * b[1])
        if order >= 3:
            qs.append(-2.0 * b[2])
        d = [sig, qs[0] * sig]
        if order >= 2:
            d.append(qs[1] * sig + qs[0] * d[1])
        if order >= 3:
            d.append(qs[2] * sig + 2.0 * qs[1] * d[1] + qs[0] * d[2])
        return _t_jet(p, order, d)

    return ScalarField(fn, label="sigma")


# ---------------------------------------------------------------------------
# warped products

def _warp_square_field(profile, mode):
    if mode not in ("inverse-gamma", "direct"):
        raise ValueError(f"mode must be inverse-gamma or direct, got {mode!r}")

    def fn(p, order):
        g = profile.series(p[2], order)
        if mode == "inverse-gamma":
            if abs(g.value) < 1e-15:
                raise SingularityError(
                    f"warp profile vanishes at t = {p[2]}")
            w = Series1.constant(1.0, order) / g
        else:
            w = g
        return _t_jet(p, order, (w * w).derivatives(min(order, 3)))

    return ScalarField(fn, label=f"warp^2[{mode}]")


def warped_product(fiber, profile, mode, chart=None):
    """Metric w(t)²·(fiber on x, y) + dt² with w = 1/γ or w = γ.

    ``fiber`` is a 2×2 component array over (x, y); ``mode`` selects
    whether the profile's γ divides (the inverse-gamma construction) or
    multiplies (the direct warped product) the fiber scale.
    """
    if chart is None:
        chart = Chart(box=((-1.0, 1.0), (0.5, 3.0),
                           (max(profile.t_range[0], -1.0),
                            min(profile.t_range[1], 1.0))))
    w2 = _warp_square_field(profile, mode)
    fib = np.asarray(fiber, dtype=object)
    if fib.shape != (2, 2):
        raise ValueError(f"fiber must be 2x2, got {fib.shape}")
    comps = np.empty((DIM, DIM), dtype=object)
    for a in range(2):
        for b in range(2):
            comps[a, b] = as_scalar_field(fib[a, b], chart) * w2
    comps[0, 2] = comps[1, 2] = comps[2, 0] = comps[2, 1] = "0"
    comps[2, 2] = "1"
    return MetricField(chart, comps, label=f"warped[{mode}]")


HALF_PLANE_FIBER = (("1/y^2", "0"), ("0", "1/y^2"))


# ---------------------------------------------------------------------------
# builtin registry

_PHI_ROTATION = (("0", "-1", "0"), ("1", "0", "0"), ("0", "0", "0"))
_XI_T = ("0", "0", "1")
_ETA_T = ("0", "0", "1")

BUILTIN_NAMES = ("euclidean3", "paper_cosh_warp", "paper_kenmotsu_exp")


def _make_euclidean3():
    chart = Chart(box=((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)))
    g = MetricField.from_upper(chart, {(0, 0): "1", (1, 1): "1", (2, 2): "1"},
                               label="euclidean3")
    return AlmostContactStructure(g, _PHI_ROTATION, _XI_T, _ETA_T,
                                  label="euclidean3")


def _make_cosh_warp():
    chart = Chart(box=((-1.0, 1.0), (0.5, 3.0), (-1.0, 1.0)))
    g = MetricField.from_upper(chart, {(0, 0): "cosh(t)^2/y^2",
                                       (1, 1): "cosh(t)^2/y^2",
                                       (2, 2): "1"},
                               label="paper_cosh_warp")
    return AlmostContactStructure(g, _PHI_ROTATION, _XI_T, _ETA_T,
                                  label="paper_cosh_warp")


def _make_kenmotsu_exp():
    chart = Chart(box=((-1.0, 1.0), (0.5, 3.0), (-1.0, 1.0)))
    g = MetricField.from_upper(chart, {(0, 0): "exp(2*t)/y^2",
                                       (1, 1): "exp(2*t)/y^2",
                                       (2, 2): "1"},
                               label="paper_kenmotsu_exp")
    return AlmostContactStructure(g, _PHI_ROTATION, _XI_T, _ETA_T,
                                  label="paper_kenmotsu_exp")


_FACTORIES = {
    "euclidean3": _make_euclidean3,
    "paper_cosh_warp": _make_cosh_warp,
    "paper_kenmotsu_exp": _make_kenmotsu_exp,
}

_CACHE = {}


def builtin(name):
    'Fetch a registry structure; instances are shared and immutable.'
    if name not in _FACTORIES:
        known = ", ".join(BUILTIN_NAMES)
        raise KeyError(f"unknown builtin {name!r}; known: {known}")
    if name not in _CACHE:
        _CACHE[name] = _FACTORIES[name]()
    return _CACHE[name]
