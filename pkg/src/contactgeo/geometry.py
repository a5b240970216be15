"""Curvature and derivative operators for a metric on a chart.

A ``Geometry`` owns one metric and caches, per probe point, the whole
tower built from its jets: inverse metric, connection coefficients,
curvature tensors, and their traces.  Orders step down through the
tower (metric jets carry order 3, the connection order 2, curvature
order 1), which is exactly enough for every derivative any identity in
this package takes of them.

Index conventions used throughout, with latin indices over the chart:

* connection:  Gamma[k, i, j] with the upper index first, symmetric in
  (i, j);
* curvature:   Riem[l, i, j, k] is the l-component of R(e_i, e_j)e_k,
  antisymmetric in (i, j);
* every covariant differentiation appends its new index as the FIRST
  slot of the covariant block.
"""

import numpy as np

from .fields import ScalarField, TensorField
from .jets import DIM, Jet3, JetError


class DegenerateMetricError(ArithmeticError):
    """Metric matrix not invertible at a probe point."""


class UnsupportedValenceError(ValueError):
    """Tensor valence outside the (r <= 1, s <= 3) envelope."""


def _const_like(shape, order, p):
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(shape):
        out[idx] = Jet3.constant(0.0, order, point=p)
    return out


def _truncate_all(arr, order):
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = arr[idx].truncate(order)
    return out


def values_of(arr):
    'Collapse an object array of jets to its float values.'
    out = np.empty(arr.shape)
    for idx in np.ndindex(arr.shape):
        out[idx] = arr[idx].value
    return out


def _det3(m):
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def _inv3(m, det):
    inv = np.empty((DIM, DIM), dtype=object)
    for i in range(DIM):
        for j in range(DIM):
            r = [k for k in range(DIM) if k != j]
            c = [k for k in range(DIM) if k != i]
            minor = m[r[0], c[0]] * m[r[1], c[1]] - m[r[0], c[1]] * m[r[1], c[0]]
            sign = 1.0 if (i + j) % 2 == 0 else -1.0
            inv[i, j] = (sign * minor) / det
    return inv


class Geometry:
    """Derived geometric data for one metric, cached per point."""

    GINV_FLOOR = 1e-12

    def __init__(self, metric):
        self.metric = metric
        self.chart = metric.chart
        self._state = {}

    # cached tower ------------------------------------------------------

    def _st(self, p):
        p = tuple(p)
        st = self._state.get(p)
        if st is None:
            st = {"g": self.metric.jets(p, 3)}
            self._state[p] = st
        return st

    def metric_jets(self, p, order=3):
        return _truncate_all(self._st(p)["g"], order)

    def inverse_metric_jets(self, p, order=3):
        st = self._st(p)
        if "ginv" not in st:
            det = _det3(st["g"])
            if abs(det.value) < self.GINV_FLOOR:
                raise DegenerateMetricError(
                    f"metric degenerate at {tuple(p)}: det = {det.value:.6e}")
            st["det"] = det
            st["ginv"] = _inv3(st["g"], det)
        return _truncate_all(st["ginv"], order)

    def metric_det(self, p):
        self.inverse_metric_jets(p, 0)
        return self._st(p)["det"]

    def christoffels(self, p, order=2):
        st = self._st(p)
        if "gamma" not in st:
            g = st["g"]
            ginv = _truncate_all(self.inverse_metric_jets(p, 3), 2)
            dg = np.empty((DIM, DIM, DIM), dtype=object)
            for i in range(DIM):
                for a in range(DIM):
                    for b in range(DIM):
                        dg[i, a, b] = g[a, b].partial(i)
            gamma = np.empty((DIM, DIM, DIM), dtype=object)
            for k in range(DIM):
                for i in range(DIM):
                    for j in range(i, DIM):
                        acc = Jet3.constant(0.0, 2, point=p)
                        for l in range(DIM):
                            acc = acc + ginv[k, l] * (dg[i, j, l] + dg[j, i, l]
                                                      - dg[l, i, j])
                        gamma[k, i, j] = gamma[k, j, i] = 0.5 * acc
            st["gamma"] = gamma
        return _truncate_all(st["gamma"], order)

    def riemann(self, p, order=1):
        st = self._st(p)
        if "riem" not in st:
            gamma = st.get("gamma")
            if gamma is None:
                self.christoffels(p)
                gamma = st["gamma"]
            dG = np.empty((DIM, DIM, DIM, DIM), dtype=object)
            for i in range(DIM):
                for l in range(DIM):
                    for j in range(DIM):
                        for k in range(DIM):
                            dG[i, l, j, k] = gamma[l, j, k].partial(i)
            G1 = _truncate_all(gamma, 1)
            riem = np.empty((DIM, DIM, DIM, DIM), dtype=object)
            for l in range(DIM):
                for i in range(DIM):
                    for j in range(DIM):
                        if j < i:
                            for k in range(DIM):
                                riem[l, i, j, k] = -riem[l, j, i, k]
                            continue
                        for k in range(DIM):
                            if i == j:
                                riem[l, i, j, k] = Jet3.constant(0.0, 1, point=p)
                                continue
                            acc = dG[i, l, j, k] - dG[j, l, i, k]
                            for m in range(DIM):
                                acc = acc + G1[l, i, m] * G1[m, j, k] \
                                          - G1[l, j, m] * G1[m, i, k]
                            riem[l, i, j, k] = acc
            st["riem"] = riem
        return _truncate_all(st["riem"], order)

    def riemann_lowered(self, p, order=1):
        st = self._st(p)
        if "rlow" not in st:
            riem = self.riemann(p)
            g = _truncate_all(st["g"], 1)
            rlow = np.empty((DIM, DIM, DIM, DIM), dtype=object)
            for l in range(DIM):
                for i in range(DIM):
                    for j in range(DIM):
                        for k in range(DIM):
                            acc = Jet3.constant(0.0, 1, point=p)
                            for m in range(DIM):
                                acc = acc + g[l, m] * riem[m, i, j, k]
                            rlow[l, i, j, k] = acc
            st["rlow"] = rlow
        return _truncate_all(st["rlow"], order)

    def ricci(self, p, order=1):
        st = self._st(p)
        if "ric" not in st:
            riem = self.riemann(p)
            ric = np.empty((DIM, DIM), dtype=object)
            for j in range(DIM):
                for k in range(DIM):
                    acc = Jet3.constant(0.0, 1, point=p)
                    for i in range(DIM):
                        acc = acc + riem[i, i, j, k]
                    ric[j, k] = acc
            st["ric"] = ric
        return _truncate_all(st["ric"], order)

    def scalar_curvature(self, p, order=1):
        st = self._st(p)
        if "scal" not in st:
            ric = self.ricci(p)
            ginv = _truncate_all(self.inverse_metric_jets(p, 3), 1)
            acc = Jet3.constant(0.0, 1, point=p)
            for i in range(DIM):
                for j in range(DIM):
                    acc = acc + ginv[i, j] * ric[i, j]
            st["scal"] = acc
        return st["scal"].truncate(order)

    def sectional(self, p, u, v):
        """Sectional curvature of the plane spanned by vectors u, v."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        g = self.metric.values(p)
        rl = values_of(self.riemann_lowered(p, 0))
        num = np.einsum("lijk,l,i,j,k->", rl, u, u, v, v)
        denom = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
        if abs(denom) < 1e-14:
            raise DegenerateMetricError(
                f"vectors do not span a plane at {tuple(p)}")
        return num / denom

    # field views over the cached tower ---------------------------------

    def metric_tensor(self):
        return self.metric.as_tensor_field()

    def ricci_field(self):
        return TensorField((0, 2), lambda p, order: self.ricci(p, order),
                           label="Ric")

    def riemann_field(self):
        return TensorField((1, 3), lambda p, order: self.riemann(p, order),
                           label="Riem")

    def scalar_curvature_field(self):
        return ScalarField(lambda p, order: self.scalar_curvature(p, order),
                           label="scal")

    # first-order operators on scalars ----------------------------------

    def gradient(self, f, p, order=0):
        ginv = self.inverse_metric_jets(p, order)
        fj = f.jets(p, order + 1)
        out = np.empty(DIM, dtype=object)
        for i in range(DIM):
            acc = Jet3.constant(0.0, order, point=p)
            for j in range(DIM):
                acc = acc + ginv[i, j] * fj.partial(j)
            out[i] = acc
        return out

    def hessian(self, f, p, order=0):
        fj = f.jets(p, order + 2)
        gamma = self.christoffels(p, min(order, 2))
        out = np.empty((DIM, DIM), dtype=object)
        for i in range(DIM):
            for j in range(i, DIM):
                acc = fj.partial(i).partial(j)
                for k in range(DIM):
                    acc = acc - gamma[k, i, j] * fj.partial(k).truncate(order)
                out[i, j] = out[j, i] = acc
        return out

    def laplacian(self, f, p, order=0, analyst=False):
        """Trace of the second covariant derivative, negated by default.

        The default sign makes the operator positive on the model's
        convention; pass ``analyst=True`` for the plain metric trace.
        """
        h = self.hessian(f, p, order)
        ginv = self.inverse_metric_jets(p, order)
        acc = Jet3.constant(0.0, order, point=p)
        for i in range(DIM):
            for j in range(DIM):
                acc = acc + ginv[i, j] * h[i, j]
        return acc if analyst else -acc

    # covariant and Lie differentiation ---------------------------------

    def covariant_derivative(self, T):
        """One covariant derivative of a tensor field.

        The result has valence (r, s+1); the differentiation index is
        the first covariant slot of the output.
        """
        r, s = T.valence
        if r > 1 or s + 1 > 3:
            raise UnsupportedValenceError(
                f"covariant derivative of valence {T.valence} not supported")

        def fn(p, order):
            Tj = T.jets(p, order + 1)
            gamma = self.christoffels(p, min(order, 2))
            shape = (DIM,) * r + (DIM,) + (DIM,) * s
            out = np.empty(shape, dtype=object)
            for idx in np.ndindex(shape):
                up, c, low = idx[:r], idx[r], idx[r + 1:]
                acc = Tj[up + low].partial(c)
                for m in range(r):
                    for d in range(DIM):
                        rep = up[:m] + (d,) + up[m + 1:]
                        acc = acc + gamma[up[m], c, d].truncate(order) \
                            * Tj[rep + low].truncate(order)
                for n in range(s):
                    for d in range(DIM):
                        rep = low[:n] + (d,) + low[n + 1:]
                        acc = acc - gamma[d, c, low[n]].truncate(order) \
                            * Tj[up + rep].truncate(order)
                out[idx] = acc
            return out

        return TensorField((r, s + 1), fn, label=f"cov({T.label})")

    def lie_derivative(self, V, T):
        """Lie derivative of a tensor field along a vector field."""
        r, s = T.valence

        def fn(p, order):
            Vj = V.jets(p, order + 1)
            Tj = T.jets(p, order + 1)
            shape = (DIM,) * (r + s)
            out = np.empty(shape, dtype=object)
            for idx in np.ndindex(shape):
                up, low = idx[:r], idx[r:]
                acc = Jet3.constant(0.0, order, point=tuple(p))
                for c in range(DIM):
                    acc = acc + Vj[c].truncate(order) * Tj[idx].partial(c)
                for m in range(r):
                    for c in range(DIM):
                        rep = up[:m] + (c,) + up[m + 1:]
                        acc = acc - Vj[up[m]].partial(c) \
                            * Tj[rep + low].truncate(order)
                for n in range(s):
                    for c in range(DIM):
                        rep = low[:n] + (c,) + low[n + 1:]
                        acc = acc + Vj[c].partial(low[n]) \
                            * Tj[up + rep].truncate(order)
                out[idx] = acc
            return out

        return TensorField((r, s), fn, label=f"lie({V.label};{T.label})")

    def lie_scalar(self, V, f, p, order=0):
        Vj = V.jets(p, order)
        fj = f.jets(p, order + 1)
        acc = Jet3.constant(0.0, order, point=tuple(p))
        for c in range(DIM):
            acc = acc + Vj[c] * fj.partial(c)
        return acc

    def lie_connection(self, V, p, order=1):
        """Variation of the connection along V, assembled covariantly.

        Returns the (1,2) jet array L[k, i, j]: half the inverse metric
        trace of the three covariant derivatives of the metric's Lie
        derivative, the same symmetrization that builds the connection
        from the metric.
        """
        LVg = self.lie_derivative(V, self.metric_tensor())
        C = self.covariant_derivative(LVg).jets(p, order)
        ginv = self.inverse_metric_jets(p, order)
        out = np.empty((DIM, DIM, DIM), dtype=object)
        for k in range(DIM):
            for i in range(DIM):
                for j in range(i, DIM):
                    acc = Jet3.constant(0.0, order, point=tuple(p))
                    for l in range(DIM):
                        acc = acc + ginv[k, l] * (C[i, j, l] + C[j, i, l]
                                                  - C[l, i, j])
                    out[k, i, j] = out[k, j, i] = 0.5 * acc
        return out

    def lie_connection_bracket(self, V, p, order=1):
        """Same variation from the coordinate transport formula.

        Independent of :meth:`lie_connection`: no covariant derivative
        and no inverse metric enter, only raw partials of V and of the
        connection coefficients.
        """
        gamma = self.christoffels(p, min(order + 1, 2))
        Vj = V.jets(p, order + 2)
        out = np.empty((DIM, DIM, DIM), dtype=object)
        for k in range(DIM):
            for i in range(DIM):
                for j in range(DIM):
                    acc = Vj[k].partial(i).partial(j)
                    for m in range(DIM):
                        acc = (acc
                               + Vj[m].truncate(order) * gamma[k, i, j].partial(m)
                               - Vj[k].partial(m).truncate(order)
                               * gamma[m, i, j].truncate(order)
                               + Vj[m].partial(i).truncate(order)
                               * gamma[k, m, j].truncate(order)
                               + Vj[m].partial(j).truncate(order)
                               * gamma[k, i, m].truncate(order))
                    out[k, i, j] = acc
        return out

    def lie_curvature(self, V, p):
        """Variation of the curvature along V via the connection variation.

        L[l, i, j, k] = (the i covariant derivative of the connection
        variation, antisymmetrized in i, j).  Order 0 only: the chain of
        derivatives beneath it exhausts the metric jets.
        """
        LG = TensorField((1, 2), lambda q, n: self.lie_connection(V, q, n),
                         label="lieGamma")
        D = self.covariant_derivative(LG).jets(p, 0)
        out = np.empty((DIM, DIM, DIM, DIM), dtype=object)
        for l in range(DIM):
            for i in range(DIM):
                for j in range(DIM):
                    for k in range(DIM):
                        out[l, i, j, k] = D[l, i, j, k] - D[l, j, i, k]
        return out

    def lie_ricci(self, V, p):
        'Trace of :meth:`lie_curvature` on its first two slots.'
        L = self.lie_curvature(V, p)
        out = np.empty((DIM, DIM), dtype=object)
        for j in range(DIM):
            for k in range(DIM):
                acc = Jet3.constant(0.0, 0, point=tuple(p))
                for i in range(DIM):
                    acc = acc + L[i, i, j, k]
                out[j, k] = acc
        return out

    # exterior calculus -------------------------------------------------

    def exterior_derivative(self, w):
        """d of a 1-form or 2-form (components assumed antisymmetric)."""
        r, s = w.valence
        if r != 0 or s not in (1, 2):
            raise UnsupportedValenceError(
                f"exterior derivative needs a 1- or 2-form, got valence {w.valence}")

        def fn1(p, order):
            wj = w.jets(p, order + 1)
            out = np.empty((DIM, DIM), dtype=object)
            for i in range(DIM):
                for j in range(DIM):
                    out[i, j] = wj[j].partial(i) - wj[i].partial(j)
            return out

        def fn2(p, order):
            wj = w.jets(p, order + 1)
            out = np.empty((DIM, DIM, DIM), dtype=object)
            for i in range(DIM):
                for j in range(DIM):
                    for k in range(DIM):
                        out[i, j, k] = (wj[j, k].partial(i)
                                        + wj[k, i].partial(j)
                                        + wj[i, j].partial(k))
            return out

        return TensorField((0, s + 1), fn1 if s == 1 else fn2,
                           label=f"d({w.label})")

    # frames ------------------------------------------------------------

    def orthonormal_frame(self, p, prefer=None):
        """Metric-orthonormal frame at p by Gram-Schmidt.

        ``prefer`` vectors are normalized first, in order; coordinate
        basis vectors fill the remaining slots.  Near-dependent
        candidates are dropped rather than blown up.
        """
        g = self.metric.values(p)
        cands = []
        if prefer is not None:
            pref = np.asarray(prefer, dtype=float)
            if pref.ndim == 1:
                pref = pref[None, :]
            cands.extend(pref)
        cands.extend(np.eye(DIM))
        frame = []
        for v in cands:
            w = v.copy()
            for u in frame:
                w = w - (u @ g @ v) * u
            n2 = w @ g @ w
            if n2 <= 1e-12 * max(1.0, v @ g @ v):
                continue
            frame.append(w / np.sqrt(n2))
            if len(frame) == DIM:
                break
        if len(frame) < DIM:
            raise DegenerateMetricError(
                f"could not complete an orthonormal frame at {tuple(p)}")
        return np.array(frame)


def wedge(a, b):
    """Wedge product of forms (1&1 or 1&2), no factorial normalization.

    With this convention (eta ^ Phi)(X,Y,Z) sums the three cyclic
    eta(X)Phi(Y,Z) terms; tests that compare against a doubled form rely
    on it, so it is part of the package contract.
    """
    (ra, sa), (rb, sb) = a.valence, b.valence
    if ra or rb:
        raise UnsupportedValenceError("wedge takes covariant forms")

    if sa == sb == 1:
        def fn(p, order):
            aj, bj = a.jets(p, order), b.jets(p, order)
            out = np.empty((DIM, DIM), dtype=object)
            for i in range(DIM):
                for j in range(DIM):
                    out[i, j] = aj[i] * bj[j] - aj[j] * bj[i]
            return out
        return TensorField((0, 2), fn, label=f"{a.label}^{b.label}")

    if {sa, sb} == {1, 2}:
        one, two = (a, b) if sa == 1 else (b, a)

        def fn(p, order):
            oj, tj = one.jets(p, order), two.jets(p, order)
            out = np.empty((DIM, DIM, DIM), dtype=object)
            for i in range(DIM):
                for j in range(DIM):
                    for k in range(DIM):
                        out[i, j, k] = (oj[i] * tj[j, k] + oj[j] * tj[k, i]
                                        + oj[k] * tj[i, j])
            return out
        return TensorField((0, 3), fn, label=f"{a.label}^{b.label}")

    raise UnsupportedValenceError(
        f"wedge of degrees ({sa}, {sb}) not supported")
