"""Charts and jet-valued component fields.

Everything downstream of the expression language works through these
wrappers: a field knows how to produce jets of its components at a chart
point, whatever their origin (closed-form expression, numeric profile,
or arithmetic over other fields).  That uniformity is what lets a gauge
deformation built from an ODE-integrated profile flow through the same
curvature machinery as a hand-written metric.
"""

import keyword

import numpy as np

from . import exprs, jets as jetlib
from .jets import DIM, Jet3


class ChartError(ValueError):
    """Bad chart declaration (names or domain box)."""


class Chart:
    """Coordinate names and the open domain box they range over."""

    def __init__(self, names=exprs.DEFAULT_COORDS, box=((-1.0, 1.0),) * DIM):
        names = tuple(names)
        if len(names) != DIM or len(set(names)) != DIM:
            raise ChartError(f"need {DIM} distinct coordinate names, got {names!r}")
        for n in names:
            if not n.isidentifier() or keyword.iskeyword(n):
                raise ChartError(f"coordinate name {n!r} is not an identifier")
            if n in jetlib.FUNCTIONS:
                raise ChartError(f"coordinate name {n!r} shadows a function")
        box = tuple((float(lo), float(hi)) for lo, hi in box)
        if len(box) != DIM or any(lo >= hi for lo, hi in box):
            raise ChartError(f"domain box needs {DIM} nonempty intervals, got {box!r}")
        self.names = names
        self.box = box

    def contains(self, p):
        return all(lo < c < hi for c, (lo, hi) in zip(p, self.box))

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise ChartError(
                f"no coordinate {name!r} on chart {self.names}") from None

    def __repr__(self):
        return f"Chart({self.names}, {self.box})"


class ScalarField:
    """A scalar quantity evaluable to jets at any chart point.

    Supports pointwise arithmetic with other fields and numbers, so
    composite quantities (a gauge times a metric component, a deformed
    1-form product) stay evaluable to any order their factors support.
    """

    def __init__(self, fn, source=None, label=""):
        self._fn = fn
        self.source = source
        self.label = label or (source if source else "")
        self._memo = {}

    @classmethod
    def from_expr(cls, text_or_expr, chart=None):
        coords = chart.names if chart is not None else exprs.DEFAULT_COORDS
        if isinstance(text_or_expr, str):
            tree = exprs.parse(text_or_expr, coords)
            source = text_or_expr
        else:
            tree = text_or_expr
            source = exprs.pretty(tree)
        return cls(lambda p, order: exprs.eval_jet(tree, p, order, coords, _source=source),
                   source=source)

    @classmethod
    def constant(cls, value):
        value = float(value)
        return cls(lambda p, order: Jet3.constant(value, order, point=p),
                   source=repr(value))

    def jets(self, p, order):
        key = (tuple(p), order)
        out = self._memo.get(key)
        if out is None:
            # a higher-order jet at the same point serves by truncation
            for higher in range(order + 1, 4):
                full = self._memo.get((key[0], higher))
                if full is not None:
                    out = full.truncate(order)
                    break
            else:
                out = self._fn(key[0], order)
            self._memo[key] = out
        return out

    def value(self, p):
        return self.jets(p, 0).value

    # pointwise algebra -------------------------------------------------

    def _lift(self, other):
        if isinstance(other, ScalarField):
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return ScalarField.constant(other)
        return None

    def _combine(self, other, op, sym):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ScalarField(lambda p, order: op(self.jets(p, order), other.jets(p, order)),
                           source=f"({self.label}) {sym} ({other.label})")

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b, "/")

    def __neg__(self):
        return ScalarField(lambda p, order: -self.jets(p, order),
                           source=f"-({self.label})")

    def __repr__(self):
        return f"ScalarField({self.label!r})"


def as_scalar_field(obj, chart=None):
    if isinstance(obj, ScalarField):
        return obj
    if isinstance(obj, str) or isinstance(obj, (exprs.Num, exprs.Var, exprs.Neg,
                                                exprs.Bin, exprs.Pow, exprs.Call)):
        return ScalarField.from_expr(obj, chart)
    if isinstance(obj, (int, float, np.integer, np.floating)):
        return ScalarField.constant(obj)
    raise TypeError(f"cannot interpret {obj!r} as a scalar field")


class TensorField:
    """Componentwise jet-valued tensor field.

    ``valence = (r, s)`` with the r contravariant slots first in the
    component index order; evaluation returns an object ndarray of jets
    with shape (3,) * (r + s).
    """

    def __init__(self, valence, fn, label=""):
        self.valence = (int(valence[0]), int(valence[1]))
        self._fn = fn
        self.label = label
        self._memo = {}

    @property
    def nslots(self):
        return self.valence[0] + self.valence[1]

    @classmethod
    def from_components(cls, comps, valence, chart=None, label=""):
        comps = np.asarray(comps, dtype=object)
        shape = (DIM,) * (valence[0] + valence[1])
        if comps.shape != shape:
            raise ValueError(f"component array shape {comps.shape} != {shape}")
        fields = np.empty(shape, dtype=object)
        for idx in np.ndindex(shape):
            fields[idx] = as_scalar_field(comps[idx], chart)

        def fn(p, order):
            out = np.empty(shape, dtype=object)
            for idx in np.ndindex(shape):
                out[idx] = fields[idx].jets(p, order)
            return out

        t = cls(valence, fn, label=label)
        t.fields = fields
        return t

    def jets(self, p, order):
        key = (tuple(p), order)
        out = self._memo.get(key)
        if out is None:
            for higher in range(order + 1, 4):
                full = self._memo.get((key[0], higher))
                if full is not None:
                    out = np.empty(full.shape, dtype=object)
                    for idx in np.ndindex(full.shape):
                        out[idx] = full[idx].truncate(order)
                    break
            else:
                out = self._fn(key[0], order)
            self._memo[key] = out
        return out

    def values(self, p):
        j = self.jets(p, 0)
        out = np.empty(j.shape)
        for idx in np.ndindex(j.shape):
            out[idx] = j[idx].value
        return out

    def __repr__(self):
        return f"TensorField(valence={self.valence}, label={self.label!r})"


def vector_field(comps, chart=None, label=""):
    'Contravariant components, one per chart coordinate.'
    return TensorField.from_components(np.asarray(comps, dtype=object),
                                       (1, 0), chart, label=label)


def one_form(comps, chart=None, label=""):
    return TensorField.from_components(np.asarray(comps, dtype=object),
                                       (0, 1), chart, label=label)


class MetricField:
    """Symmetric metric component field over a chart.

    Components are stored for the upper triangle and mirrored, so the
    symmetry invariant holds by construction whatever the source.
    """

    def __init__(self, chart, components, label=""):
        self.chart = chart
        self.label = label
        self._upper = {}
        comps = np.asarray(components, dtype=object)
        if comps.shape != (DIM, DIM):
            raise ValueError(f"metric component array must be 3x3, got {comps.shape}")
        for i in range(DIM):
            for j in range(i, DIM):
                self._upper[(i, j)] = as_scalar_field(comps[i, j], chart)
        self._memo = {}

    @classmethod
    def from_upper(cls, chart, upper, label=""):
        'upper: dict keyed by (i, j) with i <= j; missing entries are zero.'
        comps = np.full((DIM, DIM), "0", dtype=object)
        for (i, j), src in upper.items():
            comps[i, j] = src
            comps[j, i] = src
        return cls(chart, comps, label=label)

    def component(self, i, j):
        return self._upper[(min(i, j), max(i, j))]

    def jets(self, p, order):
        key = (tuple(p), order)
        out = self._memo.get(key)
        if out is None:
            out = np.empty((DIM, DIM), dtype=object)
            for (i, j), f in self._upper.items():
                out[i, j] = out[j, i] = f.jets(p, order)
            self._memo[key] = out
        return out

    def values(self, p):
        j = self.jets(p, 0)
        return np.array([[j[i, k].value for k in range(DIM)] for i in range(DIM)])

    def as_tensor_field(self):
        return TensorField((0, 2), self.jets, label=self.label or "g")

    def __repr__(self):
        return f"MetricField({self.label!r} on {self.chart.names})"
