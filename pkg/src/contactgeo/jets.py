"""Truncated Taylor jets in three variables.

A jet holds the value of a scalar quantity at a chart point together with
its partial derivatives up to a chosen order (at most 3).  Arithmetic and
the standard function library propagate all retained tiers exactly, so a
jet of the metric evaluated at a probe point carries everything needed to
assemble Christoffel symbols, curvature, and one further derivative of
curvature without any numerical differencing.

Tier layout: ``d1[i]``, ``d2[i][j]``, ``d3[i][j][k]`` are dense numpy
arrays.  The symmetric tiers are kept bit-exactly symmetric: after any
operation whose formula is not symmetric by construction, every entry is
replaced by the representative computed at its sorted index.
"""

import numpy as np

DIM = 3

_I2 = np.sort(np.stack(np.indices((DIM, DIM))), axis=0)
_I3 = np.sort(np.stack(np.indices((DIM, DIM, DIM))), axis=0)


def _canon3(t):
    'Rebuild a rank-3 tier from its sorted-index representatives.'
    return t[_I3[0], _I3[1], _I3[2]]


def _canon2(m):
    return m[_I2[0], _I2[1]]


class JetError(ValueError):
    """Invalid jet construction or combination."""


class JetDomainError(ArithmeticError):
    """A primitive was evaluated outside its domain (or overflowed).

    Carries the offending function name, the argument value, and the
    expansion point when the jet knows it.
    """

    def __init__(self, fn, value, point=None):
        self.fn = fn
        self.value = value
        self.point = point
        at = "" if point is None else f" at point {tuple(point)}"
        super().__init__(f"{fn} undefined for value {value!r}{at}")


def _merge_points(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise JetError(f"jets expanded at different points: {a} vs {b}")


class Jet3:
    """Value plus partial-derivative tiers of a scalar at one chart point.

    ``order`` is the highest retained tier (0 to 3); tiers above it are
    ``None``.  ``point`` records the expansion point when known and is
    carried through arithmetic so domain errors can name the probe.
    """

    __slots__ = ("order", "value", "d1", "d2", "d3", "point")

    def __init__(self, value, d1=None, d2=None, d3=None, order=None, point=None):
        if order is None:
            order = 3 if d3 is not None else 2 if d2 is not None else 1 if d1 is not None else 0
        if not 0 <= order <= 3:
            raise JetError(f"jet order must be 0..3, got {order}")
        self.order = order
        self.value = float(value)
        self.d1 = None if order < 1 else _as_tier(d1, (DIM,))
        self.d2 = None if order < 2 else _canon2(_as_tier(d2, (DIM, DIM)))
        self.d3 = None if order < 3 else _canon3(_as_tier(d3, (DIM, DIM, DIM)))
        self.point = None if point is None else tuple(float(c) for c in point)

    @classmethod
    def constant(cls, value, order, point=None):
        if not 0 <= order <= 3:
            raise JetError(f"jet order must be 0..3, got {order}")
        j = object.__new__(cls)
        j.order = order
        j.value = float(value)
        j.d1 = _Z1.copy() if order >= 1 else None
        j.d2 = _Z2.copy() if order >= 2 else None
        j.d3 = _Z3.copy() if order >= 3 else None
        j.point = None if point is None else tuple(float(c) for c in point)
        return j

    @classmethod
    def coordinate(cls, index, at, order):
        'Seed for the coordinate function x_index expanded at the point ``at``.'
        if not 0 <= index < DIM:
            raise JetError(f"coordinate index must be 0..2, got {index}")
        if len(at) != DIM:
            raise JetError(f"expansion point must have {DIM} components")
        j = cls.constant(at[index], order, point=at)
        if order >= 1:
            j.d1[index] = 1.0
        return j

    # ---- structure ----------------------------------------------------

    def truncate(self, order):
        'Copy of this jet with tiers above ``order`` dropped.'
        if order > self.order:
            raise JetError(f"cannot raise order {self.order} to {order}")
        if order == self.order:
            return self
        return _mk(order, self.value,
                   self.d1 if order >= 1 else None,
                   self.d2 if order >= 2 else None,
                   None, self.point)

    def partial(self, i):
        """Derivative with respect to coordinate ``i`` as a jet of order - 1.

        The returned jet's tiers are slices of this jet's higher tiers, so
        differentiating consumes one retained order.
        """
        if self.order < 1:
            raise JetError("order-0 jet has no retained derivatives")
        if not 0 <= i < DIM:
            raise JetError(f"coordinate index must be 0..2, got {i}")
        return _mk(self.order - 1, self.d1[i],
                   None if self.order < 2 else self.d2[i],
                   None if self.order < 3 else self.d3[i],
                   None, self.point)

    # ---- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = _coerce(self, other)
        if a is None:
            return NotImplemented
        return _mk(a.order, a.value + b.value,
                   None if a.order < 1 else a.d1 + b.d1,
                   None if a.order < 2 else a.d2 + b.d2,
                   None if a.order < 3 else a.d3 + b.d3,
                   _merge_points(a.point, b.point))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = _coerce(self, other)
        if a is None:
            return NotImplemented
        return _mk(a.order, a.value - b.value,
                   None if a.order < 1 else a.d1 - b.d1,
                   None if a.order < 2 else a.d2 - b.d2,
                   None if a.order < 3 else a.d3 - b.d3,
                   _merge_points(a.point, b.point))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return _mk(self.order, -self.value,
                   None if self.order < 1 else -self.d1,
                   None if self.order < 2 else -self.d2,
                   None if self.order < 3 else -self.d3,
                   self.point)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            c = float(other)
            return _mk(self.order, c * self.value,
                       None if self.order < 1 else c * self.d1,
                       None if self.order < 2 else c * self.d2,
                       None if self.order < 3 else c * self.d3,
                       self.point)
        if not isinstance(other, Jet3):
            return NotImplemented
        a, b = _align(self, other)
        n = a.order
        value = a.value * b.value
        d1 = d2 = d3 = None
        if n >= 1:
            d1 = a.value * b.d1 + b.value * a.d1
        if n >= 2:
            d2 = _canon2(a.value * b.d2 + b.value * a.d2
                         + a.d1[:, None] * b.d1[None, :] + b.d1[:, None] * a.d1[None, :])
        if n >= 3:
            d3 = _canon3(a.value * b.d3 + b.value * a.d3
                         + _vec_mat(a.d1, b.d2) + _vec_mat(b.d1, a.d2))
        return _mk(n, value, d1, d2, d3, _merge_points(a.point, b.point))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self * (1.0 / float(other))
        if not isinstance(other, Jet3):
            return NotImplemented
        return self * _recip(other)

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            return _recip(self) * float(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise JetError(f"jet exponents must be integers, got {n!r}")
        n = int(n)
        if n < 0:
            return _recip(self._ipow(-n)) if n != -1 else _recip(self)
        if n == 0:
            return Jet3.constant(1.0, self.order, self.point)
        return self._ipow(n)

    def _ipow(self, n):
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __repr__(self):
        return f"Jet3(order={self.order}, value={self.value!r}, point={self.point})"


_SCALARS = (int, float, np.integer, np.floating)
_Z1 = np.zeros(DIM)
_Z2 = np.zeros((DIM, DIM))
_Z3 = np.zeros((DIM, DIM, DIM))


def _as_tier(arr, shape):
    if arr is None:
        return np.zeros(shape)
    out = np.asarray(arr, dtype=float)
    if out.shape != shape:
        raise JetError(f"tier shape {out.shape} != {shape}")
    return out.copy()


def _mk(order, value, d1, d2, d3, point):
    'Fast constructor: tiers are trusted to be canonical already.'
    j = object.__new__(Jet3)
    j.order = order
    j.value = float(value)
    j.d1 = d1
    j.d2 = d2
    j.d3 = d3
    j.point = point
    return j


def _coerce(a, b):
    if isinstance(b, _SCALARS):
        return _align(a, Jet3.constant(float(b), a.order, a.point))
    if isinstance(b, Jet3):
        return _align(a, b)
    return None, None


def _align(a, b):
    'Truncate the higher-order operand; mixed orders keep the trustworthy part.'
    if a.order == b.order:
        return a, b
    if a.order > b.order:
        return a.truncate(b.order), b
    return a, b.truncate(a.order)


def _vec_mat(u, m):
    'Symmetrized u_i m_jk over the three slot placements.'
    return (u[:, None, None] * m[None, :, :]
            + u[None, :, None] * m[:, None, :]
            + u[None, None, :] * m[:, :, None])


def _compose(a, f, name):
    """Univariate chain rule: jets of F(u) from derivatives f[k] of F at u.value."""
    n = a.order
    value = f[0]
    d1 = d2 = d3 = None
    if n >= 1:
        d1 = f[1] * a.d1
    if n >= 2:
        d2 = f[1] * a.d2 + f[2] * (a.d1[:, None] * a.d1[None, :])
    if n >= 3:
        u = a.d1
        d3 = _canon3(f[1] * a.d3 + f[2] * _vec_mat(u, a.d2)
                     + f[3] * ((u[:, None] * u[None, :])[:, :, None] * u[None, None, :]))
    out = _mk(n, value, d1, d2, d3, a.point)
    if not np.isfinite(value) or (n >= 1 and not np.isfinite(d1).all()) \
            or (n >= 2 and not np.isfinite(d2).all()) \
            or (n >= 3 and not np.isfinite(d3).all()):
        raise JetDomainError(name, a.value, a.point)
    return out


def _recip(b):
    if b.value == 0.0:
        raise JetDomainError("div", 0.0, b.point)
    u = b.value
    r = 1.0 / u
    return _compose(b, (r, -r * r, 2.0 * r ** 3, -6.0 * r ** 4), "div")


# ---- function library -------------------------------------------------

def exp(a):
    e = np.exp(a.value)
    return _compose(a, (e, e, e, e), "exp")


def log(a):
    if a.value <= 0.0:
        raise JetDomainError("log", a.value, a.point)
    u = a.value
    return _compose(a, (np.log(u), 1.0 / u, -1.0 / u ** 2, 2.0 / u ** 3), "log")


def sqrt(a):
    # sqrt(0) is fine as a bare value but every derivative tier blows up,
    # so positivity is required as soon as order >= 1.
    if a.value < 0.0 or (a.value == 0.0 and a.order >= 1):
        raise JetDomainError("sqrt", a.value, a.point)
    s = np.sqrt(a.value)
    if a.order == 0:
        return Jet3.constant(s, 0, a.point)
    return _compose(a, (s, 0.5 / s, -0.25 / s ** 3, 0.375 / s ** 5), "sqrt")


def sin(a):
    s, c = np.sin(a.value), np.cos(a.value)
    return _compose(a, (s, c, -s, -c), "sin")


def cos(a):
    s, c = np.sin(a.value), np.cos(a.value)
    return _compose(a, (c, -s, -c, s), "cos")


def sinh(a):
    s, c = np.sinh(a.value), np.cosh(a.value)
    return _compose(a, (s, c, s, c), "sinh")


def cosh(a):
    s, c = np.sinh(a.value), np.cosh(a.value)
    return _compose(a, (c, s, c, s), "cosh")


def tanh(a):
    t = np.tanh(a.value)
    w = 1.0 - t * t
    return _compose(a, (t, w, -2.0 * t * w, w * (6.0 * t * t - 2.0)), "tanh")


def neg(a):
    return -a


FUNCTIONS = {
    "sin": sin, "cos": cos, "sinh": sinh, "cosh": cosh, "tanh": tanh,
    "exp": exp, "log": log, "sqrt": sqrt, "neg": neg,
}


def apply(fn, a):
    'Apply a named primitive from the function library to a jet.'
    try:
        f = FUNCTIONS[fn]
    except KeyError:
        raise JetError(f"unknown function {fn!r}; have {sorted(FUNCTIONS)}") from None
    return f(a)


def seed_chart(at, order):
    'Coordinate seeds (one per chart coordinate) expanded at ``at``.'
    return tuple(Jet3.coordinate(i, at, order) for i in range(DIM))
