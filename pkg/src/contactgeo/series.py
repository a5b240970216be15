"""Univariate truncated Taylor series.

Warp and gauge profiles are functions of the single coordinate t, and a
few places (ODE-backed profiles, the removable-singularity mode of the
soliton profile) need more t-derivatives than the trivariate jet's cap
of three.  ``Series1`` stores Taylor coefficients c_k = f^(k)(t0)/k! to
an arbitrary truncation order and propagates them through arithmetic and
the same primitive function set via the classical coefficient
recurrences.
"""

import math

import numpy as np

from .jets import JetDomainError, JetError


class Series1:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)
        if self.c.ndim != 1 or self.c.size == 0:
            raise JetError("series needs a 1-d, non-empty coefficient array")

    @classmethod
    def variable(cls, t0, order):
        c = np.zeros(order + 1)
        c[0] = t0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @property
    def order(self):
        return self.c.size - 1

    @property
    def value(self):
        return float(self.c[0])

    def deriv(self, m):
        'm-th derivative at the expansion point.'
        if m > self.order:
            raise JetError(f"series of order {self.order} has no tier {m}")
        return float(self.c[m]) * math.factorial(m)

    def derivatives(self, upto):
        return tuple(self.deriv(m) for m in range(upto + 1))

    # ---- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = _pair(self, other)
        return Series1(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = _pair(self, other)
        return Series1(a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Series1(-self.c)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return Series1(self.c * float(other))
        a, b = _pair(self, other)
        n = a.size
        out = np.zeros(n)
        for k in range(n):
            out[k] = a[: k + 1] @ b[k::-1]
        return Series1(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self * (1.0 / float(other))
        a, b = _pair(self, other)
        if b[0] == 0.0:
            raise JetDomainError("div", 0.0)
        n = a.size
        out = np.zeros(n)
        for k in range(n):
            out[k] = (a[k] - out[:k] @ b[k:0:-1]) / b[0]
        return Series1(out)

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            return Series1.constant(float(other), self.order) / self
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise JetError(f"series exponents must be integers, got {n!r}")
        n = int(n)
        if n < 0:
            return 1.0 / self.__pow__(-n)
        out = Series1.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __repr__(self):
        return f"Series1({self.c.tolist()})"


_SCALARS = (int, float, np.integer, np.floating)


def _pair(a, other):
    if isinstance(other, _SCALARS):
        b = np.zeros_like(a.c)
        b[0] = float(other)
        return a.c, b
    if not isinstance(other, Series1):
        raise JetError(f"cannot combine series with {type(other).__name__}")
    if other.c.size != a.c.size:
        n = min(a.c.size, other.c.size)
        return a.c[:n], other.c[:n]
    return a.c, other.c


# ---- function library -------------------------------------------------
# Coefficient recurrences from the defining ODE of each primitive.

def exp(u):
    n = u.order
    e = np.zeros(n + 1)
    e[0] = np.exp(u.c[0])
    for k in range(1, n + 1):
        e[k] = sum(j * u.c[j] * e[k - j] for j in range(1, k + 1)) / k
    return Series1(e)


def log(u):
    if u.c[0] <= 0.0:
        raise JetDomainError("log", u.c[0])
    q = _dseries(u) / u
    out = np.zeros(u.order + 1)
    out[0] = np.log(u.c[0])
    for k in range(1, u.order + 1):
        out[k] = q.c[k - 1] / k
    return Series1(out)


def sqrt(u):
    if u.c[0] < 0.0 or (u.c[0] == 0.0 and u.order >= 1):
        raise JetDomainError("sqrt", u.c[0])
    n = u.order
    s = np.zeros(n + 1)
    s[0] = np.sqrt(u.c[0])
    for k in range(1, n + 1):
        s[k] = (u.c[k] - s[1:k] @ s[k - 1:0:-1]) / (2.0 * s[0])
    return Series1(s)


def _sin_cos(u, hyperbolic):
    n = u.order
    s = np.zeros(n + 1)
    c = np.zeros(n + 1)
    if hyperbolic:
        s[0], c[0] = np.sinh(u.c[0]), np.cosh(u.c[0])
        sign = 1.0
    else:
        s[0], c[0] = np.sin(u.c[0]), np.cos(u.c[0])
        sign = -1.0
    for k in range(1, n + 1):
        s[k] = sum(j * u.c[j] * c[k - j] for j in range(1, k + 1)) / k
        c[k] = sign * sum(j * u.c[j] * s[k - j] for j in range(1, k + 1)) / k
    return Series1(s), Series1(c)


def sin(u):
    return _sin_cos(u, hyperbolic=False)[0]


def cos(u):
    return _sin_cos(u, hyperbolic=False)[1]


def sinh(u):
    return _sin_cos(u, hyperbolic=True)[0]


def cosh(u):
    return _sin_cos(u, hyperbolic=True)[1]


def tanh(u):
    # T' = (1 - T^2) u'; the deficit series W = 1 - T^2 is filled in step
    # with T itself, each W_k needing only T_0..T_k.
    n = u.order
    t = np.zeros(n + 1)
    w = np.zeros(n + 1)
    t[0] = np.tanh(u.c[0])
    w[0] = 1.0 - t[0] * t[0]
    for k in range(1, n + 1):
        t[k] = sum(j * u.c[j] * w[k - j] for j in range(1, k + 1)) / k
        w[k] = -(t[: k + 1] @ t[k::-1])
    return Series1(t)


def neg(u):
    return -u


def _dseries(u):
    'Series of the derivative, one order shorter.'
    n = u.order
    if n == 0:
        return Series1([0.0])
    return Series1(u.c[1:] * np.arange(1, n + 1))


FUNCTIONS = {
    "sin": sin, "cos": cos, "sinh": sinh, "cosh": cosh, "tanh": tanh,
    "exp": exp, "log": log, "sqrt": sqrt, "neg": neg,
}
