"""Probe point selection and randomized field generators.

Identity checks are pointwise, so coverage comes from where the points
sit.  A scrambled Halton set gives low-discrepancy coverage of the chart
box; the seed is recorded so every run is reproducible.  The random
field generators produce smooth closed-form metrics and vector fields
for oracle sweeps, diagonally dominant so positivity never depends on
luck.
"""

import numpy as np
from scipy.stats import qmc

from .fields import MetricField, vector_field
from .jets import DIM

DEFAULT_SEED = 20240901
DEFAULT_COUNT = 64
SHRINK = 0.05


class ProbeGrid:
    """A fixed list of chart points with the seed that produced it."""

    def __init__(self, points, seed=None, tol=1e-8):
        self.points = tuple(tuple(float(c) for c in p) for p in points)
        self.seed = seed
        self.tol = float(tol)

    @classmethod
    def halton(cls, chart, n=DEFAULT_COUNT, seed=DEFAULT_SEED, tol=1e-8):
        """Scrambled Halton points in the chart box, shrunk 5% per side.

        The shrink keeps finite-difference cross-checks (which step off
        the probe point) inside the domain of the metric components.
        """
        sampler = qmc.Halton(d=DIM, scramble=True, seed=seed)
        unit = sampler.random(n)
        los = np.array([lo for lo, hi in chart.box])
        his = np.array([hi for lo, hi in chart.box])
        margin = SHRINK * (his - los)
        pts = qmc.scale(unit, los + margin, his - margin)
        return cls(pts, seed=seed, tol=tol)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"ProbeGrid({len(self.points)} points, seed={self.seed})"


def _fmt(x):
    return repr(round(float(x), 6))


def _wave(rng, names, amp):
    'A bounded smooth term: amp * trig/hyperbolic product in two coordinates.'
    f1, f2 = rng.choice(["sin", "cos"]), rng.choice(["sin", "cos", "tanh"])
    v1, v2 = rng.choice(len(names), size=2, replace=False)
    w1, w2 = rng.uniform(0.3, 0.9, size=2)
    ph = rng.uniform(0.0, 1.5)
    return (f"{_fmt(amp)}*{f1}({_fmt(w1)}*{names[v1]} + {_fmt(ph)})"
            f"*{f2}({_fmt(w2)}*{names[v2]})")


def random_metric(rng, chart, label="random metric"):
    """A smooth closed-form SPD metric on the chart.

    Diagonal entries sit in [1.6, 2.6] with oscillation amplitude at
    most 0.2; off-diagonal amplitude is at most 0.1, so every value of
    the matrix is strictly diagonally dominant, hence positive definite.
    """
    names = chart.names
    comps = np.empty((DIM, DIM), dtype=object)
    for i in range(DIM):
        base = rng.uniform(1.8, 2.4)
        comps[i, i] = f"{_fmt(base)} + {_wave(rng, names, rng.uniform(0.05, 0.2))}"
    for i in range(DIM):
        for j in range(i + 1, DIM):
            comps[i, j] = comps[j, i] = _wave(rng, names, rng.uniform(0.02, 0.1))
    return MetricField(chart, comps, label=label)


def random_vector(rng, chart, label="random vector"):
    'A smooth closed-form vector field with O(1) components.'
    names = chart.names
    comps = []
    for _ in range(DIM):
        a = rng.uniform(0.3, 1.0)
        comps.append(f"{_fmt(a)} + {_wave(rng, names, rng.uniform(0.2, 0.8))}")
    return vector_field(comps, chart, label=label)
