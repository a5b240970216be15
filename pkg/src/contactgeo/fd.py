"""Finite-difference cross-check for jet-carried derivatives.

Deliberately independent of the jet code path: plain central-difference
stencils on scalar callables, Richardson-extrapolated once (each stencil
has an O(h^2) error term, so the 4 S(h/2) - S(h) combination is O(h^4)).
Steps are scaled by coordinate magnitude and widen with the tier, since
third-difference stencils divide by h^3 and would otherwise drown in
rounding noise.
"""

import itertools

import numpy as np

from .jets import DIM

BASE_STEPS = (1e-4, 1e-3, 2e-2)


def _shift(p, moves):
    q = np.array(p, dtype=float)
    for i, d in moves:
        q[i] += d
    return q


def _d1(f, p, i, h):
    return (f(_shift(p, [(i, h)])) - f(_shift(p, [(i, -h)]))) / (2 * h)


def _d2(f, p, i, j, hi, hj):
    if i == j:
        return (f(_shift(p, [(i, hi)])) - 2 * f(np.asarray(p, dtype=float))
                + f(_shift(p, [(i, -hi)]))) / hi ** 2
    acc = 0.0
    for si, sj in itertools.product((1, -1), repeat=2):
        acc += si * sj * f(_shift(p, [(i, si * hi), (j, sj * hj)]))
    return acc / (4 * hi * hj)


def _d3(f, p, idx, steps):
    counts = {i: idx.count(i) for i in set(idx)}
    if len(counts) == 1:
        (i, _), = counts.items()
        h = steps[i]
        return (f(_shift(p, [(i, 2 * h)])) - 2 * f(_shift(p, [(i, h)]))
                + 2 * f(_shift(p, [(i, -h)])) - f(_shift(p, [(i, -2 * h)]))) / (2 * h ** 3)
    if len(counts) == 2:
        i = next(k for k, c in counts.items() if c == 2)
        j = next(k for k, c in counts.items() if c == 1)
        hi, hj = steps[i], steps[j]
        acc = 0.0
        for sj in (1, -1):
            acc += sj * (f(_shift(p, [(i, hi), (j, sj * hj)]))
                         - 2 * f(_shift(p, [(j, sj * hj)]))
                         + f(_shift(p, [(i, -hi), (j, sj * hj)])))
        return acc / (2 * steps[i] ** 2 * hj)
    i, j, k = idx
    acc = 0.0
    for si, sj, sk in itertools.product((1, -1), repeat=3):
        acc += si * sj * sk * f(_shift(p, [(i, si * steps[i]),
                                           (j, sj * steps[j]),
                                           (k, sk * steps[k])]))
    return acc / (8 * steps[i] * steps[j] * steps[k])


def _richardson(stencil, steps):
    coarse = stencil(steps)
    fine = stencil(tuple(h / 2 for h in steps))
    return (4 * fine - coarse) / 3


def fd_partials(f, p, order, base_steps=BASE_STEPS):
    """All partial derivatives of ``f`` at ``p`` up to ``order`` (max 3).

    Returns ``(value, d1, d2, d3)`` with tiers above ``order`` set to
    ``None``; tier arrays follow the jet layout.
    """
    p = np.asarray(p, dtype=float)
    scale = np.maximum(1.0, np.abs(p))
    value = f(p)
    d1 = d2 = d3 = None
    if order >= 1:
        steps = tuple(base_steps[0] * s for s in scale)
        d1 = np.array([_richardson(lambda hs, i=i: _d1(f, p, i, hs[i]), steps)
                       for i in range(DIM)])
    if order >= 2:
        steps = tuple(base_steps[1] * s for s in scale)
        d2 = np.zeros((DIM, DIM))
        for i in range(DIM):
            for j in range(i, DIM):
                v = _richardson(lambda hs, i=i, j=j: _d2(f, p, i, j, hs[i], hs[j]), steps)
                d2[i, j] = d2[j, i] = v
    if order >= 3:
        steps = tuple(base_steps[2] * s for s in scale)
        d3 = np.zeros((DIM, DIM, DIM))
        for idx in itertools.combinations_with_replacement(range(DIM), 3):
            v = _richardson(lambda hs, idx=idx: _d3(f, p, idx, hs), steps)
            for perm in set(itertools.permutations(idx)):
                d3[perm] = v
    return value, d1, d2, d3
