"""Random corpora and queries shared by the CLI checks, benchmarks and scripts."""

from __future__ import annotations

import numpy as np

from .geometry import Curve, point_at


def random_curves(rng, n, m_max, dim=2, box=1.0, m_min=1):
    """``n`` curves with ``m_min..m_max`` vertices uniform in ``[0, box]^dim``."""
    out = []
    for i in range(n):
        m = int(rng.integers(m_min, m_max + 1))
        out.append(Curve(f"c{i}", rng.uniform(0.0, box, size=(m, dim))))
    return out


def resample(P, k, rng=None, start=None, end=None):
    """``k`` points along ``P`` between parameters ``start`` and ``end``
    (1-based, default the whole curve); interior parameters random when
    ``rng`` is given, evenly spaced otherwise."""
    P = np.asarray(P, dtype=float)
    a = 1.0 if start is None else start
    b = float(len(P)) if end is None else end
    if k == 1:
        params = [a]
    elif rng is None:
        params = np.linspace(a, b, k)
    else:
        params = np.concatenate([[a], np.sort(rng.uniform(a, b, k - 2)), [b]])
    return np.array([point_at(P, s) for s in params])


def near_query(rng, curves, k, noise, box=None, far_prob=0.2):
    """A ``k``-vertex query: usually a jittered resampling of a random curve,
    sometimes uniform in ``box`` (a ``(lo, hi)`` pair of corners)."""
    vs = [c.vertices if isinstance(c, Curve) else np.asarray(c, dtype=float) for c in curves]
    dim = vs[0].shape[1]
    if box is not None and rng.random() < far_prob:
        lo, hi = box
        return rng.uniform(lo, hi, size=(k, dim))
    P = vs[int(rng.integers(len(vs)))]
    return resample(P, k, rng) + rng.normal(scale=noise, size=(k, dim))


def subcurve_query(rng, P, k, noise):
    """A ``k``-vertex query following a random piece of ``P``."""
    P = np.asarray(P, dtype=float)
    n = len(P)
    s, e = np.sort(rng.uniform(1.0, n, 2)) if n > 1 else (1.0, 1.0)
    return resample(P, k, rng, s, e) + rng.normal(scale=noise, size=(k, P.shape[1]))


def bounding_box(curves, pad):
    allv = np.concatenate([np.asarray(c.vertices if isinstance(c, Curve) else c) for c in curves])
    return allv.min(axis=0) - pad, allv.max(axis=0) + pad
