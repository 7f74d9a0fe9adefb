"""Brute-force references for the indexes.

Each function answers the question an index answers, by direct scanning,
using only the geometry primitives.  They are slow on purpose.
"""

from __future__ import annotations

import numpy as np

from .asrs import SubcurveRange
from .errors import DimensionMismatch, InvalidParameter
from .geometry import (
    Curve,
    continuous_frechet_decide,
    discrete_frechet,
    point_at,
    subcurve,
    vertices_of,
)


def _items(curves):
    if isinstance(curves, dict):
        return [(str(k), vertices_of(v)) for k, v in curves.items()]
    out = []
    for i, c in enumerate(curves):
        if isinstance(c, Curve):
            out.append((c.id, c.vertices))
        else:
            out.append((str(i), vertices_of(c)))
    return out


def scan_near_neighbors(curves, Q, delta, eps, metric="continuous"):
    """Ids within ``delta`` and within ``(1 + eps) delta`` of ``Q``.

    Parameters
    ----------
    curves : dict or sequence
        ``{id: vertices}``, ``Curve`` objects or bare vertex arrays (ids are
        then positions as text).
    metric : {"continuous", "discrete"}

    Returns
    -------
    (set, set)
    """
    Q = vertices_of(Q)
    near, stretched = set(), set()
    for cid, P in _items(curves):
        if P.shape[1] != Q.shape[1]:
            raise DimensionMismatch(f"curve {cid} has dimension {P.shape[1]}, query {Q.shape[1]}")
        if metric == "continuous":
            if continuous_frechet_decide(P, Q, (1.0 + eps) * delta):
                stretched.add(cid)
                if continuous_frechet_decide(P, Q, delta):
                    near.add(cid)
        elif metric == "discrete":
            d = discrete_frechet(P, Q)
            if d <= (1.0 + eps) * delta:
                stretched.add(cid)
            if d <= delta:
                near.add(cid)
        else:
            raise InvalidParameter(f"unknown metric {metric!r}")
    return near, stretched


def exact_diameter(vertices):
    """Largest pairwise distance, by comparing every pair."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    best = 0.0
    for i in range(len(v)):
        diff = v[i + 1:] - v[i]
        if len(diff):
            best = max(best, float(np.sqrt((diff * diff).sum(axis=1)).max()))
    return best


def sampled_subcurve_witness(P, Q, delta, resolution=1e-2):
    """Some ``P[start..end]`` within ``delta`` of ``Q`` on a parameter grid.

    Start and end parameters are taken from ``1, 1 + resolution, ..., n``
    (plus ``n`` itself).  A ``None`` answer does not prove that no subcurve
    is close; it only says none was found at this resolution.
    """
    P, Q = vertices_of(P), vertices_of(Q)
    if P.shape[1] != Q.shape[1]:
        raise DimensionMismatch(f"dimension {P.shape[1]} vs {Q.shape[1]}")
    n = len(P)
    params = np.append(np.arange(1.0, n, resolution), float(n))
    pos = np.array([point_at(P, s) for s in params])
    starts = params[np.linalg.norm(pos - Q[0], axis=1) <= delta]
    ends = params[np.linalg.norm(pos - Q[-1], axis=1) <= delta]
    for s in starts:
        for e in ends[ends >= s]:
            if continuous_frechet_decide(subcurve(P, s, e), Q, delta):
                return SubcurveRange(float(s), float(e))
    return None


def window_regions(points, theta, window):
    """Regions with at least ``theta`` points timed inside the closed window."""
    q1, q2 = window
    counts = {}
    for p in points:
        region, t = (p["region"], p["t"]) if isinstance(p, dict) else (
            (p.region, p.t) if hasattr(p, "region") else p)
        if q1 <= t <= q2:
            counts[str(region)] = counts.get(str(region), 0) + 1
    return {r for r, c in counts.items() if c >= theta}
