"""Polygonal curves and the Fréchet primitives the indexes are built on."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import freespace
from .errors import DimensionMismatch, EmptyInput, InvalidParameter


@dataclass(frozen=True, eq=False)
class Curve:
    """An identified polygonal curve with vertices stored as an ``(m, d)`` array.

    ``P(i + t) = (1 - t) p_i + t p_{i+1}`` for the 1-based parameter
    ``i + t`` in ``[1, m]``.
    """

    id: str
    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or len(v) == 0 or v.shape[1] == 0:
            raise InvalidParameter(f"curve {self.id!r} needs at least one d-dimensional vertex")
        if not np.all(np.isfinite(v)):
            raise InvalidParameter(f"curve {self.id!r} has non-finite coordinates")
        v.setflags(write=False)
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    @property
    def dim(self):
        return self.vertices.shape[1]


def vertices_of(P):
    """Vertex array of a :class:`Curve` or anything array-like."""
    if isinstance(P, Curve):
        return P.vertices
    v = np.asarray(P, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if len(v) == 0:
        raise EmptyInput("curve has no vertices")
    return v


def _pair(P, Q):
    a, b = vertices_of(P), vertices_of(Q)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"dimension {a.shape[1]} vs {b.shape[1]}")
    return a, b


def distance_matrix(a, b):
    return freespace.point_dist(a[:, None, :], b[None, :, :])


def discrete_frechet(P, Q):
    """Exact discrete Fréchet distance by the O(mk) coupling recurrence."""
    a, b = _pair(P, Q)
    d = distance_matrix(a, b).tolist()
    m, k = len(a), len(b)
    prev = [0.0] * k
    for i in range(m):
        row = d[i]
        cur = [0.0] * k
        for j in range(k):
            if i == 0 and j == 0:
                best = 0.0
            elif i == 0:
                best = cur[j - 1]
            elif j == 0:
                best = prev[0]
            else:
                best = min(prev[j], prev[j - 1], cur[j - 1])
            cur[j] = row[j] if row[j] > best else best
        prev = cur
    return prev[-1]


def discrete_frechet_decide(P, Q, delta):
    """``discrete_frechet(P, Q) <= delta`` without computing the value."""
    a, b = _pair(P, Q)
    F = distance_matrix(b, a) <= delta
    reach = freespace.discrete_init(F[0])
    for j in range(1, len(b)):
        reach = freespace.discrete_step(reach, F[j])
    return bool(reach[-1])


def continuous_frechet_decide(P, Q, delta):
    """Decide ``d_F(P, Q) <= delta`` (inclusive) via free-space reachability."""
    if delta < 0:
        raise InvalidParameter("delta must be non-negative")
    a, b = _pair(P, Q)
    if freespace.point_dist(a[0], b[0]) > delta or freespace.point_dist(a[-1], b[-1]) > delta:
        return False
    return freespace.decide(a, b, delta)


def frechet_decide(P, Q, delta, metric="continuous"):
    if metric == "continuous":
        return continuous_frechet_decide(P, Q, delta)
    if metric == "discrete":
        return discrete_frechet_decide(P, Q, delta)
    raise InvalidParameter(f"unknown metric {metric!r}")


def simplify_indices(P, mu, keep_last=True):
    """Indices kept by greedy ball-escape simplification.

    Starting from the first vertex, the next kept vertex is the first one
    strictly outside the ball of radius ``mu`` around the current one.  With
    ``keep_last`` the final vertex is appended when it was swallowed by the
    last ball; otherwise trailing swallowed vertices are dropped, so every
    edge of the result is longer than ``mu``.
    """
    v = vertices_of(P)
    kept = [0]
    cur = v[0]
    for i in range(1, len(v)):
        if freespace.point_dist(v[i], cur) > mu:
            kept.append(i)
            cur = v[i]
    if keep_last and kept[-1] != len(v) - 1:
        kept.append(len(v) - 1)
    return kept


def simplify_mu(P, mu, keep_last=True):
    """μ-simplification: a vertex subsequence within discrete Fréchet ``mu``
    of ``P`` whose edges are all longer than ``mu`` except possibly the last."""
    if mu < 0:
        raise InvalidParameter("mu must be non-negative")
    v = vertices_of(P)
    idx = simplify_indices(v, mu, keep_last)
    out = v[idx]
    if isinstance(P, Curve):
        return Curve(P.id, out)
    return out


def approx_diameter(vertices, seed=0):
    """Greedy diameter estimate: farthest distance from ``vertices[seed]``.

    Within a factor two of the exact diameter.
    """
    v = np.asarray(vertices, dtype=float)
    if v.size == 0:
        raise EmptyInput("no vertices")
    if v.ndim == 1:
        v = v[:, None]
    return float(freespace.point_dist(v, v[seed]).max())


def point_at(P, s):
    """Point ``P(s)`` for a 1-based parameter ``s`` in ``[1, m]``."""
    v = vertices_of(P)
    i = int(np.floor(s)) - 1
    if i >= len(v) - 1:
        return v[-1].copy()
    t = s - (i + 1)
    if t == 0.0:
        return v[i].copy()
    return (1.0 - t) * v[i] + t * v[i + 1]


def subcurve(P, start, end):
    """Vertices of ``P[start..end]`` for 1-based parameters ``start <= end``."""
    v = vertices_of(P)
    if not 1.0 <= start <= end <= len(v):
        raise InvalidParameter(f"bad subcurve range [{start}, {end}] for {len(v)} vertices")
    inner = [i for i in range(len(v)) if start < i + 1 < end]
    pts = [point_at(v, start)] + [v[i] for i in inner] + [point_at(v, end)]
    return np.array(pts)
