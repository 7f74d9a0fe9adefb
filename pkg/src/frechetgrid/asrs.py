"""Subtrajectory range search over one long curve.

For every grid path ``C`` of the bounded grid the index stores the pairwise
disjoint subcurves of ``P`` that are within ``(1 + eps/2) delta`` of ``C``,
as ranges of ``P``'s 1-based parameter.  A query is rounded onto the grid
exactly as in the asymmetric near-neighbor index and reads one bucket.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import freespace
from .anns_asym import REJECTED, as_curves, round_query, setup_grid
from .errors import DimensionMismatch, InvalidParameter, QuerySizeMismatch
from .geometry import vertices_of
from .grid import DEFAULT_BUDGET, Grid, enumerate_paths, lattice_near_polyline

# extraction runs at a radius this much (relative) below the requested one
# so that endpoints computed from quadratic roots still pass the inclusive
# decision at the requested radius
SHRINK = 1e-9

_BATCH = 4096


def _batched(items, size):
    it = iter(items)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


@dataclass(frozen=True, order=True)
class SubcurveRange:
    """The subcurve ``P[start..end]`` in 1-based curve parameters."""

    start: float
    end: float

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "end", float(self.end))
        if not self.start <= self.end:
            raise InvalidParameter(f"range start {self.start} exceeds end {self.end}")

    def text(self):
        return f"{self.start!r}:{self.end!r}"

    @classmethod
    def parse(cls, s):
        a, b = s.split(":")
        return cls(float(a), float(b))


@dataclass(eq=False)
class AsrsIndex:
    delta: float
    eps: float
    k: int
    grid: Grid
    diameter_estimate: float
    buckets: dict
    curve_id: str
    curve: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.grid.dim

    @property
    def radius(self):
        return (1.0 + self.eps / 2.0) * self.delta

    def capacities(self):
        R = self.grid.cells_per_axis
        points = (R + 1) ** self.dim
        return {
            "cells_per_axis": R,
            "lattice_points": points,
            "path_count": points ** self.k,
            "bucket_count": len(self.buckets),
            "stored_ranges": sum(len(v) for v in self.buckets.values()),
        }


def _edge_labels(V, lo, hi):
    """Piece label of every edge interval on a batch of columns (-1 when
    empty).  Consecutive edges share a piece when the vertex between them is
    free and reached by the lower interval."""
    ne = freespace.nonempty(lo, hi)
    joined = np.zeros(ne.shape, dtype=bool)
    joined[..., 1:] = ne[..., 1:] & ne[..., :-1] & V[..., 1:-1] & (hi[..., :-1] >= 1.0)
    label = np.cumsum(ne & ~joined, axis=-1)
    return np.where(ne, label, -1)


def _piece_starts(labels, back_ne):
    """Edges holding the highest backward-reachable point of their piece."""
    out = np.zeros(back_ne.shape, dtype=bool)
    nxt = np.full(back_ne.shape[:-1], -2)
    for i in range(back_ne.shape[-1] - 1, -1, -1):
        here = back_ne[..., i]
        out[..., i] = here & (labels[..., i] != nxt)
        nxt = np.where(here, labels[..., i], nxt)
    return out


def extract_batch(P, Cs, threshold):
    """Ranges of :func:`extract_inclusion_minimal` for a batch of short curves.

    Parameters
    ----------
    P : array_like, shape (n, d)
    Cs : array_like, shape (B, k, d)
    threshold : float

    Returns
    -------
    list of list of SubcurveRange
        One list per curve of the batch.
    """
    P = vertices_of(P)
    Cs = np.asarray(Cs, dtype=float)
    if Cs.ndim != 3 or Cs.shape[2] != P.shape[1]:
        raise DimensionMismatch(f"batch shape {Cs.shape} against dimension {P.shape[1]}")
    if threshold < 0:
        raise InvalidParameter("threshold must be non-negative")
    r = threshold * (1.0 - SHRINK)
    B, k = Cs.shape[:2]
    if len(P) == 1:
        ok = np.all(freespace.point_dist(Cs, P[0]) <= r, axis=1)
        return [[SubcurveRange(1.0, 1.0)] if o else [] for o in ok]

    cols = [freespace.column(P, Cs[:, j], r) for j in range(k)]
    rows = [freespace.edge_rows(P, Cs[:, j - 1], Cs[:, j], r) for j in range(1, k)]

    # points of the left column from which the right column can be reached
    K_lo, K_hi = cols[-1][1], cols[-1][2]
    for j in range(k - 2, -1, -1):
        V0, lo0, hi0 = cols[j]
        K_lo, K_hi = freespace.backward_step(K_lo, K_hi, cols[j + 1][0], *rows[j], V0, lo0, hi0)

    V0, lo0, hi0 = cols[0]
    back_ne = freespace.nonempty(K_lo, K_hi)
    starts = _piece_starts(_edge_labels(V0, lo0, hi0), back_ne)
    edge_ix = np.arange(K_hi.shape[-1])
    top = np.where(starts, edge_ix + K_hi, -np.inf)

    out = [[] for _ in range(B)]
    prev_end = np.full(B, -np.inf)
    while True:
        cand = top > prev_end[:, None]
        live = np.flatnonzero(cand.any(axis=1))
        if len(live) == 0:
            return out
        edge = cand[live].argmax(axis=1)
        s = top[live, edge]
        e = _earliest_exit(cols, rows, live, edge, K_hi[live, edge])
        for b, sv, ev in zip(live.tolist(), s.tolist(), e.tolist()):
            if ev >= sv:
                out[b].append(SubcurveRange(sv + 1.0, ev + 1.0))
        # a start that cannot reach the right column (float noise) is skipped
        prev_end[live] = np.where(e >= s, e, s)


def _earliest_exit(cols, rows, live, edge, u):
    """Lowest right-column parameter reachable from the left-column point at
    local parameter ``u`` of ``edge`` (``-inf`` where nothing is reached)."""
    V, lo, hi = (a[live] for a in cols[0])
    s_lo = np.full(lo.shape, freespace.EMPTY_LO)
    s_hi = np.full(hi.shape, freespace.EMPTY_HI)
    at = np.arange(len(live))
    s_lo[at, edge] = u
    s_hi[at, edge] = u
    R_lo, R_hi = freespace.close_upward(s_lo, s_hi, V, lo, hi)
    for j in range(1, len(cols)):
        V1, lo1, hi1 = (a[live] for a in cols[j])
        B_lo, B_hi = (a[live] for a in rows[j - 1])
        R_lo, R_hi = freespace.forward_step(R_lo, R_hi, V, B_lo, B_hi, V1, lo1, hi1)
        V = V1
    ne = freespace.nonempty(R_lo, R_hi)
    first = np.where(ne, np.arange(R_lo.shape[-1]) + R_lo, np.inf).min(axis=1)
    return np.where(np.isfinite(first), first, -np.inf)


def extract_inclusion_minimal(P, C, threshold):
    """Disjoint subcurves of ``P`` within Fréchet distance ``threshold`` of ``C``.

    The left column of the free-space diagram (the column of ``C``'s first
    vertex) is swept bottom to top over its maximal free pieces.  In each
    piece the subcurve starts at the highest point from which the right
    column is still reachable and ends at the lowest right-column point
    reachable from there.  The sweep resumes strictly above that end, so
    the emitted ranges are pairwise disjoint.

    Parameters
    ----------
    P : Curve or array_like, shape (n, d)
        The long curve (vertical axis).
    C : Curve or array_like, shape (k, d)
        The short curve (horizontal axis).
    threshold : float
        Fréchet radius, inclusive.

    Returns
    -------
    list of SubcurveRange
        In increasing order of ``start``; empty when no subcurve of ``P`` is
        within ``threshold`` of ``C``.
    """
    P, C = vertices_of(P), vertices_of(C)
    if P.shape[1] != C.shape[1]:
        raise DimensionMismatch(f"dimension {P.shape[1]} vs {C.shape[1]}")
    return extract_batch(P, C[None], threshold)[0]


def build_asrs_index(P, k, delta, eps, budget=DEFAULT_BUDGET, exhaustive=False):
    """Bucket the disjoint near subcurves of ``P`` by grid path.

    Only grid paths with at least one subcurve of ``P`` within
    ``(1 + eps/2) delta`` are searched for ranges unless ``exhaustive`` asks
    for every path of the grid; both routes store the same buckets.
    """
    (curve,) = as_curves([P])
    grid, diam = setup_grid([curve], k, delta, eps, budget)
    r = (1.0 + eps / 2.0) * delta
    V = curve.vertices
    buckets = {}

    if exhaustive:
        lattice = [tuple(int(c) for c in p) for p in grid.lattice_points()]
        paths = ((path, grid.embed(path)) for path in enumerate_paths([lattice] * k, budget))
    else:
        lat = lattice_near_polyline(grid, V, r)
        pos = grid.embed(lat)
        found = freespace.matching_paths(V, pos, r, k, freespace.SUB)
        pts = [tuple(int(c) for c in p) for p in lat]
        paths = ((tuple(pts[i] for i in row), pos[row]) for row in found)

    for chunk in _batched(paths, _BATCH):
        found = extract_batch(V, np.stack([C for _, C in chunk]), r)
        for (key, _), ranges in zip(chunk, found):
            if ranges:
                buckets[key] = tuple(ranges)

    return AsrsIndex(
        delta=float(delta),
        eps=float(eps),
        k=int(k),
        grid=grid,
        diameter_estimate=diam,
        buckets=buckets,
        curve_id=curve.id,
        curve=V,
    )


def query_asrs(index, Q, counter=None):
    """Stored ranges for the rounded query, or ``REJECTED`` when ``Q``
    leaves the grid.  Every returned range is within ``(1 + eps) delta`` of
    ``Q``."""
    Q = vertices_of(Q)
    if len(Q) != index.k:
        raise QuerySizeMismatch(f"query has {len(Q)} vertices, index expects {index.k}")
    if Q.shape[1] != index.dim:
        raise DimensionMismatch(f"query dimension {Q.shape[1]}, index {index.dim}")
    path = round_query(index.grid, Q, counter)
    if path is None:
        return REJECTED
    if counter is not None:
        counter.keys += 1
        counter.lookups += 1
    return list(index.buckets.get(path, ()))
